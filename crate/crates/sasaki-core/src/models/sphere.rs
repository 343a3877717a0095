//! The unit sphere of dimension `4k + 1`, embedded in complex space.
//!
//! The sphere `S^{4k+1}` sits inside `R^{4k+2}` identified with `C^{2k+1}`.
//! We work in the graph chart over the last coordinate,
//! `X(u) = (u, s)` with `s = sqrt(1 - |u|^2)`, valid for `|u| < 1`. The
//! contact structure comes from the ambient complex structure `J`:
//! the characteristic field is `J X`, the contact form is its metric dual,
//! and `phi` is minus the tangential projection of `J`.

use super::{ball_sampler, Model};
use crate::chart::Chart;

/// Applies the ambient complex structure pairing coordinate `a` with
/// `a + n`: `J e_a = e_{a+n}`, `J e_{a+n} = -e_a`.
fn j_apply(n: usize, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * n];
    for a in 0..n {
        out[a] = -v[a + n];
        out[a + n] = v[a];
    }
    out
}

/// Ambient position over the chart point.
fn ambient(u: &[f64]) -> Vec<f64> {
    let s = (1.0 - u.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let mut x = u.to_vec();
    x.push(s);
    x
}

/// Tangent basis vector `E_i = e_i - (u_i / s) e_last` of the graph chart.
fn tangent_basis(u: &[f64], i: usize) -> Vec<f64> {
    let d = u.len();
    let s = (1.0 - u.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let mut e = vec![0.0; d + 1];
    e[i] = 1.0;
    e[d] = -u[i] / s;
    e
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `phi(E_i)` as an ambient vector: minus the tangential projection of
/// `J E_i`, which works out to `-J E_i - eta_i X`.
fn phi_of_basis(n: usize, u: &[f64], i: usize) -> Vec<f64> {
    let x = ambient(u);
    let jx = j_apply(n, &x);
    let e = tangent_basis(u, i);
    let eta_i = dot(&jx, &e);
    let je = j_apply(n, &e);
    je.iter()
        .zip(&x)
        .map(|(jev, xv)| -jev - eta_i * xv)
        .collect()
}

pub fn model(k: usize) -> Model {
    assert!(k >= 1, "sphere model needs k >= 1");
    let d = 4 * k + 1;
    let n = 2 * k + 1; // complex dimension of the ambient space
    let metric = move |u: &[f64]| -> Vec<f64> {
        let s2 = 1.0 - u.iter().map(|v| v * v).sum::<f64>();
        let mut g = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                g[i * d + j] = u[i] * u[j] / s2;
                if i == j {
                    g[i * d + j] += 1.0;
                }
            }
        }
        g
    };
    let metric_partials = move |u: &[f64]| -> Vec<f64> {
        let w = 1.0 / (1.0 - u.iter().map(|v| v * v).sum::<f64>());
        let mut dg = vec![0.0; d * d * d];
        for m in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let mut v = 2.0 * u[i] * u[j] * u[m] * w * w;
                    if i == m {
                        v += u[j] * w;
                    }
                    if j == m {
                        v += u[i] * w;
                    }
                    dg[(m * d + i) * d + j] = v;
                }
            }
        }
        dg
    };
    let metric_second_partials = move |u: &[f64]| -> Vec<f64> {
        let w = 1.0 / (1.0 - u.iter().map(|v| v * v).sum::<f64>());
        let del = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut ddg = vec![0.0; d * d * d * d];
        for p in 0..d {
            for q in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        let v = (del(i, q) * del(j, p) + del(j, q) * del(i, p)) * w
                            + 2.0 * (del(i, q) * u[j] + del(j, q) * u[i]) * u[p] * w * w
                            + 2.0 * (del(i, p) * u[j] * u[q]
                                + del(j, p) * u[i] * u[q]
                                + del(q, p) * u[i] * u[j])
                                * w
                                * w
                            + 8.0 * u[i] * u[j] * u[q] * u[p] * w * w * w;
                        ddg[((p * d + q) * d + i) * d + j] = v;
                    }
                }
            }
        }
        ddg
    };
    let eta = move |u: &[f64]| -> Vec<f64> {
        let x = ambient(u);
        let jx = j_apply(n, &x);
        (0..d).map(|i| dot(&jx, &tangent_basis(u, i))).collect()
    };
    let xi = move |u: &[f64]| -> Vec<f64> {
        // J X is tangent; the chart components of a tangent vector are its
        // first d ambient components.
        let jx = j_apply(n, &ambient(u));
        jx[..d].to_vec()
    };
    let phi_mixed = move |u: &[f64]| -> Vec<f64> {
        let mut phi = vec![0.0; d * d];
        for i in 0..d {
            let w = phi_of_basis(n, u, i);
            phi[i * d..(i + 1) * d].copy_from_slice(&w[..d]);
        }
        phi
    };
    let phi_lower = move |u: &[f64]| -> Vec<f64> {
        // Ambient inner products <phi(E_i), E_j>, independent of the chart
        // metric components.
        let mut phi = vec![0.0; d * d];
        for i in 0..d {
            let w = phi_of_basis(n, u, i);
            for j in 0..d {
                phi[i * d + j] = dot(&w, &tangent_basis(u, j));
            }
        }
        phi
    };
    let mut axis_point = vec![0.0; d];
    axis_point[0] = 0.3;
    Model {
        name: "sphere",
        dim: d,
        k,
        space_form_constant: 1.0,
        chart: Chart {
            dim: d,
            metric: Box::new(metric),
            metric_partials: Some(Box::new(metric_partials)),
            metric_second_partials: Some(Box::new(metric_second_partials)),
        },
        eta: Box::new(eta),
        xi: Box::new(xi),
        phi_mixed: Box::new(phi_mixed),
        phi_lower: Box::new(phi_lower),
        axis_point,
        sampler: ball_sampler(d, 0.8),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature_at;

    #[test]
    fn connection_matches_graph_chart_closed_form() {
        // In the graph chart of the unit sphere the Christoffel symbols are
        // G_ij^k = u^k g_ij.
        let m = model(1);
        let u = [0.25, -0.1, 0.05, 0.3, -0.2];
        let data = curvature_at(&m.chart, &u, 1e-3);
        let d = m.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let expect = u[k] * data.g.get(&[i, j]);
                    worst = worst.max((data.gamma[(i * d + j) * d + k] - expect).abs());
                }
            }
        }
        assert!(worst < 1e-10, "closed-form connection residual {worst}");
    }

    #[test]
    fn curvature_is_constant_unit() {
        // R_kji^h = g_ji d_k^h - g_ki d_j^h on the unit sphere.
        let m = model(1);
        let u = [0.1, 0.2, -0.3, 0.0, 0.15];
        let data = curvature_at(&m.chart, &u, 1e-3);
        let d = m.dim;
        let expect = crate::tensor::DenseTensor::from_fn(
            d,
            &[
                crate::tensor::Slot::Down,
                crate::tensor::Slot::Down,
                crate::tensor::Slot::Down,
                crate::tensor::Slot::Up,
            ],
            |idx| {
                let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
                let del = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                data.g.get(&[j, i]) * del(k, h) - data.g.get(&[k, i]) * del(j, h)
            },
        );
        let diff = data.riemann.sub(&expect).max_abs();
        assert!(diff < 1e-9, "unit-curvature residual {diff}");
    }

    #[test]
    fn fields_are_tangent_consistent() {
        let m = model(1);
        let u = [0.2, 0.1, -0.25, 0.05, 0.1];
        // eta must be the metric dual of xi.
        let g = (m.chart.metric)(&u);
        let eta = (m.eta)(&u);
        let xi = (m.xi)(&u);
        let d = m.dim;
        for i in 0..d {
            let mut dual = 0.0;
            for j in 0..d {
                dual += g[i * d + j] * xi[j];
            }
            assert!((dual - eta[i]).abs() < 1e-12, "slot {i}");
        }
    }
}
