//! The Heisenberg group of dimension `4k + 1` with its standard contact
//! metric structure.
//!
//! Global coordinates are `(x_1..x_m, y_1..y_m, z)` with `m = 2k`. The
//! contact form is `eta = (dz - sum_i y_i dx_i) / 2`, the characteristic
//! field is `2 d/dz`, and the metric is `(sum dx^2 + sum dy^2) / 4 +
//! eta (x) eta`. Everything is polynomial in the coordinates, so analytic
//! derivatives to second order are supplied exactly.

use super::{box_sampler, Model};
use crate::chart::Chart;

pub fn model(k: usize) -> Model {
    assert!(k >= 1, "heisenberg model needs k >= 1");
    let m = 2 * k;
    let d = 4 * k + 1;
    let zi = d - 1; // index of the z coordinate
    let del = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

    let eta_fn = move |p: &[f64]| -> Vec<f64> {
        let mut eta = vec![0.0; d];
        for i in 0..m {
            eta[i] = -p[m + i] / 2.0;
        }
        eta[zi] = 0.5;
        eta
    };

    let metric = move |p: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; d * d];
        let eta = eta_fn(p);
        for i in 0..m {
            g[i * d + i] += 0.25;
            g[(m + i) * d + (m + i)] += 0.25;
        }
        for (i, gi) in g.chunks_mut(d).enumerate() {
            for (j, v) in gi.iter_mut().enumerate() {
                *v += eta[i] * eta[j];
            }
        }
        g
    };

    let metric_partials = move |p: &[f64]| -> Vec<f64> {
        // Only eta depends on the point, through the y block:
        // d_{y_k} (eta_i eta_j) touches the x rows and the z row.
        let mut dg = vec![0.0; d * d * d];
        for kk in 0..m {
            let dy = m + kk; // derivative coordinate y_k
            for i in 0..m {
                for j in 0..m {
                    dg[(dy * d + i) * d + j] =
                        (del(i, kk) * p[m + j] + del(j, kk) * p[m + i]) / 4.0;
                }
                dg[(dy * d + i) * d + zi] = -del(i, kk) / 4.0;
                dg[(dy * d + zi) * d + i] = -del(i, kk) / 4.0;
            }
        }
        dg
    };

    let metric_second_partials = move |_p: &[f64]| -> Vec<f64> {
        let mut ddg = vec![0.0; d * d * d * d];
        for kk in 0..m {
            for ll in 0..m {
                let (dk, dl) = (m + kk, m + ll);
                for i in 0..m {
                    for j in 0..m {
                        ddg[((dl * d + dk) * d + i) * d + j] =
                            (del(i, kk) * del(j, ll) + del(j, kk) * del(i, ll)) / 4.0;
                    }
                }
            }
        }
        ddg
    };

    let xi = move |_p: &[f64]| -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[zi] = 2.0;
        v
    };

    let phi_mixed = move |p: &[f64]| -> Vec<f64> {
        let mut phi = vec![0.0; d * d];
        for i in 0..m {
            phi[i * d + (m + i)] = -1.0; // phi maps d/dx_i towards -d/dy_i
            phi[(m + i) * d + i] = 1.0;
            phi[(m + i) * d + zi] = p[m + i];
        }
        phi
    };

    let phi_lower = move |p: &[f64]| -> Vec<f64> {
        // Independent closed form: phi_ij = -(d eta)_ij with
        // (d eta)_ij = (d_i eta_j - d_j eta_i) / 2. The only nonconstant
        // entries of eta are eta_{x_j} = -y_j / 2.
        let _ = p;
        let mut phi = vec![0.0; d * d];
        for i in 0..m {
            // d_{y_i} eta_{x_i} = -1/2, so (d eta)_{y_i x_i} = -1/4.
            phi[(m + i) * d + i] = 0.25;
            phi[i * d + (m + i)] = -0.25;
        }
        phi
    };

    let mut axis_point = vec![0.0; d];
    axis_point[0] = 0.5;
    Model {
        name: "heisenberg",
        dim: d,
        k,
        space_form_constant: -3.0,
        chart: Chart {
            dim: d,
            metric: Box::new(metric),
            metric_partials: Some(Box::new(metric_partials)),
            metric_second_partials: Some(Box::new(metric_second_partials)),
        },
        eta: Box::new(eta_fn),
        xi: Box::new(xi),
        phi_mixed: Box::new(phi_mixed),
        phi_lower: Box::new(phi_lower),
        axis_point,
        sampler: box_sampler(d, 1.0),
    }
}
