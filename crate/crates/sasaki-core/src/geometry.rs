//! Levi-Civita connection and curvature from a chart.
//!
//! Index conventions used throughout the crate:
//! * Christoffel symbols are stored flat as `gamma[(i*d + j)*d + k]` for
//!   the symbol with lower indices `i j` and upper index `k`.
//! * Their partials prepend the derivative slot: `dgamma[((m*d+i)*d+j)*d+k]`.
//! * The curvature tensor has slots `(k, j, i, ^h)` and components
//!   `R_kji^h = d_k G_ji^h - d_j G_ki^h + G_kl^h G_ji^l - G_jl^h G_ki^l`,
//!   so the first two slots are the plane of rotation.

use crate::chart::{metric_jets, Chart};
use crate::tensor::{DenseTensor, Slot};

/// Inverse of a small dense matrix by Gauss-Jordan elimination with partial
/// pivoting. Panics on singular input.
pub fn invert_matrix(dim: usize, m: &[f64]) -> Vec<f64> {
    assert_eq!(m.len(), dim * dim, "invert_matrix: shape");
    let mut a = m.to_vec();
    let mut inv = vec![0.0; dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = 1.0;
    }
    for col in 0..dim {
        let pivot_row = (col..dim)
            .max_by(|&r, &s| {
                a[r * dim + col]
                    .abs()
                    .partial_cmp(&a[s * dim + col].abs())
                    .unwrap()
            })
            .unwrap();
        let pivot = a[pivot_row * dim + col];
        assert!(pivot.abs() > 0.0, "invert_matrix: singular matrix");
        if pivot_row != col {
            for k in 0..dim {
                a.swap(col * dim + k, pivot_row * dim + k);
                inv.swap(col * dim + k, pivot_row * dim + k);
            }
        }
        let inv_pivot = 1.0 / a[col * dim + col];
        for k in 0..dim {
            a[col * dim + k] *= inv_pivot;
            inv[col * dim + k] *= inv_pivot;
        }
        for row in 0..dim {
            if row == col {
                continue;
            }
            let f = a[row * dim + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..dim {
                a[row * dim + k] -= f * a[col * dim + k];
                inv[row * dim + k] -= f * inv[col * dim + k];
            }
        }
    }
    inv
}

/// Christoffel symbols of the second kind from the inverse metric and the
/// metric partials (`dg[m][i][j]`).
pub fn christoffel(dim: usize, g_inv: &[f64], dg: &[f64]) -> Vec<f64> {
    let d = dim;
    let mut gamma = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut sum = 0.0;
                for l in 0..d {
                    let term = dg[(i * d + j) * d + l] + dg[(j * d + i) * d + l]
                        - dg[(l * d + i) * d + j];
                    sum += g_inv[k * d + l] * term;
                }
                gamma[(i * d + j) * d + k] = 0.5 * sum;
            }
        }
    }
    gamma
}

/// Partials of the Christoffel symbols, derivative slot first, from the
/// metric jets. Uses `d g^{-1} = -g^{-1} (d g) g^{-1}`.
pub fn christoffel_partials(
    dim: usize,
    g_inv: &[f64],
    dg: &[f64],
    ddg: &[f64],
) -> Vec<f64> {
    let d = dim;
    // dginv[m][k][l]
    let mut dginv = vec![0.0; d * d * d];
    for m in 0..d {
        for k in 0..d {
            for l in 0..d {
                let mut sum = 0.0;
                for a in 0..d {
                    for b in 0..d {
                        sum -= g_inv[k * d + a] * dg[(m * d + a) * d + b] * g_inv[b * d + l];
                    }
                }
                dginv[(m * d + k) * d + l] = sum;
            }
        }
    }
    let mut dgamma = vec![0.0; d * d * d * d];
    for m in 0..d {
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut sum = 0.0;
                    for l in 0..d {
                        let first = dg[(i * d + j) * d + l] + dg[(j * d + i) * d + l]
                            - dg[(l * d + i) * d + j];
                        let second = ddg[((m * d + i) * d + j) * d + l]
                            + ddg[((m * d + j) * d + i) * d + l]
                            - ddg[((m * d + l) * d + i) * d + j];
                        sum += dginv[(m * d + k) * d + l] * first + g_inv[k * d + l] * second;
                    }
                    dgamma[((m * d + i) * d + j) * d + k] = 0.5 * sum;
                }
            }
        }
    }
    dgamma
}

/// Curvature tensor with slots `(k, j, i, ^h)` from the connection and its
/// partials.
pub fn riemann(dim: usize, gamma: &[f64], dgamma: &[f64]) -> DenseTensor {
    let d = dim;
    DenseTensor::from_fn(
        dim,
        &[Slot::Down, Slot::Down, Slot::Down, Slot::Up],
        |idx| {
            let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
            let mut r = dgamma[((k * d + j) * d + i) * d + h] - dgamma[((j * d + k) * d + i) * d + h];
            for l in 0..d {
                r += gamma[(k * d + l) * d + h] * gamma[(j * d + i) * d + l]
                    - gamma[(j * d + l) * d + h] * gamma[(k * d + i) * d + l];
            }
            r
        },
    )
}

/// Covariant derivative of an arbitrary tensor. `dt` holds the coordinate
/// partials of `t` with the derivative slot first (length `dim * t.len()`).
/// The result prepends a covariant slot for the derivative direction.
pub fn covariant_derivative(t: &DenseTensor, gamma: &[f64], dt: &[f64]) -> DenseTensor {
    let d = t.dim();
    let rank = t.rank();
    let size = t.data().len();
    assert_eq!(dt.len(), d * size, "covariant_derivative: partials length");
    let mut slots = vec![Slot::Down];
    slots.extend_from_slice(t.slots());
    DenseTensor::from_fn(d, &slots, |idx| {
        let m = idx[0];
        let inner = &idx[1..];
        let mut flat = 0;
        for &i in inner {
            flat = flat * d + i;
        }
        let mut val = dt[m * size + flat];
        let mut scratch = inner.to_vec();
        for s in 0..rank {
            let i_s = inner[s];
            for l in 0..d {
                scratch[s] = l;
                let mut lflat = 0;
                for &i in &scratch {
                    lflat = lflat * d + i;
                }
                match t.slots()[s] {
                    Slot::Up => val += gamma[(m * d + l) * d + i_s] * t.data()[lflat],
                    Slot::Down => val -= gamma[(m * d + i_s) * d + l] * t.data()[lflat],
                }
            }
            scratch[s] = i_s;
        }
        val
    })
}

/// Everything the rest of the crate needs about a metric at one point.
pub struct CurvatureData {
    pub dim: usize,
    pub point: Vec<f64>,
    pub g: DenseTensor,
    pub g_inv: DenseTensor,
    /// `gamma[(i*d+j)*d+k]`, see module docs.
    pub gamma: Vec<f64>,
    /// `dgamma[((m*d+i)*d+j)*d+k]`.
    pub dgamma: Vec<f64>,
    pub riemann: DenseTensor,
    /// Largest finite-difference error estimate that entered the jets;
    /// zero when the chart supplied everything analytically.
    pub fd_error: f64,
}

/// Computes metric, connection, and curvature at a point of a chart.
pub fn curvature_at(chart: &Chart, x: &[f64], step: f64) -> CurvatureData {
    let d = chart.dim;
    let g_flat = (chart.metric)(x);
    assert_eq!(g_flat.len(), d * d, "chart metric has wrong length");
    let g_inv_flat = invert_matrix(d, &g_flat);
    let (dg, ddg, fd_error) = metric_jets(chart, x, step);
    let gamma = christoffel(d, &g_inv_flat, &dg);
    let dgamma = christoffel_partials(d, &g_inv_flat, &dg, &ddg);
    let riemann_t = riemann(d, &gamma, &dgamma);
    CurvatureData {
        dim: d,
        point: x.to_vec(),
        g: DenseTensor::from_data(d, &[Slot::Down, Slot::Down], g_flat),
        g_inv: DenseTensor::from_data(d, &[Slot::Up, Slot::Up], g_inv_flat),
        gamma,
        dgamma,
        riemann: riemann_t,
        fd_error,
    }
}

impl CurvatureData {
    /// Coordinate partials of the metric closure of `chart`, recomputed on
    /// demand for covariant derivatives of other fields.
    pub fn metric_tensor(&self) -> &DenseTensor {
        &self.g
    }

    /// Curvature with the last slot lowered, slots `(k, j, i, h)`.
    pub fn riemann_lowered(&self) -> DenseTensor {
        self.riemann.lower_slot(3, &self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclidean(dim: usize) -> Chart {
        Chart {
            dim,
            metric: Box::new(move |_x: &[f64]| {
                let mut g = vec![0.0; dim * dim];
                for i in 0..dim {
                    g[i * dim + i] = 1.0;
                }
                g
            }),
            metric_partials: None,
            metric_second_partials: None,
        }
    }

    /// Flat plane in polar coordinates `(r, theta)`.
    fn polar() -> Chart {
        Chart {
            dim: 2,
            metric: Box::new(|x: &[f64]| vec![1.0, 0.0, 0.0, x[0] * x[0]]),
            metric_partials: None,
            metric_second_partials: None,
        }
    }

    #[test]
    fn euclidean_chart_is_flat() {
        let chart = euclidean(3);
        let data = curvature_at(&chart, &[0.3, -0.2, 0.9], 1e-3);
        assert!(data.gamma.iter().all(|v| v.abs() < 1e-10));
        assert!(data.riemann.max_abs() < 1e-8);
    }

    #[test]
    fn polar_connection_matches_closed_form() {
        let chart = polar();
        let r = 1.7;
        let data = curvature_at(&chart, &[r, 0.4], 1e-3);
        let d = 2;
        // Nonzero symbols: G_tt^r = -r, G_rt^t = G_tr^t = 1/r.
        assert!((data.gamma[(1 * d + 1) * d] - (-r)).abs() < 1e-9);
        assert!((data.gamma[(0 * d + 1) * d + 1] - 1.0 / r).abs() < 1e-9);
        assert!((data.gamma[(1 * d + 0) * d + 1] - 1.0 / r).abs() < 1e-9);
        // Flat space: curvature vanishes even though the symbols do not.
        assert!(data.riemann.max_abs() < 1e-7);
    }

    #[test]
    fn hyperbolic_plane_has_constant_negative_curvature() {
        // Upper half-plane metric y^{-2} (dx^2 + dy^2), sectional curvature -1:
        // lowered curvature must equal -(g_ji g_kh - g_ki g_jh).
        let chart = Chart {
            dim: 2,
            metric: Box::new(|x: &[f64]| {
                let w = 1.0 / (x[1] * x[1]);
                vec![w, 0.0, 0.0, w]
            }),
            metric_partials: None,
            metric_second_partials: None,
        };
        let data = curvature_at(&chart, &[0.3, 1.4], 1e-3);
        let g = &data.g;
        let expect = DenseTensor::from_fn(2, &[Slot::Down; 4], |idx| {
            let (k, j, i, h) = (idx[0], idx[1], idx[2], idx[3]);
            -(g.get(&[j, i]) * g.get(&[k, h]) - g.get(&[k, i]) * g.get(&[j, h]))
        });
        let diff = data.riemann_lowered().sub(&expect).max_abs();
        assert!(diff < 1e-6, "curvature differs from constant-curvature form by {diff}");
    }

    #[test]
    fn metric_is_parallel() {
        let chart = polar();
        let x = [1.3, 0.7];
        let data = curvature_at(&chart, &x, 1e-3);
        let dg = crate::chart::fd_partials(&*chart.metric, &x, 1e-3);
        let nabla_g = covariant_derivative(&data.g, &data.gamma, &dg);
        assert!(nabla_g.max_abs() < 1e-9, "nabla g = {}", nabla_g.max_abs());
    }

    #[test]
    fn covariant_derivative_of_vector_in_polar() {
        // V = d/dtheta has nabla_r V = (1/r) V and nabla_theta V = -r d/dr.
        let chart = polar();
        let r = 1.6;
        let data = curvature_at(&chart, &[r, 0.2], 1e-3);
        let v = DenseTensor::from_data(2, &[Slot::Up], vec![0.0, 1.0]);
        let dv = vec![0.0; 4];
        let nabla_v = covariant_derivative(&v, &data.gamma, &dv);
        assert!((nabla_v.get(&[0, 0]) - 0.0).abs() < 1e-10);
        assert!((nabla_v.get(&[0, 1]) - 1.0 / r).abs() < 1e-9);
        assert!((nabla_v.get(&[1, 0]) - (-r)).abs() < 1e-9);
        assert!((nabla_v.get(&[1, 1]) - 0.0).abs() < 1e-10);
    }

    #[test]
    fn first_bianchi_for_a_generic_analytic_metric() {
        // A smooth non-constant metric with analytic partials supplied, to
        // exercise the analytic jet path: g = I + outer corrections.
        let chart = Chart {
            dim: 3,
            metric: Box::new(|x: &[f64]| {
                let mut g = vec![0.0; 9];
                for i in 0..3 {
                    g[i * 3 + i] = 1.0 + 0.1 * (x[i]).sin().powi(2);
                }
                g[0 * 3 + 1] = 0.05 * x[2];
                g[1 * 3 + 0] = 0.05 * x[2];
                g
            }),
            metric_partials: None,
            metric_second_partials: None,
        };
        let data = curvature_at(&chart, &[0.4, -0.6, 0.3], 1e-3);
        // R_[kji]^h = 0.
        let skew = data.riemann.skew_symmetrize(&[0, 1, 2]);
        assert!(
            skew.max_abs() < 1e-7 * (1.0 + data.riemann.max_abs()),
            "first Bianchi residual {}",
            skew.max_abs()
        );
    }
}
