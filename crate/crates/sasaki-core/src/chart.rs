//! Coordinate charts and finite-difference derivatives.
//!
//! A chart is the metric as a function of coordinates, optionally with
//! closed-form first and second partials. Wherever analytic derivatives are
//! missing, fourth-order central differences with a step-halving error
//! estimate fill in.

/// A vector-valued function of the chart coordinates, returning a flat
/// row-major buffer of fixed length.
pub type FieldFn = dyn Fn(&[f64]) -> Vec<f64> + Sync;

/// A coordinate chart: the metric and whatever analytic derivative data the
/// model can supply.
pub struct Chart {
    pub dim: usize,
    /// Metric components, row-major `g[i][j]`, length `dim^2`.
    pub metric: Box<FieldFn>,
    /// First partials with the derivative slot first: `dg[m][i][j]`,
    /// length `dim^3`.
    pub metric_partials: Option<Box<FieldFn>>,
    /// Second partials `ddg[p][q][i][j]`, length `dim^4`, symmetric in the
    /// two derivative slots.
    pub metric_second_partials: Option<Box<FieldFn>>,
}

/// Fourth-order central difference of `f` along coordinate `m` with step `h`.
pub fn fd_directional(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], m: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    let sample = |y: &mut Vec<f64>, offset: f64| {
        y[m] = x[m] + offset;
        f(y)
    };
    let f_p2 = sample(&mut y, 2.0 * h);
    let f_p1 = sample(&mut y, h);
    let f_m1 = sample(&mut y, -h);
    let f_m2 = sample(&mut y, -2.0 * h);
    f_p2.iter()
        .zip(&f_p1)
        .zip(f_m1.iter().zip(&f_m2))
        .map(|((p2, p1), (m1, m2))| (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h))
        .collect()
}

/// All first partials of `f`, derivative slot first. Computes the stencil at
/// steps `h` and `h/2` and returns the finer result together with the
/// largest component difference between the two, which bounds the truncation
/// error of the coarser stencil.
pub fn fd_partials_with_error(
    f: &dyn Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    h: f64,
) -> (Vec<f64>, f64) {
    let dim = x.len();
    let mut coarse = Vec::new();
    let mut fine = Vec::new();
    for m in 0..dim {
        coarse.extend(fd_directional(f, x, m, h));
        fine.extend(fd_directional(f, x, m, 0.5 * h));
    }
    let err = coarse
        .iter()
        .zip(&fine)
        .fold(0.0f64, |e, (c, fval)| e.max((c - fval).abs()));
    (fine, err)
}

/// First partials without the error estimate, for use inside nested
/// differences where the extra evaluations would be wasted.
pub fn fd_partials(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<f64> {
    let dim = x.len();
    let mut out = Vec::new();
    for m in 0..dim {
        out.extend(fd_directional(f, x, m, h));
    }
    out
}

/// First and second metric partials at `x`, analytic where the chart
/// provides them and finite-difference otherwise. Returns
/// `(dg, ddg, fd_error)` with `fd_error = 0` when everything was analytic.
pub fn metric_jets(chart: &Chart, x: &[f64], step: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let mut err = 0.0f64;
    let dg = match &chart.metric_partials {
        Some(f) => f(x),
        None => {
            let (v, e) = fd_partials_with_error(&*chart.metric, x, step);
            err = err.max(e);
            v
        }
    };
    let ddg = match &chart.metric_second_partials {
        Some(f) => f(x),
        None => match &chart.metric_partials {
            Some(f) => {
                let (v, e) = fd_partials_with_error(&**f, x, step);
                err = err.max(e);
                v
            }
            None => {
                // Nested differences of the metric itself.
                let inner = |y: &[f64]| fd_partials(&*chart.metric, y, step);
                let (v, e) = fd_partials_with_error(&inner, x, step);
                err = err.max(e);
                v
            }
        },
    };
    (dg, ddg, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directional_difference_is_exact_on_cubics() {
        // A fourth-order stencil reproduces derivatives of polynomials of
        // degree at most four exactly, up to roundoff.
        let f = |x: &[f64]| vec![x[0] * x[0] * x[0] + 2.0 * x[1], x[0] * x[1] * x[1]];
        let x = [0.7, -0.3];
        let d0 = fd_directional(&f, &x, 0, 1e-2);
        assert!((d0[0] - 3.0 * 0.7 * 0.7).abs() < 1e-10);
        assert!((d0[1] - (-0.3) * (-0.3)).abs() < 1e-10);
        let d1 = fd_directional(&f, &x, 1, 1e-2);
        assert!((d1[0] - 2.0).abs() < 1e-10);
        assert!((d1[1] - 2.0 * 0.7 * (-0.3)).abs() < 1e-10);
    }

    #[test]
    fn error_estimate_bounds_truncation_on_transcendental() {
        let f = |x: &[f64]| vec![(3.0 * x[0]).sin() * (x[1]).exp()];
        let x = [0.4, 0.2];
        let (d, err) = fd_partials_with_error(&f, &x, 1e-3);
        let exact0 = 3.0 * (3.0 * 0.4f64).cos() * (0.2f64).exp();
        let exact1 = (3.0 * 0.4f64).sin() * (0.2f64).exp();
        assert!((d[0] - exact0).abs() <= err.max(1e-12) * 10.0 + 1e-12);
        assert!((d[1] - exact1).abs() <= err.max(1e-12) * 10.0 + 1e-12);
        assert!(err < 1e-9, "unexpectedly large estimate {err}");
    }
}
