//! Polynomials in the squared deformation parameter, with scalar or tensor
//! coefficients.
//!
//! The deformed metric, connection, and curvature are all polynomial in the
//! square of the deformation strength, so carrying coefficients exactly and
//! only evaluating at the end avoids cancellation and lets each degree be
//! checked on its own.

use crate::tensor::{DenseTensor, Slot};

/// Scalar polynomial with `f64` coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Poly { coeffs }
    }

    /// `(1 + t)^n` expanded via Pascal's rule.
    pub fn one_plus_t_pow(n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        for _ in 0..n {
            for k in (1..c.len()).rev() {
                c[k] += c[k - 1];
            }
        }
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> f64 {
        self.coeffs.get(degree).copied().unwrap_or(0.0)
    }

    /// Largest degree whose coefficient exceeds `tol` in magnitude.
    pub fn degree(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.abs() > tol)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, v) in out.iter_mut().enumerate() {
            *v = self.coeff(k) + other.coeff(k);
        }
        Poly { coeffs: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|v| c * v).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly { coeffs: out }
    }

    /// Multiplies by `t^k`.
    pub fn shifted(&self, k: usize) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.coeffs);
        Poly { coeffs: out }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Synthetic division by `(t - root)`; returns the quotient and the
    /// remainder (the value of the polynomial at `root`).
    pub fn div_by_linear(&self, root: f64) -> (Poly, f64) {
        if self.coeffs.is_empty() {
            return (Poly::zero(), 0.0);
        }
        let n = self.coeffs.len();
        let mut q = vec![0.0; n.saturating_sub(1)];
        let mut carry = 0.0;
        for k in (0..n).rev() {
            let value = self.coeffs[k] + carry * root;
            if k == 0 {
                return (Poly { coeffs: q }, value);
            }
            q[k - 1] = value;
            carry = value;
        }
        unreachable!()
    }

    /// Divides by `(1 + t)^2` via two synthetic divisions at `t = -1`,
    /// returning the quotient and the largest remainder magnitude seen.
    /// A nonnegligible remainder means the factor was not actually present.
    pub fn div_one_plus_t_sq(&self) -> (Poly, f64) {
        let (q1, r1) = self.div_by_linear(-1.0);
        let (q2, r2) = q1.div_by_linear(-1.0);
        (q2, r1.abs().max(r2.abs()))
    }
}

/// Polynomial with dense tensor coefficients, all of one shape.
#[derive(Clone, Debug)]
pub struct PolyTensor {
    dim: usize,
    slots: Vec<Slot>,
    coeffs: Vec<DenseTensor>,
}

impl PolyTensor {
    pub fn zero(dim: usize, slots: &[Slot]) -> Self {
        PolyTensor {
            dim,
            slots: slots.to_vec(),
            coeffs: Vec::new(),
        }
    }

    /// A polynomial concentrated in a single degree.
    pub fn monomial(degree: usize, tensor: DenseTensor) -> Self {
        let mut p = PolyTensor::zero(tensor.dim(), tensor.slots());
        p.add_term(degree, &tensor, 1.0);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn num_coeffs(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, degree: usize) -> Option<&DenseTensor> {
        self.coeffs.get(degree)
    }

    /// Coefficient tensor at `degree`, materializing zeros if absent.
    pub fn coeff_or_zero(&self, degree: usize) -> DenseTensor {
        self.coeffs
            .get(degree)
            .cloned()
            .unwrap_or_else(|| DenseTensor::zeros(self.dim, &self.slots))
    }

    fn ensure_degree(&mut self, degree: usize) {
        while self.coeffs.len() <= degree {
            self.coeffs.push(DenseTensor::zeros(self.dim, &self.slots));
        }
    }

    /// `self += c * t^degree * tensor`.
    pub fn add_term(&mut self, degree: usize, tensor: &DenseTensor, c: f64) {
        assert_eq!(tensor.dim(), self.dim, "add_term: dimension mismatch");
        assert_eq!(tensor.slots(), &self.slots[..], "add_term: slot mismatch");
        self.ensure_degree(degree);
        self.coeffs[degree].axpy(c, tensor);
    }

    pub fn add(&self, other: &PolyTensor) -> PolyTensor {
        let mut out = self.clone();
        for (deg, c) in other.coeffs.iter().enumerate() {
            out.add_term(deg, c, 1.0);
        }
        out
    }

    pub fn sub(&self, other: &PolyTensor) -> PolyTensor {
        let mut out = self.clone();
        for (deg, c) in other.coeffs.iter().enumerate() {
            out.add_term(deg, c, -1.0);
        }
        out
    }

    pub fn scale(&self, c: f64) -> PolyTensor {
        PolyTensor {
            dim: self.dim,
            slots: self.slots.clone(),
            coeffs: self.coeffs.iter().map(|t| t.scale(c)).collect(),
        }
    }

    /// Multiplies every coefficient by a scalar polynomial (convolution in
    /// the degree).
    pub fn scale_poly(&self, p: &Poly) -> PolyTensor {
        let mut out = PolyTensor::zero(self.dim, &self.slots);
        for (i, c) in self.coeffs.iter().enumerate() {
            for (j, &a) in p.coeffs().iter().enumerate() {
                if a != 0.0 {
                    out.add_term(i + j, c, a);
                }
            }
        }
        out
    }

    /// Applies a degree-preserving linear map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&DenseTensor) -> DenseTensor) -> PolyTensor {
        let coeffs: Vec<DenseTensor> = self.coeffs.iter().map(f).collect();
        let (dim, slots) = match coeffs.first() {
            Some(t) => (t.dim(), t.slots().to_vec()),
            None => (self.dim, self.slots.clone()),
        };
        PolyTensor { dim, slots, coeffs }
    }

    pub fn contract(&self, a: usize, b: usize) -> PolyTensor {
        self.map_coeffs(|t| t.contract(a, b))
    }

    pub fn permute_slots(&self, perm: &[usize]) -> PolyTensor {
        self.map_coeffs(|t| t.permute_slots(perm))
    }

    pub fn skew_symmetrize(&self, positions: &[usize]) -> PolyTensor {
        self.map_coeffs(|t| t.skew_symmetrize(positions))
    }

    /// Degree-convolved product with contractions, as in
    /// [`DenseTensor::contract_product`].
    pub fn contract_product(&self, other: &PolyTensor, pairs: &[(usize, usize)]) -> PolyTensor {
        let shape = {
            let a = DenseTensor::zeros(self.dim, &self.slots);
            let b = DenseTensor::zeros(other.dim, &other.slots);
            a.contract_product(&b, pairs)
        };
        let mut out = PolyTensor::zero(shape.dim(), shape.slots());
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out.add_term(i + j, &a.contract_product(b, pairs), 1.0);
            }
        }
        out
    }

    /// Evaluates the polynomial at a numeric value of the variable.
    pub fn eval(&self, t: f64) -> DenseTensor {
        let mut out = DenseTensor::zeros(self.dim, &self.slots);
        let mut power = 1.0;
        for c in &self.coeffs {
            out.axpy(power, c);
            power *= t;
        }
        out
    }

    /// Per-degree max-abs of the coefficient tensors.
    pub fn max_abs_per_degree(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.max_abs()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_per_degree().into_iter().fold(0.0, f64::max)
    }

    /// The scalar polynomial of top-form components, one per degree.
    pub fn top_component_poly(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.top_component()).collect())
    }

    /// Lowers an upper slot with the deformed metric `g + t * eta (x) eta`,
    /// raising the polynomial degree by at most one. `eta` is the covector
    /// of the deformation direction.
    pub fn lower_slot_deformed(&self, pos: usize, g: &DenseTensor, eta: &DenseTensor) -> PolyTensor {
        assert_eq!(eta.slots(), [Slot::Down], "lower_slot_deformed: eta must be a covector");
        let eta_eta = eta.tensor_product(eta);
        let mut out = PolyTensor::zero(self.dim, &{
            let mut s = self.slots.clone();
            s[pos] = Slot::Down;
            s
        });
        for (deg, c) in self.coeffs.iter().enumerate() {
            out.add_term(deg, &c.lower_slot(pos, g), 1.0);
            out.add_term(deg + 1, &c.lower_slot(pos, &eta_eta), 1.0);
        }
        out
    }
}

/// Solves a dense linear system by Gaussian elimination with partial
/// pivoting. `a` is row-major `n x n`.
pub fn solve_dense(mut a: Vec<f64>, n: usize, mut b: Vec<f64>) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "solve_dense: matrix shape");
    assert_eq!(b.len(), n, "solve_dense: rhs length");
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        assert!(
            a[pivot_row * n + col].abs() > 0.0,
            "solve_dense: singular matrix"
        );
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for k in row + 1..n {
            sum -= a[row * n + k] * x[k];
        }
        x[row] = sum / a[row * n + row];
    }
    x
}

/// Fits polynomial coefficients (degree `degree`, lowest first) through the
/// sample pairs `(xs[i], ys[i])` by solving the Vandermonde system. Needs
/// exactly `degree + 1` samples at distinct abscissas.
pub fn fit_polynomial(xs: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    let n = degree + 1;
    assert_eq!(xs.len(), n, "fit_polynomial: need degree + 1 samples");
    assert_eq!(ys.len(), n, "fit_polynomial: need degree + 1 values");
    let mut a = vec![0.0; n * n];
    for (row, &x) in xs.iter().enumerate() {
        let mut p = 1.0;
        for col in 0..n {
            a[row * n + col] = p;
            p *= x;
        }
    }
    solve_dense(a, n, ys.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_expansion() {
        let p = Poly::one_plus_t_pow(2);
        assert_eq!(p.coeffs(), &[1.0, 2.0, 1.0]);
        let q = Poly::one_plus_t_pow(4);
        assert_eq!(q.coeffs(), &[1.0, 4.0, 6.0, 4.0, 1.0]);
    }

    #[test]
    fn exact_division_by_one_plus_t_sq() {
        let q = Poly::from_coeffs(vec![3.0, -1.0, 0.5, 2.0]);
        let p = q.mul(&Poly::one_plus_t_pow(2));
        let (back, rem) = p.div_one_plus_t_sq();
        assert!(rem < 1e-12, "remainder {rem}");
        for k in 0..q.coeffs().len() {
            assert!((back.coeff(k) - q.coeff(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn division_reports_remainder() {
        let p = Poly::from_coeffs(vec![1.0, 0.0, 0.0, 1.0]);
        let (_, rem) = p.div_one_plus_t_sq();
        assert!(rem > 0.1, "expected visible remainder, got {rem}");
    }

    #[test]
    fn vandermonde_fit_recovers_coefficients() {
        let coeffs = [2.0, -3.0, 0.25, 1.5, -0.75];
        let p = Poly::from_coeffs(coeffs.to_vec());
        let xs: Vec<f64> = (0..5).map(|i| 0.25 + 0.35 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| p.eval(x)).collect();
        let fit = fit_polynomial(&xs, &ys, 4);
        for (a, b) in fit.iter().zip(&coeffs) {
            assert!((a - b).abs() < 1e-9, "fit {a} vs {b}");
        }
    }
}
