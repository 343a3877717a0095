//! Property tests for the polynomial layer: evaluation must be a ring
//! homomorphism, exact factors must divide out with negligible remainder,
//! and tensor-coefficient polynomials must agree with scalar evaluation.

use proptest::prelude::*;
use sasaki_core::poly::{fit_polynomial, Poly, PolyTensor};
use sasaki_core::tensor::{DenseTensor, Slot};

fn arb_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(-5.0f64..5.0, 0..max_len).prop_map(Poly::from_coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eval_is_ring_homomorphism(
        p in arb_poly(6),
        q in arb_poly(6),
        r in arb_poly(6),
        t in -2.0f64..2.0
    ) {
        let lhs = p.mul(&q).add(&r).eval(t);
        let rhs = p.eval(t) * q.eval(t) + r.eval(t);
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn division_undoes_multiplication_by_one_plus_t_sq(q in arb_poly(8)) {
        let p = q.mul(&Poly::one_plus_t_pow(2));
        let (back, rem) = p.div_one_plus_t_sq();
        prop_assert!(rem <= 1e-10 * (1.0 + q.max_abs()));
        let n = q.coeffs().len().max(back.coeffs().len());
        for k in 0..n {
            prop_assert!((back.coeff(k) - q.coeff(k)).abs() <= 1e-10 * (1.0 + q.max_abs()));
        }
    }

    #[test]
    fn shifted_multiplies_by_powers(p in arb_poly(6), t in -2.0f64..2.0) {
        let lhs = p.shifted(3).eval(t);
        let rhs = p.eval(t) * t * t * t;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs().max(rhs.abs())));
    }
}

#[test]
fn poly_tensor_eval_commutes_with_contraction() {
    let dim = 3;
    let a0 = DenseTensor::from_fn(dim, &[Slot::Down, Slot::Up], |i| (i[0] + 2 * i[1]) as f64);
    let a1 = DenseTensor::from_fn(dim, &[Slot::Down, Slot::Up], |i| (i[0] * i[1]) as f64 - 1.0);
    let b0 = DenseTensor::from_fn(dim, &[Slot::Down, Slot::Up], |i| (i[1]) as f64 + 0.5);
    let mut a = PolyTensor::zero(dim, &[Slot::Down, Slot::Up]);
    a.add_term(0, &a0, 1.0);
    a.add_term(1, &a1, 1.0);
    let mut b = PolyTensor::zero(dim, &[Slot::Down, Slot::Up]);
    b.add_term(2, &b0, 1.0);
    let prod = a.contract_product(&b, &[(1, 0)]);
    for &t in &[0.0, 0.3, 1.0, 2.0] {
        let direct = a.eval(t).contract_product(&b.eval(t), &[(1, 0)]);
        let via_poly = prod.eval(t);
        let diff = direct.sub(&via_poly).max_abs();
        assert!(diff < 1e-11 * (1.0 + direct.max_abs()), "t={t}: {diff}");
    }
}

#[test]
fn deformed_lowering_matches_pointwise_metric() {
    let dim = 3;
    let g = DenseTensor::from_fn(dim, &[Slot::Down, Slot::Down], |i| {
        if i[0] == i[1] {
            1.0 + 0.1 * i[0] as f64
        } else {
            0.05
        }
    });
    let eta = DenseTensor::from_data(dim, &[Slot::Down], vec![0.2, -0.4, 1.0]);
    let v = DenseTensor::from_fn(dim, &[Slot::Down, Slot::Up], |i| (1 + i[0] + 3 * i[1]) as f64);
    let p = PolyTensor::monomial(1, v.clone());
    let lowered = p.lower_slot_deformed(1, &g, &eta);
    for &t in &[0.0, 0.7, 1.9] {
        let h = g.add(&eta.tensor_product(&eta).scale(t));
        let expect = v.lower_slot(1, &h).scale(t);
        let got = lowered.eval(t);
        let diff = expect.sub(&got).max_abs();
        assert!(diff < 1e-11 * (1.0 + expect.max_abs()), "t={t}: {diff}");
    }
}

#[test]
fn fit_polynomial_matches_known_curve() {
    let xs = [0.25, 0.5, 1.0, 1.5, 2.0];
    let truth = Poly::from_coeffs(vec![1.0, -2.0, 0.0, 4.0, -0.5]);
    let ys: Vec<f64> = xs.iter().map(|&x| truth.eval(x)).collect();
    let fit = fit_polynomial(&xs, &ys, 4);
    for (k, c) in fit.iter().enumerate() {
        assert!((c - truth.coeff(k)).abs() < 1e-9, "degree {k}: {c}");
    }
}
