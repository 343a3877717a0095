//! Antisymmetrized trace chains.
//!
//! The top-degree antisymmetrizations needed by the verification are skews
//! of long products of curvature factors. Materializing those products as
//! dense tensors is hopeless beyond the smallest cases, but every object
//! involved is a trace of a matrix product whose factors are indexed by
//! slot values:
//!
//! ```text
//! T(l0, l1, ..., l_2q) = tr( F(l0) * M(l1, l2) * ... * M(l_{2q-1}, l_2q) )
//! ```
//!
//! with each `M` antisymmetric under swapping its two arguments. The full
//! antisymmetrization of `T` over all `d = 2q + 1` slots is a signed sum
//! over choices of the leader value and ordered pairings of the rest. Both
//! orders within one pair contribute equally (the permutation sign and the
//! antisymmetry of `M` cancel), so the enumeration visits each unordered
//! pair once and scales by `2^q` at the end.

use crate::poly::Poly;
use rayon::prelude::*;

/// Square-matrix-valued polynomial; coefficient matrices are row-major.
#[derive(Clone, Debug)]
pub struct PolyMat {
    m: usize,
    coeffs: Vec<Vec<f64>>,
}

impl PolyMat {
    pub fn zero(m: usize) -> Self {
        PolyMat {
            m,
            coeffs: Vec::new(),
        }
    }

    /// Builds from `(degree, row-major matrix)` terms.
    pub fn from_degrees(m: usize, terms: Vec<(usize, Vec<f64>)>) -> Self {
        let mut p = PolyMat::zero(m);
        for (deg, mat) in terms {
            assert_eq!(mat.len(), m * m, "PolyMat: coefficient shape");
            while p.coeffs.len() <= deg {
                p.coeffs.push(vec![0.0; m * m]);
            }
            for (dst, src) in p.coeffs[deg].iter_mut().zip(&mat) {
                *dst += src;
            }
        }
        p
    }

    /// Degree-zero multiple of the identity.
    pub fn scaled_identity(m: usize, c: f64) -> Self {
        let mut mat = vec![0.0; m * m];
        for i in 0..m {
            mat[i * m + i] = c;
        }
        PolyMat::from_degrees(m, vec![(0, mat)])
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn num_coeffs(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, deg: usize) -> Option<&[f64]> {
        self.coeffs.get(deg).map(|v| v.as_slice())
    }

    pub fn scale(&self, c: f64) -> Self {
        PolyMat {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .map(|mat| mat.iter().map(|v| c * v).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.m, other.m, "PolyMat: size mismatch");
        let m = self.m;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PolyMat::zero(m);
        }
        let mut out = vec![vec![0.0; m * m]; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let dst = &mut out[i + j];
                for r in 0..m {
                    for l in 0..m {
                        let alv = a[r * m + l];
                        if alv == 0.0 {
                            continue;
                        }
                        let brow = &b[l * m..(l + 1) * m];
                        let drow = &mut dst[r * m..(r + 1) * m];
                        for (dv, bv) in drow.iter_mut().zip(brow) {
                            *dv += alv * bv;
                        }
                    }
                }
            }
        }
        PolyMat {
            m,
            coeffs: out,
        }
    }

    pub fn trace(&self) -> Poly {
        let m = self.m;
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|mat| (0..m).map(|i| mat[i * m + i]).sum())
                .collect(),
        )
    }
}

struct PairTable {
    d: usize,
    mats: Vec<Option<PolyMat>>,
}

impl PairTable {
    fn build(d: usize, pair: &(dyn Fn(usize, usize) -> PolyMat + Sync)) -> Self {
        let mut mats = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                mats.push(if a < b { Some(pair(a, b)) } else { None });
            }
        }
        PairTable { d, mats }
    }

    fn get(&self, a: usize, b: usize) -> &PolyMat {
        debug_assert!(a < b);
        self.mats[a * self.d + b].as_ref().unwrap()
    }
}

fn dfs(
    table: &PairTable,
    used: &mut [bool],
    remaining_pairs: usize,
    sign: f64,
    prefix: &PolyMat,
    acc: &mut Poly,
) {
    if remaining_pairs == 0 {
        *acc = acc.add(&prefix.trace().scale(sign));
        return;
    }
    let d = table.d;
    let mut rank_a = 0usize;
    for a in 0..d {
        if used[a] {
            continue;
        }
        let sign_a = if rank_a % 2 == 0 { sign } else { -sign };
        used[a] = true;
        let mut rank_b = 0usize;
        for b in a + 1..d {
            if used[b] {
                continue;
            }
            // Rank of b among unused values after removing a: values below
            // a are counted by rank_a, values in (a, b) by rank_b.
            let rank = rank_a + rank_b;
            let sign_ab = if rank % 2 == 0 { sign_a } else { -sign_a };
            used[b] = true;
            let next = prefix.mul(table.get(a, b));
            dfs(table, used, remaining_pairs - 1, sign_ab, &next, acc);
            used[b] = false;
            rank_b += 1;
        }
        used[a] = false;
        rank_a += 1;
    }
}

/// Full antisymmetrization (with the same `1/d!` normalization as
/// [`crate::tensor::DenseTensor::top_component`]) of the trace chain over
/// all `d` slot values. `pair(a, b)` is consulted only for `a < b`; the
/// enumeration supplies the swap signs. With `parallel` set, leader values
/// are processed on the rayon pool and summed in a fixed order, so the
/// result is bitwise deterministic either way.
pub fn chain_top_skew(
    d: usize,
    first: &(dyn Fn(usize) -> PolyMat + Sync),
    pair: &(dyn Fn(usize, usize) -> PolyMat + Sync),
    parallel: bool,
) -> Poly {
    assert!(d % 2 == 1, "chain length must be odd: one leader plus pairs");
    let q = (d - 1) / 2;
    let table = PairTable::build(d, pair);
    let leader = |f: usize| -> Poly {
        let mut acc = Poly::zero();
        let mut used = vec![false; d];
        used[f] = true;
        // Leader rank in the full pool is its value.
        let sign = if f % 2 == 0 { 1.0 } else { -1.0 };
        dfs(&table, &mut used, q, sign, &first(f), &mut acc);
        acc
    };
    let partials: Vec<Poly> = if parallel {
        (0..d).into_par_iter().map(leader).collect()
    } else {
        (0..d).map(leader).collect()
    };
    let mut total = Poly::zero();
    for p in partials {
        total = total.add(&p);
    }
    let norm = 2f64.powi(q as i32) / crate::tensor::factorial(d) as f64;
    total.scale(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{DenseTensor, Slot};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Dense oracle: assemble the rank-d chain tensor explicitly and take
    /// its top component.
    fn dense_chain_top(
        d: usize,
        m: usize,
        first: &dyn Fn(usize) -> PolyMat,
        pair: &dyn Fn(usize, usize) -> PolyMat,
        degree_cap: usize,
    ) -> Poly {
        let q = (d - 1) / 2;
        let mut coeffs = Vec::new();
        for deg in 0..=degree_cap {
            let slots = vec![Slot::Down; d];
            let tensor = DenseTensor::from_fn(d, &slots, |idx| {
                // Sum over degree splits across the q+1 factors.
                let mut total = 0.0;
                let mut split = vec![0usize; q + 1];
                loop {
                    if split.iter().sum::<usize>() == deg {
                        // Assemble tr(F M ... M) for this degree split.
                        let f = first(idx[0]);
                        if let Some(fc) = f.coeff(split[0]) {
                            let mut prod = fc.to_vec();
                            let mut ok = true;
                            for s in 0..q {
                                let (a, b) = (idx[1 + 2 * s], idx[2 + 2 * s]);
                                let (mat, sgn) = if a < b {
                                    (pair(a, b), 1.0)
                                } else if b < a {
                                    (pair(b, a), -1.0)
                                } else {
                                    ok = false;
                                    break;
                                };
                                match mat.coeff(split[s + 1]) {
                                    Some(mc) => {
                                        let mut next = vec![0.0; m * m];
                                        for r in 0..m {
                                            for l in 0..m {
                                                for c in 0..m {
                                                    next[r * m + c] +=
                                                        prod[r * m + l] * sgn * mc[l * m + c];
                                                }
                                            }
                                        }
                                        prod = next;
                                    }
                                    None => {
                                        ok = false;
                                        break;
                                    }
                                }
                            }
                            if ok {
                                total += (0..m).map(|i| prod[i * m + i]).sum::<f64>();
                            }
                        }
                    }
                    // Odometer over splits bounded by deg.
                    let mut carry = true;
                    for v in split.iter_mut() {
                        *v += 1;
                        if *v <= deg {
                            carry = false;
                            break;
                        }
                        *v = 0;
                    }
                    if carry {
                        break;
                    }
                }
                total
            });
            coeffs.push(tensor.top_component());
        }
        Poly::from_coeffs(coeffs)
    }

    #[test]
    fn chain_matches_dense_oracle() {
        let d = 5;
        let m = 3;
        let mut rng = StdRng::seed_from_u64(21);
        // Random antisymmetric-in-arguments pair family with two degrees,
        // and a random leader family with one degree.
        let mut raw = std::collections::HashMap::new();
        for a in 0..d {
            for b in (a + 1)..d {
                let m0: Vec<f64> = (0..m * m).map(|_| rng.random_range(-1.0..1.0)).collect();
                let m1: Vec<f64> = (0..m * m).map(|_| rng.random_range(-1.0..1.0)).collect();
                raw.insert((a, b), (m0, m1));
            }
        }
        let first_data: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..m * m).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let pair = move |a: usize, b: usize| -> PolyMat {
            let (m0, m1) = raw.get(&(a, b)).unwrap();
            PolyMat::from_degrees(m, vec![(0, m0.clone()), (1, m1.clone())])
        };
        let first = move |f: usize| PolyMat::from_degrees(m, vec![(0, first_data[f].clone())]);
        let fast = chain_top_skew(d, &first, &pair, false);
        let parallel = chain_top_skew(d, &first, &pair, true);
        let dense = dense_chain_top(d, m, &first, &pair, 2);
        for deg in 0..=2 {
            let (a, b) = (fast.coeff(deg), dense.coeff(deg));
            assert!(
                (a - b).abs() < 1e-12 * (1.0 + b.abs()),
                "degree {deg}: engine {a} vs dense {b}"
            );
            assert_eq!(fast.coeff(deg).to_bits(), parallel.coeff(deg).to_bits());
        }
    }

    #[test]
    fn scalar_chain_is_wedge_top_component() {
        // With 1x1 matrices the chain is eta ^ w ^ w for a one-form eta and
        // a two-form w, whose top component the dense tensor path computes
        // independently.
        let d = 5;
        let mut rng = StdRng::seed_from_u64(22);
        let eta: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut w = DenseTensor::zeros(d, &[Slot::Down, Slot::Down]);
        for a in 0..d {
            for b in (a + 1)..d {
                let v = rng.random_range(-1.0..1.0);
                w.set(&[a, b], v);
                w.set(&[b, a], -v);
            }
        }
        let eta_t = DenseTensor::from_data(d, &[Slot::Down], eta.clone());
        let dense = eta_t.wedge(&w).wedge(&w).top_component();
        let first = |f: usize| PolyMat::scaled_identity(1, eta[f]);
        let pair = |a: usize, b: usize| PolyMat::scaled_identity(1, w.get(&[a, b]));
        let engine = chain_top_skew(d, &first, &pair, false);
        assert!(
            (engine.coeff(0) - dense).abs() < 1e-13 * (1.0 + dense.abs()),
            "engine {} vs dense {}",
            engine.coeff(0),
            dense
        );
    }
}
