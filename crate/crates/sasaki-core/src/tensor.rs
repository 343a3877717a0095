//! Dense multi-index arrays with variance bookkeeping.
//!
//! Every geometric computation in this crate reduces to a handful of
//! operations on small dense tensors: outer products, up-down contractions,
//! slot permutations, and antisymmetrization. Dimensions are tiny (five or
//! nine), so a flat row-major buffer beats any sparse representation, and
//! all shape violations are programming errors and panic.

use std::fmt;

/// Variance of a single tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Contravariant (upper) index.
    Up,
    /// Covariant (lower) index.
    Down,
}

impl Slot {
    pub fn flipped(self) -> Slot {
        match self {
            Slot::Up => Slot::Down,
            Slot::Down => Slot::Up,
        }
    }
}

/// Dense tensor over `R^dim` with one variance marker per slot.
///
/// Storage is row-major: the last slot varies fastest. A rank-zero tensor
/// is a scalar with a one-element buffer.
#[derive(Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    slots: Vec<Slot>,
    data: Vec<f64>,
}

impl fmt::Debug for DenseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseTensor")
            .field("dim", &self.dim)
            .field("slots", &self.slots)
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

pub fn factorial(n: usize) -> u64 {
    assert!(n <= 20, "factorial overflows u64 beyond 20");
    (1..=n as u64).product()
}

/// Visits every permutation of `0..n` exactly once via Heap's algorithm,
/// passing the permutation and its sign. The identity comes first.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], f64)) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n.max(1)];
    let mut sign = 1.0;
    visit(&a, sign);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            visit(&a, sign);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Sign of a permutation of `0..n`, by counting inversions.
pub fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl DenseTensor {
    pub fn zeros(dim: usize, slots: &[Slot]) -> Self {
        assert!(dim > 0, "tensor dimension must be positive");
        let len = dim.checked_pow(slots.len() as u32).expect("tensor too large");
        DenseTensor {
            dim,
            slots: slots.to_vec(),
            data: vec![0.0; len],
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        DenseTensor {
            dim,
            slots: Vec::new(),
            data: vec![value],
        }
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(dim: usize, slots: &[Slot], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Self::zeros(dim, slots);
        let rank = t.rank();
        let mut idx = vec![0usize; rank];
        for flat in 0..t.data.len() {
            t.data[flat] = f(&idx);
            Self::advance(&mut idx, dim);
        }
        t
    }

    /// Wraps an existing row-major buffer.
    pub fn from_data(dim: usize, slots: &[Slot], data: Vec<f64>) -> Self {
        let len = dim.checked_pow(slots.len() as u32).expect("tensor too large");
        assert_eq!(data.len(), len, "buffer length does not match dim^rank");
        DenseTensor {
            dim,
            slots: slots.to_vec(),
            data,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn advance(idx: &mut [usize], dim: usize) {
        for p in (0..idx.len()).rev() {
            idx[p] += 1;
            if idx[p] < dim {
                return;
            }
            idx[p] = 0;
        }
    }

    fn lin(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank(), "multi-index rank mismatch");
        let mut flat = 0;
        for &i in idx {
            debug_assert!(i < self.dim, "index out of range");
            flat = flat * self.dim + i;
        }
        flat
    }

    /// Stride of slot `p` in the flat buffer.
    fn stride(&self, p: usize) -> usize {
        self.dim.pow((self.rank() - 1 - p) as u32)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.lin(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let flat = self.lin(idx);
        self.data[flat] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn assert_same_shape(&self, other: &DenseTensor, op: &str) {
        assert_eq!(self.dim, other.dim, "{op}: dimension mismatch");
        assert_eq!(self.slots, other.slots, "{op}: slot signature mismatch");
    }

    pub fn add(&self, other: &DenseTensor) -> DenseTensor {
        self.assert_same_shape(other, "add");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &DenseTensor) -> DenseTensor {
        self.assert_same_shape(other, "sub");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: f64) -> DenseTensor {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    /// `self += c * other`, in place.
    pub fn axpy(&mut self, c: f64, other: &DenseTensor) {
        self.assert_same_shape(other, "axpy");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn tensor_product(&self, other: &DenseTensor) -> DenseTensor {
        assert_eq!(self.dim, other.dim, "tensor_product: dimension mismatch");
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        DenseTensor {
            dim: self.dim,
            slots,
            data,
        }
    }

    /// Contracts slot `a` against slot `b` of the same tensor. The two
    /// slots must have opposite variance; remaining slots keep their order.
    pub fn contract(&self, a: usize, b: usize) -> DenseTensor {
        let rank = self.rank();
        assert!(a < rank && b < rank && a != b, "contract: bad slot pair");
        assert_ne!(
            self.slots[a], self.slots[b],
            "contract: slots must have opposite variance"
        );
        let kept: Vec<usize> = (0..rank).filter(|&p| p != a && p != b).collect();
        let slots: Vec<Slot> = kept.iter().map(|&p| self.slots[p]).collect();
        let mut out = DenseTensor::zeros(self.dim, &slots);
        let stride_a = self.stride(a);
        let stride_b = self.stride(b);
        let kept_strides: Vec<usize> = kept.iter().map(|&p| self.stride(p)).collect();
        let mut idx = vec![0usize; kept.len()];
        for flat_out in 0..out.data.len() {
            let base: usize = idx
                .iter()
                .zip(&kept_strides)
                .map(|(&i, &s)| i * s)
                .sum();
            let mut sum = 0.0;
            for r in 0..self.dim {
                sum += self.data[base + r * (stride_a + stride_b)];
            }
            out.data[flat_out] = sum;
            Self::advance(&mut idx, self.dim);
        }
        out
    }

    /// Multiplies two tensors while contracting the given slot pairs, never
    /// materializing the full outer product. Each pair is `(slot of self,
    /// slot of other)` and must have opposite variance. Result slots are the
    /// uncontracted slots of `self` followed by those of `other`.
    pub fn contract_product(&self, other: &DenseTensor, pairs: &[(usize, usize)]) -> DenseTensor {
        assert_eq!(self.dim, other.dim, "contract_product: dimension mismatch");
        let dim = self.dim;
        for &(a, b) in pairs {
            assert!(a < self.rank() && b < other.rank(), "contract_product: bad slot");
            assert_ne!(
                self.slots[a], other.slots[b],
                "contract_product: slots must have opposite variance"
            );
        }
        let kept_a: Vec<usize> = (0..self.rank())
            .filter(|p| pairs.iter().all(|&(a, _)| a != *p))
            .collect();
        let kept_b: Vec<usize> = (0..other.rank())
            .filter(|p| pairs.iter().all(|&(_, b)| b != *p))
            .collect();
        assert_eq!(kept_a.len() + pairs.len(), self.rank(), "contract_product: repeated slot");
        assert_eq!(kept_b.len() + pairs.len(), other.rank(), "contract_product: repeated slot");
        let mut slots: Vec<Slot> = kept_a.iter().map(|&p| self.slots[p]).collect();
        slots.extend(kept_b.iter().map(|&p| other.slots[p]));
        let mut out = DenseTensor::zeros(dim, &slots);

        let strides_a: Vec<usize> = kept_a.iter().map(|&p| self.stride(p)).collect();
        let strides_b: Vec<usize> = kept_b.iter().map(|&p| other.stride(p)).collect();
        let sum_strides: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(a, b)| (self.stride(a), other.stride(b)))
            .collect();

        let mut idx = vec![0usize; out.rank()];
        let na = kept_a.len();
        let mut sum_idx = vec![0usize; pairs.len()];
        for flat_out in 0..out.data.len() {
            let base_a: usize = idx[..na]
                .iter()
                .zip(&strides_a)
                .map(|(&i, &s)| i * s)
                .sum();
            let base_b: usize = idx[na..]
                .iter()
                .zip(&strides_b)
                .map(|(&i, &s)| i * s)
                .sum();
            for v in sum_idx.iter_mut() {
                *v = 0;
            }
            let mut sum = 0.0;
            loop {
                let mut off_a = base_a;
                let mut off_b = base_b;
                for (r, &(sa, sb)) in sum_idx.iter().zip(&sum_strides) {
                    off_a += r * sa;
                    off_b += r * sb;
                }
                sum += self.data[off_a] * other.data[off_b];
                if sum_idx.is_empty() {
                    break;
                }
                Self::advance(&mut sum_idx, dim);
                if sum_idx.iter().all(|&v| v == 0) {
                    break;
                }
            }
            out.data[flat_out] = sum;
            Self::advance(&mut idx, dim);
        }
        out
    }

    /// Reorders slots with gather semantics: slot `p` of the result is slot
    /// `perm[p]` of the input.
    pub fn permute_slots(&self, perm: &[usize]) -> DenseTensor {
        let rank = self.rank();
        assert_eq!(perm.len(), rank, "permute_slots: wrong length");
        let mut seen = vec![false; rank];
        for &p in perm {
            assert!(p < rank && !seen[p], "permute_slots: not a permutation");
            seen[p] = true;
        }
        let slots: Vec<Slot> = perm.iter().map(|&o| self.slots[o]).collect();
        let mut out = DenseTensor::zeros(self.dim, &slots);
        out.accumulate_permuted(self, perm, 1.0);
        out
    }

    /// `self[I] += c * src[J]` over all `I`, where slot `p` of `self` reads
    /// slot `perm[p]` of `src`.
    fn accumulate_permuted(&mut self, src: &DenseTensor, perm: &[usize], c: f64) {
        let rank = self.rank();
        let gather_strides: Vec<usize> = perm.iter().map(|&o| src.stride(o)).collect();
        let mut idx = vec![0usize; rank];
        for flat_out in 0..self.data.len() {
            let flat_src: usize = idx
                .iter()
                .zip(&gather_strides)
                .map(|(&i, &s)| i * s)
                .sum();
            self.data[flat_out] += c * src.data[flat_src];
            Self::advance(&mut idx, self.dim);
        }
    }

    /// Projects onto the antisymmetric part over the listed slot positions,
    /// averaging the signed slot permutations with weight `1/P!`. All listed
    /// slots must carry the same variance.
    pub fn skew_symmetrize(&self, positions: &[usize]) -> DenseTensor {
        let rank = self.rank();
        let p = positions.len();
        let mut seen = vec![false; rank];
        for &pos in positions {
            assert!(pos < rank && !seen[pos], "skew_symmetrize: bad position list");
            seen[pos] = true;
            assert_eq!(
                self.slots[pos], self.slots[positions[0]],
                "skew_symmetrize: mixed variance"
            );
        }
        let mut out = DenseTensor::zeros(self.dim, &self.slots);
        let mut full_perm: Vec<usize> = (0..rank).collect();
        for_each_permutation(p, |sigma, sign| {
            for (j, &s) in sigma.iter().enumerate() {
                full_perm[positions[j]] = positions[s];
            }
            out.accumulate_permuted(self, &full_perm, sign);
        });
        let inv = 1.0 / factorial(p) as f64;
        for v in out.data.iter_mut() {
            *v *= inv;
        }
        out
    }

    /// The single independent component of the antisymmetrization of a
    /// tensor whose rank equals the ambient dimension: the value of the
    /// skew projection at the multi-index `(0, 1, ..., dim-1)`. Computed
    /// directly as a signed sum over permutations without materializing
    /// the projected tensor.
    pub fn top_component(&self) -> f64 {
        let d = self.dim;
        assert_eq!(
            self.rank(),
            d,
            "top_component: rank must equal dimension"
        );
        for s in &self.slots {
            assert_eq!(*s, self.slots[0], "top_component: mixed variance");
        }
        let strides: Vec<usize> = (0..d).map(|p| self.stride(p)).collect();
        let mut sum = 0.0;
        for_each_permutation(d, |perm, sign| {
            let flat: usize = perm
                .iter()
                .zip(&strides)
                .map(|(&v, &s)| v * s)
                .sum();
            sum += sign * self.data[flat];
        });
        sum / factorial(d) as f64
    }

    /// Wedge product under the projection normalization: the full
    /// antisymmetrization of the outer product, with weight `1/(P+P')!`.
    /// Associative, and graded-anticommutative in the factor ranks.
    pub fn wedge(&self, other: &DenseTensor) -> DenseTensor {
        for s in self.slots.iter().chain(&other.slots) {
            assert_eq!(
                *s,
                Slot::Down,
                "wedge: expected covariant factors"
            );
        }
        let prod = self.tensor_product(other);
        let positions: Vec<usize> = (0..prod.rank()).collect();
        prod.skew_symmetrize(&positions)
    }

    /// Lowers an upper slot in place with the given covariant metric.
    pub fn lower_slot(&self, pos: usize, metric: &DenseTensor) -> DenseTensor {
        assert_eq!(self.slots[pos], Slot::Up, "lower_slot: slot already down");
        assert_eq!(metric.slots(), [Slot::Down, Slot::Down], "lower_slot: bad metric");
        self.pair_with_metric(pos, metric)
    }

    /// Raises a lower slot in place with the given contravariant metric.
    pub fn raise_slot(&self, pos: usize, inverse_metric: &DenseTensor) -> DenseTensor {
        assert_eq!(self.slots[pos], Slot::Down, "raise_slot: slot already up");
        assert_eq!(
            inverse_metric.slots(),
            [Slot::Up, Slot::Up],
            "raise_slot: bad inverse metric"
        );
        self.pair_with_metric(pos, inverse_metric)
    }

    fn pair_with_metric(&self, pos: usize, metric: &DenseTensor) -> DenseTensor {
        assert_eq!(self.dim, metric.dim, "metric dimension mismatch");
        let rank = self.rank();
        assert!(pos < rank, "slot out of range");
        let mut slots = self.slots.clone();
        slots[pos] = slots[pos].flipped();
        let mut out = DenseTensor::zeros(self.dim, &slots);
        let stride_pos = self.stride(pos);
        let mut idx = vec![0usize; rank];
        for flat_out in 0..out.data.len() {
            let i_pos = idx[pos];
            let base: usize = flat_out - i_pos * stride_pos;
            let mut sum = 0.0;
            for r in 0..self.dim {
                sum += metric.data[i_pos * self.dim + r] * self.data[base + r * stride_pos];
            }
            out.data[flat_out] = sum;
            Self::advance(&mut idx, self.dim);
        }
        out
    }

    /// Maximum absolute difference of the skew projections of two tensors
    /// over the same slot positions. This is the residual of equality
    /// modulo antisymmetrization.
    pub fn skew_difference(&self, other: &DenseTensor, positions: &[usize]) -> f64 {
        self.assert_same_shape(other, "skew_difference");
        self.sub(other).skew_symmetrize(positions).max_abs()
    }
}

/// Identity as a mixed tensor: `delta[i][^j]`.
pub fn delta(dim: usize) -> DenseTensor {
    DenseTensor::from_fn(dim, &[Slot::Down, Slot::Up], |idx| {
        if idx[0] == idx[1] {
            1.0
        } else {
            0.0
        }
    })
}
