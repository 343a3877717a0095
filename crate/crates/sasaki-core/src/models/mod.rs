//! Explicit model manifolds.
//!
//! Each model packages a coordinate chart together with closed-form contact
//! structure fields. The two families provided are unit spheres in complex
//! space (odd dimension `4k + 1`) and Heisenberg groups of the same
//! dimensions; both carry their structure tensors in global closed form, so
//! every identity can be checked pointwise at machine precision.

pub mod heisenberg;
pub mod space_form;
pub mod sphere;

use crate::chart::{Chart, FieldFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Model {
    pub name: &'static str,
    pub dim: usize,
    /// Contact parameter: `dim = 4k + 1`.
    pub k: usize,
    /// The constant `c` such that the curvature takes the space-form shape
    /// with phi-sectional curvature `c`.
    pub space_form_constant: f64,
    pub chart: Chart,
    /// Contact form components `eta[i]`.
    pub eta: Box<FieldFn>,
    /// Characteristic vector field components `xi[i]`.
    pub xi: Box<FieldFn>,
    /// Mixed structure tensor, row-major `phi[i*dim + j] = phi_i^j`.
    pub phi_mixed: Box<FieldFn>,
    /// Lowered structure tensor `phi[i*dim + j] = phi_ij`, computed from an
    /// independent closed form rather than by lowering `phi_mixed`.
    pub phi_lower: Box<FieldFn>,
    /// Deterministic first sample point, on a coordinate axis.
    pub axis_point: Vec<f64>,
    sampler: Box<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync>,
}

impl Model {
    /// Constructs a model by name. `k` controls the dimension `4k + 1`.
    pub fn by_name(name: &str, k: usize) -> Option<Model> {
        match name {
            "sphere" => Some(sphere::model(k)),
            "heisenberg" => Some(heisenberg::model(k)),
            _ => None,
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["sphere", "heisenberg"]
    }

    /// Deterministic sample points: the axis point first, then seeded draws
    /// from the model's sampling domain.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::with_capacity(n);
        if n > 0 {
            pts.push(self.axis_point.clone());
        }
        while pts.len() < n {
            pts.push((self.sampler)(&mut rng));
        }
        pts
    }
}

/// Uniform draw from the coordinate box `[-half, half]^dim`.
fn box_sampler(dim: usize, half: f64) -> Box<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync> {
    Box::new(move |rng| (0..dim).map(|_| rng.random_range(-half..half)).collect())
}

/// Uniform draw from the ball of the given radius, by rejection from the
/// enclosing box.
fn ball_sampler(dim: usize, radius: f64) -> Box<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync> {
    Box::new(move |rng| loop {
        let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-radius..radius)).collect();
        if u.iter().map(|v| v * v).sum::<f64>() <= radius * radius {
            return u;
        }
    })
}
