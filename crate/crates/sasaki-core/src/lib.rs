//! Numerical verification engine for the geometry of deformed Sasakian
//! manifolds.
//!
//! The library builds explicit model manifolds (odd-dimensional spheres and
//! Heisenberg groups), computes their Levi-Civita connection and curvature
//! both from closed-form expressions and from finite differences of the
//! metric, deforms the metric along the contact form, and verifies a family
//! of algebraic identities satisfied by antisymmetrized traces of curvature
//! chains. Everything is checked at double precision against stated
//! tolerances; the companion binary crate `sasaki-verify` drives the checks
//! and renders a machine-readable report.

pub mod chain;
pub mod chart;
pub mod cs_form;
pub mod geometry;
pub mod lemmas;
pub mod models;
pub mod poly;
pub mod report;
pub mod sasakian;
pub mod tensor;

/// Residual tolerances used throughout the check suites.
///
/// Each constant names the regime it applies to rather than a particular
/// check, so the same bound is reused consistently everywhere that regime
/// occurs.
pub mod tol {
    /// Identities that hold exactly in floating point up to roundoff
    /// (projection idempotency, closed-form inverses, regrouping sums).
    pub const EXACT_ARITHMETIC: f64 = 1e-12;

    /// Polynomial evaluation consistency (ring homomorphism property).
    pub const POLY_EVAL: f64 = 1e-11;

    /// Relative residual for identities evaluated from analytic formulas,
    /// possibly with fourth-order finite differences of smooth closed-form
    /// fields mixed in.
    pub const ANALYTIC_IDENTITY: f64 = 1e-8;

    /// Relative residual for antisymmetrization identities on curvature
    /// chains built from closed-form curvature grades.
    pub const LEMMA_RELATIVE: f64 = 1e-9;

    /// Lower bound that every corrupted control check must exceed. A
    /// control that lands below this means the check could not have
    /// detected the corruption it was built for.
    pub const CONTROL_FLOOR: f64 = 1e-2;

    /// The contact volume top coefficient must stay above this at every
    /// sampled point for the structure to count as nondegenerate.
    pub const VOLUME_FLOOR: f64 = 1e-8;

    /// Connection coefficients from closed form vs. finite differences.
    pub const FD_CONNECTION: f64 = 1e-6;

    /// Curvature from closed form vs. nested finite differences.
    pub const FD_CURVATURE: f64 = 1e-5;

    /// Relative error for the leading-coefficient magnitude checks.
    pub const LEADING_COEFF: f64 = 1e-8;

    /// Same check in dimension nine, where more cancellation accumulates.
    pub const LEADING_COEFF_DIM9: f64 = 1e-7;

    /// Residual left over after dividing a coefficient polynomial by a
    /// factor it must contain exactly.
    pub const DIVISION_REMAINDER: f64 = 1e-9;

    /// Frozen-fixture regression comparisons.
    pub const FIXTURE: f64 = 1e-10;

    /// Default step for finite-difference derivatives.
    pub const FD_STEP: f64 = 1e-3;

    /// Polynomial coefficients recovered from grid evaluations must match
    /// the exactly propagated ones this closely.
    pub const COEFF_RECOVERY: f64 = 1e-7;

    /// Scalars that the theory says are point-independent may spread at
    /// most this much across sample points.
    pub const CROSS_POINT: f64 = 1e-7;
}
