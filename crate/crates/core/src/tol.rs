//! Numerical tolerances shared across the crate.
//!
//! All values are absolute unless the name says otherwise. Relative
//! thresholds are scaled by the quantity named in their doc comment.

/// Trailing coefficients below this fraction of the largest coefficient are
/// stripped when a polynomial is normalized.
pub const NORMALIZATION_FLOOR: f64 = 1e-13;

/// Maximum accepted root residual, relative to the coefficient scale
/// `sum |c_k| max(1, |r|)^k`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

/// Roots closer than this (relative to `max(1, |r|)`) form one cluster.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Root pairs closer than this (relative) are treated as a common factor.
pub const GCD_MATCH_TOL: f64 = 1e-7;

/// Sweep budget for the simultaneous root iteration.
pub const ROOT_MAX_SWEEPS: usize = 200;

/// Boundary samples used to certify membership in Rat(U).
pub const SELF_MAP_GRID: usize = 4096;

/// Slack allowed above modulus one on the boundary grid.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Lower bound on `|phi_e'(w)|` and `|w|` at fiber points.
pub const DERIVATIVE_FLOOR: f64 = 1e-10;

/// Radius of the excluded disc around `1/conj(phi(inf))` for the forms
/// that divide by the branch values.
pub const POLE_GUARD: f64 = 1e-4;

/// Regularity margin below which an evaluation is flagged near-critical.
pub const NEAR_CRITICAL_MARGIN: f64 = 1e-5;

/// Newton polish steps applied to each fiber point.
pub const FIBER_POLISH_STEPS: usize = 2;

/// Continuation accepts a step when the matching gap exceeds this multiple
/// of the predicted motion of the fiber points.
pub const CONTINUATION_SAFETY: f64 = 3.0;

/// Maximum bisection depth for a single continuation step.
pub const CONTINUATION_MAX_DEPTH: usize = 20;

/// Fuzz band around `|v| = 1` inside which classification is indeterminate.
pub const CLASS_MARGIN: f64 = 1e-8;

/// `sup |sigma_j| < 1 - COMPACT_MARGIN` flags `C_sigma_j` as compact.
pub const COMPACT_MARGIN: f64 = 1e-6;

/// Maximum deviation of `|phi|` from one on the boundary for a Blaschke product.
pub const BLASCHKE_TOL: f64 = 1e-9;

/// Matching tolerance for zeros against reflected poles of a Blaschke product.
pub const BLASCHKE_MATCH_TOL: f64 = 1e-7;

/// Boundary samples used for contact detection and sup estimates.
pub const BOUNDARY_GRID: usize = 8192;

/// `|phi(zeta)| >= 1 - CONTACT_TOL` counts as boundary contact.
pub const CONTACT_TOL: f64 = 1e-6;

/// Distance inside the disc of the circle that carries the branch atlas.
pub const ATLAS_EPS: f64 = 1e-3;

/// A branch whose modulus drops below this on the boundary is treated as
/// vanishing there, which makes `z sigma'/sigma` unbounded.
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Candidate boundary maxima must reach `1 - CONTACT_PREFILTER` on the grid
/// before they are polished.
pub const CONTACT_PREFILTER: f64 = 1e-3;
