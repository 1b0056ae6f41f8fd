use thiserror::Error;

use crate::rational::ExtPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("root iteration did not converge after {sweeps} sweeps (worst residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("denominator is identically zero")]
    ZeroDenominator,

    #[error("numerator and denominator both vanish at {at}")]
    IndeterminateValue { at: num_complex::Complex64 },

    #[error("rational function has a pole at the origin")]
    PoleAtOrigin,

    #[error("point {at} is outside the open unit disc")]
    DomainViolation { at: num_complex::Complex64 },

    #[error("{at} is not a regular value (margin {margin:e})")]
    NotRegularValue { at: ExtPoint, margin: f64 },

    #[error("fiber point with modulus {modulus} escapes the unit disc")]
    FiberEscape { modulus: f64 },

    #[error("{at} lies within {distance:e} of the cancelled pole 1/conj(phi(inf))")]
    PoleProximity { at: num_complex::Complex64, distance: f64 },

    #[error("function does not vanish at the origin (f(0) = {value})")]
    NotInH20 { value: num_complex::Complex64 },

    #[error("continuation path meets a critical value near {at}")]
    PathThroughCriticalValue { at: num_complex::Complex64 },

    #[error("branch matching stayed ambiguous near {at} after maximum refinement")]
    MatchingAmbiguity { at: num_complex::Complex64 },

    #[error("phi(inf) = inf; the identity needs a finite value at infinity")]
    PoleAtInfinity,

    #[error("map is not a self-map of the unit disc: {reason}")]
    NotSelfMap { reason: String },

    #[error("unknown or malformed map name: {0}")]
    BadMapName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
