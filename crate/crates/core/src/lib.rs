//! Adjoints of composition operators with rational symbols on the Hardy
//! space H² of the unit disc.
//!
//! * [`poly`] and [`rational`]: polynomial and rational arithmetic, roots,
//!   fibers and critical values.
//! * [`hardy`]: H² polynomials and the series reference for `C_φ*`.
//! * [`adjoint`]: the branch formulas for `C_φ*`, fibers of the exterior map
//!   and branch continuation.
//! * [`regularity`]: outer regularity, boundary contacts and branch
//!   decompositions.

pub mod adjoint;
pub mod builtins;
pub mod error;
pub mod hardy;
pub mod poly;
pub mod rational;
pub mod regularity;
pub mod tol;

pub use adjoint::{AdjointEvaluation, CertifiedMap, Form};
pub use builtins::builtin;
pub use error::{Error, Result};
pub use hardy::{adjoint_oracle, HardyPoly};
pub use poly::{gcd_approx, ComplexPoly, RootSet};
pub use rational::{CriticalData, ExtPoint, Fiber, RationalMap};
pub use regularity::{
    classify, decomposition_report, BranchAnalysis, DecompositionForm, DecompositionReport, RegularityClass,
    RegularityReport,
};
