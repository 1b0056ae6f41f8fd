//! Branch formulas for the adjoint `C_φ*` of a rational composition operator.
//!
//! All formulas are evaluated pointwise from the fiber of the exterior map
//! `φₑ = ρ∘φ∘ρ` over `z`. With `σ_j(z)` the fiber points and
//! `σ_j'(z) = 1/φₑ'(σ_j(z))`:
//!
//! * [`Form::Thm`]: `f(0)/(1 - conj(φ(∞)) z) + z Σ σ_j'/σ_j · f(σ_j)`
//! * [`Form::Cor`]: `f(0)/(1 - conj(φ(∞)) z) + z Σ f(w)/(w φₑ'(w))`
//! * [`Form::Bs`]:  `f(0)/(1 - conj(φ(0)) z) + z Σ σ_j' · (Bf)(σ_j)`
//!
//! The first two divide by `σ_j(z)`, which vanishes at `z = 1/conj(φ(∞))`
//! when that point lies in the disc; the backward-shift form does not.

pub mod continuation;
pub mod fiber;

pub use continuation::{continue_branch, cycle_notation, loop_monodromy, monodromy, Monodromy};
pub use fiber::{fiber_of, preimage_fiber, PreimageFiber};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::HardyPoly;
use crate::rational::{ExtPoint, RationalMap, SelfMapCheck};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Thm,
    Cor,
    Bs,
    /// `Bs` inside the pole guard, `Cor` elsewhere.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ConditionFlags {
    /// Within ten pole-guard radii of `1/conj(φ(∞))`.
    pub near_pole: bool,
    /// Fiber points closer than the near-critical margin.
    pub near_critical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjointEvaluation {
    pub z: Complex64,
    pub value: Complex64,
    pub form_used: Form,
    /// Rank-one contribution (`Λ_∞ f(z)` or `Λ₀ f(z)`).
    pub lambda_term: Complex64,
    /// Per-branch summands in fiber label order, each including the factor `z`.
    pub branch_terms: Vec<Complex64>,
    pub flags: ConditionFlags,
}

/// Partial-fraction expansion `α + Σ β_j/(w - w_j)` of `w -> 1/(1 - conj(z) φ(w))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialFraction {
    pub alpha: Complex64,
    pub poles: Vec<Complex64>,
    pub residues: Vec<Complex64>,
}

impl PartialFraction {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.alpha
            + self
                .poles
                .iter()
                .zip(&self.residues)
                .map(|(&p, &b)| b / (w - p))
                .sum::<Complex64>()
    }
}

/// A map certified to lie in Rat(U), with its exterior map and the values
/// the formulas need.
#[derive(Debug, Clone)]
pub struct CertifiedMap {
    phi: RationalMap,
    exterior: RationalMap,
    at_zero: Complex64,
    at_infinity: ExtPoint,
    check: SelfMapCheck,
}

impl CertifiedMap {
    pub fn new(phi: RationalMap) -> Result<Self> {
        if phi.degree() == 0 {
            return Err(Error::DegreeZero);
        }
        let check = phi.self_map_check()?;
        if let Some(reason) = &check.reason {
            return Err(Error::NotSelfMap { reason: reason.clone() });
        }
        let exterior = phi.exterior()?;
        Ok(Self {
            at_zero: phi.eval_finite(ZERO),
            at_infinity: phi.at_infinity(),
            exterior,
            phi,
            check,
        })
    }

    pub fn phi(&self) -> &RationalMap {
        &self.phi
    }

    pub fn exterior(&self) -> &RationalMap {
        &self.exterior
    }

    pub fn degree(&self) -> usize {
        self.phi.degree()
    }

    pub fn at_zero(&self) -> Complex64 {
        self.at_zero
    }

    pub fn at_infinity(&self) -> ExtPoint {
        self.at_infinity
    }

    pub fn self_map_check(&self) -> &SelfMapCheck {
        &self.check
    }

    /// `φₑ(0) = 1/conj(φ(∞))` when it lies in the open disc.
    pub fn cancelled_pole(&self) -> Option<Complex64> {
        match self.at_infinity {
            ExtPoint::Finite(a) if a.norm() > 1.0 => Some(a.conj().inv()),
            _ => None,
        }
    }

    fn pole_distance(&self, z: Complex64) -> Option<f64> {
        self.cancelled_pole().map(|p| (z - p).norm())
    }

    fn flags(&self, fiber: &PreimageFiber, z: Complex64) -> ConditionFlags {
        ConditionFlags {
            near_pole: self
                .pole_distance(z)
                .is_some_and(|d| d < 10.0 * tol::POLE_GUARD),
            near_critical: fiber.is_near_critical(),
        }
    }

    /// Fiber of `φₑ` over `z`, i.e. the branch values `σ_j(z)`.
    pub fn fiber(&self, z: Complex64) -> Result<PreimageFiber> {
        preimage_fiber(&self.exterior, z)
    }

    /// `f(0)/(1 - conj(φ(∞)) z)`, zero when `φ(∞) = ∞`.
    fn lambda_infinity(&self, f: &HardyPoly, z: Complex64) -> Complex64 {
        match self.at_infinity {
            ExtPoint::Infinity => ZERO,
            ExtPoint::Finite(a) => f.at_zero() / (ONE - a.conj() * z),
        }
    }

    fn lambda_zero(&self, f: &HardyPoly, z: Complex64) -> Complex64 {
        f.at_zero() / (ONE - self.at_zero.conj() * z)
    }

    fn at_origin(&self, f: &HardyPoly, form: Form) -> AdjointEvaluation {
        AdjointEvaluation {
            z: ZERO,
            value: f.at_zero(),
            form_used: form,
            lambda_term: f.at_zero(),
            branch_terms: Vec::new(),
            flags: ConditionFlags::default(),
        }
    }

    fn guard(&self, z: Complex64) -> Result<()> {
        match self.pole_distance(z) {
            Some(distance) if distance < tol::POLE_GUARD => Err(Error::PoleProximity { at: z, distance }),
            _ => Ok(()),
        }
    }

    fn check_domain(z: Complex64) -> Result<()> {
        if z.norm() < 1.0 {
            Ok(())
        } else {
            Err(Error::DomainViolation { at: z })
        }
    }

    /// Branch form with `σ_j'/σ_j` weights.
    pub fn eval_thm(&self, f: &HardyPoly, z: Complex64) -> Result<AdjointEvaluation> {
        Self::check_domain(z)?;
        if z == ZERO {
            return Ok(self.at_origin(f, Form::Thm));
        }
        self.guard(z)?;
        let fiber = self.fiber(z)?;
        let branch_terms: Vec<Complex64> = (0..fiber.degree())
            .map(|i| {
                let sigma = fiber.points[i];
                z * (fiber.sigma_prime(i) / sigma) * f.eval(sigma)
            })
            .collect();
        Ok(self.assemble(f, z, Form::Thm, self.lambda_infinity(f, z), branch_terms, &fiber))
    }

    /// Sum over the fiber of `f(w)/(w φₑ'(w))`.
    pub fn eval_cor(&self, f: &HardyPoly, z: Complex64) -> Result<AdjointEvaluation> {
        Self::check_domain(z)?;
        if z == ZERO {
            return Ok(self.at_origin(f, Form::Cor));
        }
        self.guard(z)?;
        let fiber = self.fiber(z)?;
        let branch_terms: Vec<Complex64> = fiber
            .points
            .iter()
            .zip(&fiber.derivs)
            .map(|(&w, &dv)| z * f.eval(w) / (w * dv))
            .collect();
        Ok(self.assemble(f, z, Form::Cor, self.lambda_infinity(f, z), branch_terms, &fiber))
    }

    /// Backward-shift form; finite at the cancelled pole.
    pub fn eval_bs(&self, f: &HardyPoly, z: Complex64) -> Result<AdjointEvaluation> {
        Self::check_domain(z)?;
        if z == ZERO {
            return Ok(self.at_origin(f, Form::Bs));
        }
        let fiber = self.fiber(z)?;
        let bf = f.backward_shift();
        let branch_terms: Vec<Complex64> = (0..fiber.degree())
            .map(|i| z * fiber.sigma_prime(i) * bf.eval(fiber.points[i]))
            .collect();
        Ok(self.assemble(f, z, Form::Bs, self.lambda_zero(f, z), branch_terms, &fiber))
    }

    pub fn evaluate(&self, f: &HardyPoly, z: Complex64, form: Form) -> Result<AdjointEvaluation> {
        match form {
            Form::Thm => self.eval_thm(f, z),
            Form::Cor => self.eval_cor(f, z),
            Form::Bs => self.eval_bs(f, z),
            Form::Auto => {
                if self.pole_distance(z).is_some_and(|d| d < tol::POLE_GUARD) {
                    self.eval_bs(f, z)
                } else {
                    self.eval_cor(f, z)
                }
            }
        }
    }

    fn assemble(
        &self,
        _f: &HardyPoly,
        z: Complex64,
        form: Form,
        lambda_term: Complex64,
        branch_terms: Vec<Complex64>,
        fiber: &PreimageFiber,
    ) -> AdjointEvaluation {
        let value = lambda_term + branch_terms.iter().sum::<Complex64>();
        AdjointEvaluation {
            z,
            value,
            form_used: form,
            lambda_term,
            branch_terms,
            flags: self.flags(fiber, z),
        }
    }

    /// `Ω_φ f(z) = Σ σ_j'(z) (Bf)(σ_j(z))` for `f` vanishing at the origin.
    pub fn omega(&self, f: &HardyPoly, z: Complex64) -> Result<Complex64> {
        if f.at_zero() != ZERO {
            return Err(Error::NotInH20 { value: f.at_zero() });
        }
        Self::check_domain(z)?;
        let fiber = self.fiber(z)?;
        let bf = f.backward_shift();
        Ok((0..fiber.degree())
            .map(|i| fiber.sigma_prime(i) * bf.eval(fiber.points[i]))
            .sum())
    }

    /// `|1/(1 - conj(φ(0)) z) - 1/(1 - conj(φ(∞)) z) - z Σ 1/(w φₑ'(w))|`.
    pub fn identity_residual(&self, z: Complex64) -> Result<f64> {
        let ExtPoint::Finite(inf) = self.at_infinity else {
            return Err(Error::PoleAtInfinity);
        };
        Self::check_domain(z)?;
        self.guard(z)?;
        let fiber = self.fiber(z)?;
        if let Some(w) = fiber.points.iter().find(|w| w.norm() < tol::DERIVATIVE_FLOOR) {
            return Err(Error::PoleProximity { at: z, distance: w.norm() });
        }
        let lhs = (ONE - self.at_zero.conj() * z).inv() - (ONE - inf.conj() * z).inv();
        let rhs = z * fiber
            .points
            .iter()
            .zip(&fiber.derivs)
            .map(|(&w, &dv)| (w * dv).inv())
            .sum::<Complex64>();
        Ok((lhs - rhs).norm())
    }

    /// Expansion of `C_φ K_z` over its poles `w_j = 1/conj(σ_j(z))`, with
    /// `α = K_z(φ(∞))` and residues `β_j = -1/(conj(z) φ'(w_j))`.
    pub fn partial_fraction(&self, z: Complex64) -> Result<PartialFraction> {
        let ExtPoint::Finite(inf) = self.at_infinity else {
            return Err(Error::PoleAtInfinity);
        };
        Self::check_domain(z)?;
        if z == ZERO {
            return Err(Error::NotRegularValue { at: ExtPoint::Finite(z), margin: 0.0 });
        }
        self.guard(z)?;
        let fiber = self.fiber(z)?;
        let alpha = (ONE - z.conj() * inf).inv();
        let poles: Vec<Complex64> = fiber.points.iter().map(|s| s.conj().inv()).collect();
        let residues = poles
            .iter()
            .map(|&w| -(z.conj() * self.phi.eval_derivative(w)).inv())
            .collect();
        Ok(PartialFraction { alpha, poles, residues })
    }
}
