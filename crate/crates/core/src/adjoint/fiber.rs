use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{ExtPoint, RationalMap};
use crate::tol;

/// The `d` preimages of a regular value `z` under the exterior map, i.e. the
/// branch values `σ_j(z)`, with `φₑ'` at each of them.
///
/// `points[i]` carries branch label `labels[i]`. Labels are assigned by
/// sorting at a base point and are then transported by continuation, so they
/// only mean something relative to the base point they came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageFiber {
    pub z: Complex64,
    pub points: Vec<Complex64>,
    pub derivs: Vec<Complex64>,
    pub labels: Vec<usize>,
    /// Smallest distance between two fiber points.
    pub margin: f64,
}

impl PreimageFiber {
    /// `σ_j'(z) = 1/φₑ'(σ_j(z))`.
    pub fn sigma_prime(&self, i: usize) -> Complex64 {
        self.derivs[i].inv()
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    /// Branch value for a given label.
    pub fn by_label(&self, label: usize) -> Option<Complex64> {
        self.labels.iter().position(|&l| l == label).map(|i| self.points[i])
    }

    pub fn is_near_critical(&self) -> bool {
        self.margin < tol::NEAR_CRITICAL_MARGIN
    }

    /// Smallest `|φₑ(w) - z|` scaled by the size of the terms, over the fiber.
    pub fn max_residual(&self, phi_e: &RationalMap) -> f64 {
        self.points
            .iter()
            .map(|&w| (phi_e.eval_finite(w) - self.z).norm() / self.z.norm().max(1.0))
            .fold(0.0, f64::max)
    }
}

fn min_distance(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[..i] {
            best = best.min((a - b).norm());
        }
    }
    if best.is_finite() {
        best
    } else {
        1.0
    }
}

/// Finite fiber points of `phi_e` over `z`, Newton-polished, without any
/// condition on where they lie. Fails with `NotRegularValue` when two points
/// merge, a derivative falls below the floor, or a point sits at infinity.
pub(crate) fn raw_fiber(
    phi_e: &RationalMap,
    z: Complex64,
    guesses: Option<&[Complex64]>,
) -> Result<(Vec<Complex64>, Vec<Complex64>, f64)> {
    let d = phi_e.degree();
    if d == 0 {
        return Err(Error::DegreeZero);
    }
    let target = phi_e.num() - &phi_e.den().scaled(z);
    if target.degree_or_zero() < d {
        // infinity belongs to the fiber
        return Err(Error::NotRegularValue { at: z.into(), margin: 0.0 });
    }
    let roots = match guesses {
        Some(g) => target.roots_near(g)?,
        None => target.roots()?,
    };
    let dt = target.derivative();
    let mut points = roots.roots;
    for w in points.iter_mut() {
        for _ in 0..tol::FIBER_POLISH_STEPS {
            let slope = dt.eval(*w);
            if slope.norm() == 0.0 {
                break;
            }
            let next = *w - target.eval(*w) / slope;
            if target.eval(next).norm() <= target.eval(*w).norm() {
                *w = next;
            }
        }
    }
    let margin = min_distance(&points);
    let scale = points.iter().map(|w| w.norm()).fold(1.0, f64::max);
    let derivs: Vec<Complex64> = points.iter().map(|&w| phi_e.eval_derivative(w)).collect();
    let flat = derivs.iter().any(|dv| !(dv.norm() > tol::DERIVATIVE_FLOOR));
    if margin <= tol::CLUSTER_TOL * scale || flat {
        return Err(Error::NotRegularValue { at: ExtPoint::Finite(z), margin });
    }
    Ok((points, derivs, margin))
}

fn canonical_order(points: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .re
            .total_cmp(&points[b].re)
            .then(points[a].im.total_cmp(&points[b].im))
    });
    idx
}

/// Fiber of `phi_e` over any finite regular value, labeled canonically
/// (ascending real part, then imaginary part).
pub fn fiber_of(phi_e: &RationalMap, z: Complex64) -> Result<PreimageFiber> {
    let (points, derivs, margin) = raw_fiber(phi_e, z, None)?;
    let order = canonical_order(&points);
    Ok(PreimageFiber {
        z,
        points: order.iter().map(|&i| points[i]).collect(),
        derivs: order.iter().map(|&i| derivs[i]).collect(),
        labels: (0..order.len()).collect(),
        margin,
    })
}

/// Fiber of the exterior map over a regular value `z` in the unit disc.
/// Every point must land back in the disc.
pub fn preimage_fiber(phi_e: &RationalMap, z: Complex64) -> Result<PreimageFiber> {
    if !(z.norm() < 1.0) {
        return Err(Error::DomainViolation { at: z });
    }
    let fiber = fiber_of(phi_e, z)?;
    if let Some(w) = fiber.points.iter().find(|w| !(w.norm() < 1.0)) {
        return Err(Error::FiberEscape { modulus: w.norm() });
    }
    Ok(fiber)
}
