//! Numerical continuation of inverse branches along paths of regular values.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::fiber::{fiber_of, raw_fiber, PreimageFiber};
use crate::error::{Error, Result};
use crate::tol;

/// Continues every branch in `start` along `path`, carrying labels by
/// nearest-point matching. Steps whose matching is not clearly separated
/// from the predicted motion are bisected.
///
/// The path is taken to begin at `start.z`; a leading point equal to it is
/// skipped.
pub fn continue_branch(
    phi_e: &crate::rational::RationalMap,
    start: &PreimageFiber,
    path: &[Complex64],
) -> Result<PreimageFiber> {
    let mut current = start.clone();
    let skip = usize::from(path.first() == Some(&start.z));
    for &target in &path[skip..] {
        current = step(phi_e, &current, target, 0)?;
    }
    Ok(current)
}

fn step(
    phi_e: &crate::rational::RationalMap,
    from: &PreimageFiber,
    to: Complex64,
    depth: usize,
) -> Result<PreimageFiber> {
    let (points, derivs, margin) = match raw_fiber(phi_e, to, Some(&from.points)) {
        Ok(f) => f,
        Err(Error::NotRegularValue { .. }) => return Err(Error::PathThroughCriticalValue { at: to }),
        Err(e) => return Err(e),
    };
    let dz = (to - from.z).norm();
    let motion = from
        .derivs
        .iter()
        .map(|dv| dz / dv.norm())
        .fold(0.0, f64::max);

    let d = from.points.len();
    let mut assignment = Vec::with_capacity(d);
    let mut gap = f64::INFINITY;
    for &old in &from.points {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, &new) in points.iter().enumerate() {
            let dist = (new - old).norm();
            if dist < best.0 {
                second = best.0;
                best = (dist, j);
            } else if dist < second {
                second = dist;
            }
        }
        gap = gap.min(second - best.0);
        assignment.push(best.1);
    }
    let mut seen = vec![false; d];
    let bijective = assignment.iter().all(|&j| !std::mem::replace(&mut seen[j], true));

    if bijective && gap > tol::CONTINUATION_SAFETY * motion {
        return Ok(PreimageFiber {
            z: to,
            points: assignment.iter().map(|&j| points[j]).collect(),
            derivs: assignment.iter().map(|&j| derivs[j]).collect(),
            labels: from.labels.clone(),
            margin,
        });
    }
    if depth >= tol::CONTINUATION_MAX_DEPTH {
        return Err(Error::MatchingAmbiguity { at: to });
    }
    let mid = (from.z + to) * 0.5;
    let halfway = step(phi_e, from, mid, depth + 1)?;
    step(phi_e, &halfway, to, depth + 1)
}

/// Branch permutation produced by continuing around a closed loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Monodromy {
    pub base: Complex64,
    /// `permutation[i]` is the label of the branch that label `i` turns into.
    pub permutation: Vec<usize>,
    pub cycles: String,
    /// Largest distance between a returned point and its matched start point.
    pub max_return_error: f64,
    pub start: PreimageFiber,
    pub end: PreimageFiber,
}

impl Monodromy {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Cycle notation without fixed points; `()` for the identity.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i.to_string());
            i = perm[i];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Continues the canonically labeled fiber at `path[0]` around the closed
/// loop `path` (the final return to `path[0]` is added if missing).
pub fn loop_monodromy(phi_e: &crate::rational::RationalMap, path: &[Complex64]) -> Result<Monodromy> {
    let base = path[0];
    let start = fiber_of(phi_e, base).map_err(|e| match e {
        Error::NotRegularValue { .. } => Error::PathThroughCriticalValue { at: base },
        other => other,
    })?;
    let mut closed = path.to_vec();
    if closed.last() != Some(&base) {
        closed.push(base);
    }
    let end = continue_branch(phi_e, &start, &closed)?;
    let mut permutation = vec![0; start.degree()];
    let mut max_return_error: f64 = 0.0;
    for (i, &label) in end.labels.iter().enumerate() {
        let (dist, j) = start
            .points
            .iter()
            .enumerate()
            .map(|(j, &p)| ((p - end.points[i]).norm(), j))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
        max_return_error = max_return_error.max(dist);
        permutation[label] = start.labels[j];
    }
    let cycles = cycle_notation(&permutation);
    Ok(Monodromy {
        base,
        permutation,
        cycles,
        max_return_error,
        start,
        end,
    })
}

/// Monodromy around the circle `|z - center| = radius`, starting at
/// `center + radius` and traversed counterclockwise in `steps` segments.
pub fn monodromy(
    phi_e: &crate::rational::RationalMap,
    center: Complex64,
    radius: f64,
    steps: usize,
) -> Result<Monodromy> {
    let steps = steps.max(3);
    let path: Vec<Complex64> = (0..steps)
        .map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / steps as f64))
        .collect();
    loop_monodromy(phi_e, &path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ComplexPoly;
    use crate::rational::RationalMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cycle_strings() {
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 0]), "(0 1)");
        assert_eq!(cycle_notation(&[1, 2, 0, 3]), "(0 1 2)");
    }

    #[test]
    fn square_root_swaps_around_origin() {
        let sq = RationalMap::monomial(c(1.0, 0.0), 2);
        let m = monodromy(&sq, c(0.0, 0.0), 0.25, 64).unwrap();
        assert_eq!(m.permutation, vec![1, 0]);
        assert_eq!(m.cycles, "(0 1)");
        assert!(m.max_return_error < 1e-10);
        let m = monodromy(&sq, c(0.5, 0.0), 0.25, 64).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn open_path_transports_labels() {
        let sq = RationalMap::monomial(c(1.0, 0.0), 2);
        let start = fiber_of(&sq, c(0.25, 0.0)).unwrap();
        // half a turn: +0.5 moves to +0.5i, -0.5 to -0.5i
        let path: Vec<Complex64> = (0..=32)
            .map(|k| Complex64::from_polar(0.25, std::f64::consts::PI * k as f64 / 32.0))
            .collect();
        let end = continue_branch(&sq, &start, &path).unwrap();
        let plus = end.by_label(1).unwrap();
        assert!((plus - c(0.0, 0.5)).norm() < 1e-12, "{plus}");
    }

    #[test]
    fn critical_value_on_path_is_reported() {
        let sq = RationalMap::monomial(c(1.0, 0.0), 2);
        let err = monodromy(&sq, c(0.25, 0.0), 0.25, 8).unwrap_err();
        assert!(matches!(err, Error::PathThroughCriticalValue { .. }), "{err:?}");
    }

    #[test]
    fn loops_inside_the_disc_are_trivial_for_recip_quad() {
        let phi = RationalMap::new(ComplexPoly::one(), ComplexPoly::from_real(&[3.0, -1.0, -1.0])).unwrap();
        let e = phi.exterior().unwrap();
        let m = monodromy(&e, c(0.0, 0.0), 0.9, 64).unwrap();
        assert!(m.is_identity());
        assert!(m.max_return_error < 1e-10);
    }
}
