//! Dense complex polynomials and simultaneous root finding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with complex coefficients in ascending order:
/// `coeffs[k]` is the coefficient of `z^k`.
///
/// The zero polynomial has no coefficients. Trailing coefficients that are
/// negligible relative to the largest one are stripped on construction.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl From<Vec<Complex64>> for ComplexPoly {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<ComplexPoly> for Vec<Complex64> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    /// Builds a polynomial from real coefficients, ascending.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `lead * prod (z - r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    fn normalize(&mut self) {
        for c in &mut self.coeffs {
            // turns -0.0 into 0.0
            *c += Complex64::new(0.0, 0.0);
        }
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            if scale == 0.0 {
                self.coeffs.clear();
            }
            return;
        }
        let floor = tol::NORMALIZATION_FLOOR * scale;
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= floor {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree zero.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural bound on rounding error in [`eval`](Self::eval).
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|&c| c / lead).collect())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Coefficients of `z^n p(1/z)` for a fixed length `n + 1`.
    ///
    /// Panics if `n` is smaller than the degree.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.coeffs.len() <= n + 1, "reversal length below degree");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, ZERO);
        coeffs.reverse();
        Self::new(coeffs)
    }

    /// Polynomial long division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroDenominator)?;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * c;
            }
            rem[k + dd] = ZERO;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// All roots by Aberth–Ehrlich iteration from a circle of starting points.
    pub fn roots(&self) -> Result<RootSet> {
        self.roots_from(None)
    }

    /// Like [`roots`](Self::roots) but warm-started from the given guesses,
    /// which must number exactly `degree` after exact zero roots are removed.
    pub fn roots_near(&self, guesses: &[Complex64]) -> Result<RootSet> {
        self.roots_from(Some(guesses))
    }

    fn roots_from(&self, guesses: Option<&[Complex64]>) -> Result<RootSet> {
        let d = match self.degree() {
            None | Some(0) => return Err(Error::DegreeZero),
            Some(d) => d,
        };
        // Exact zeros at the origin are split off so the iteration never has to
        // resolve a cluster sitting on 0.
        let zeros_at_origin = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        let reduced = Self::new(self.coeffs[zeros_at_origin..].to_vec());
        let mut roots = vec![ZERO; zeros_at_origin];
        if d > zeros_at_origin {
            let m = d - zeros_at_origin;
            let start = match guesses {
                Some(g) => {
                    let nonzero: Vec<Complex64> = if g.len() == m {
                        g.to_vec()
                    } else {
                        // drop the guesses closest to the origin
                        let mut sorted = g.to_vec();
                        sorted.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
                        sorted.truncate(m);
                        sorted
                    };
                    if nonzero.len() == m {
                        separate(nonzero)
                    } else {
                        circle_guesses(&reduced)
                    }
                }
                None => circle_guesses(&reduced),
            };
            roots.extend(aberth(&reduced, start)?);
        }
        Ok(RootSet::certify(self, roots))
    }
}

/// Starting points on a circle whose radius is the largest of
/// `|c_k / c_d|^(1/(d-k))`, rotated off the real axis.
fn circle_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let d = p.degree_or_zero();
    let lead = p.leading().norm();
    let radius = (0..d)
        .map(|k| (p.coeff(k).norm() / lead).powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE.sqrt());
    let offset = 0.4;
    (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / d as f64 + offset;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Nudges coincident starting points apart; the Aberth correction divides by
/// their differences.
fn separate(mut z: Vec<Complex64>) -> Vec<Complex64> {
    for i in 0..z.len() {
        for j in 0..i {
            let scale = z[i].norm().max(1e-3);
            if (z[i] - z[j]).norm() < 1e-9 * scale {
                z[i] += Complex64::from_polar(1e-6 * scale, 0.7 + i as f64);
            }
        }
    }
    z
}

fn aberth(p: &ComplexPoly, mut z: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let dp = p.derivative();
    let d = z.len();
    let eps = f64::EPSILON;
    let mut done = vec![false; d];
    for _ in 0..tol::ROOT_MAX_SWEEPS {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let pz = p.eval(zi);
            if pz.norm() <= 4.0 * eps * p.abs_eval(zi) {
                done[i] = true;
                continue;
            }
            all_done = false;
            let dpz = dp.eval(zi);
            let sum: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = zi - z[j];
                    if diff == ZERO {
                        ZERO
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let correction = if dpz == ZERO {
                // stationary point of p: step off along an arbitrary direction
                Complex64::from_polar(1e-3 * zi.norm().max(1.0), 1.1 + i as f64)
            } else {
                let ratio = pz / dpz;
                let denom = ONE - ratio * sum;
                if denom == ZERO {
                    ratio
                } else {
                    ratio / denom
                }
            };
            z[i] = zi - correction;
            if correction.norm() <= eps * z[i].norm() {
                done[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    // One Newton step per isolated root tightens the residual; skipped for
    // clustered roots where Newton is unreliable.
    for i in 0..d {
        let isolated = (0..d).all(|j| {
            j == i || (z[i] - z[j]).norm() > tol::CLUSTER_TOL * z[i].norm().max(1.0)
        });
        if !isolated {
            continue;
        }
        let dpz = dp.eval(z[i]);
        if dpz == ZERO {
            continue;
        }
        let candidate = z[i] - p.eval(z[i]) / dpz;
        if p.eval(candidate).norm() < p.eval(z[i]).norm() {
            z[i] = candidate;
        }
    }
    let worst = z
        .iter()
        .map(|&r| relative_residual(p, r))
        .fold(0.0, f64::max);
    if !(worst <= tol::ROOT_RESIDUAL_TOL) {
        return Err(Error::NonConvergence {
            sweeps: tol::ROOT_MAX_SWEEPS,
            residual: worst,
        });
    }
    Ok(z)
}

/// `|p(r)|` over `sum |c_k| max(1, |r|)^k`.
pub fn relative_residual(p: &ComplexPoly, r: Complex64) -> f64 {
    let big = Complex64::new(r.norm().max(1.0), 0.0);
    let scale = p.abs_eval(big);
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(r).norm() / scale
}

/// Roots of a polynomial with per-root residuals and multiplicity clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// Indices into `roots`, one group per cluster (singletons included).
    pub clusters: Vec<Vec<usize>>,
}

impl RootSet {
    fn certify(p: &ComplexPoly, roots: Vec<Complex64>) -> Self {
        let residuals = roots.iter().map(|&r| relative_residual(p, r)).collect();
        let clusters = cluster_indices(&roots, |a, b| {
            (a - b).norm() < tol::CLUSTER_TOL * a.norm().max(b.norm()).max(1.0)
        });
        Self {
            roots,
            residuals,
            clusters,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Largest cluster size.
    pub fn max_multiplicity(&self) -> usize {
        self.clusters.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Cluster representatives (mean of members) with their sizes.
    pub fn distinct(&self) -> Vec<(Complex64, usize)> {
        self.clusters
            .iter()
            .map(|c| {
                let mean = c.iter().map(|&i| self.roots[i]).sum::<Complex64>() / c.len() as f64;
                (mean, c.len())
            })
            .collect()
    }
}

/// Groups indices into connected components of the `close` relation.
pub(crate) fn cluster_indices<T: Copy>(
    items: &[T],
    close: impl Fn(T, T) -> bool,
) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..i {
            if close(items[i], items[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Approximate monic GCD by pairing roots of `p` and `q` that agree to
/// [`tol::GCD_MATCH_TOL`]. Returns `1` when nothing matches.
pub fn gcd_approx(p: &ComplexPoly, q: &ComplexPoly) -> Result<ComplexPoly> {
    match (p.degree(), q.degree()) {
        (None, None) => Err(Error::ZeroDenominator),
        (None, Some(0)) | (Some(0), None) => Ok(ComplexPoly::one()),
        (None, Some(_)) => Ok(q.monic()),
        (Some(_), None) => Ok(p.monic()),
        (Some(0), _) | (_, Some(0)) => Ok(ComplexPoly::one()),
        _ => {
            let pr = p.roots()?.roots;
            let qr = q.roots()?.roots;
            Ok(ComplexPoly::from_roots(ONE, &match_roots(&pr, &qr, tol::GCD_MATCH_TOL)))
        }
    }
}

/// Greedy closest-pair matching; returns the midpoints of matched pairs.
pub(crate) fn match_roots(a: &[Complex64], b: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let dist = (x - y).norm() / x.norm().max(y.norm()).max(1.0);
            if dist < tol {
                pairs.push((dist, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut common = Vec::new();
    for (_, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            common.push((a[i] + b[j]) * 0.5);
        }
    }
    common
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        self.scaled(-ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for ComplexPoly {
            type Output = ComplexPoly;
            fn $method(self, rhs: ComplexPoly) -> ComplexPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn eval_constant_term_and_zero_poly() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.eval(ZERO), c(1.0, 0.0));
        assert_eq!(ComplexPoly::zero().eval(c(3.0, 4.0)), ZERO);
    }

    #[test]
    fn eval_discriminant_of_blaschke_example_at_critical_value() {
        let delta = ComplexPoly::from_real(&[1.0, -14.0, 1.0]);
        let z = c(7.0 + 4.0 * 3f64.sqrt(), 0.0);
        assert!(relative_residual(&delta, z) < tol::ROOT_RESIDUAL_TOL);
    }

    #[test]
    fn arithmetic_basics() {
        let z = ComplexPoly::monomial(ONE, 1);
        assert_eq!(&z * &z, ComplexPoly::monomial(ONE, 2));
        assert!((&z * &ComplexPoly::zero()).is_zero());
        let a = ComplexPoly::from_real(&[1.0, -2.0]);
        let b = ComplexPoly::from_real(&[2.0, -1.0]);
        assert_eq!(&a * &b, ComplexPoly::from_real(&[2.0, -5.0, 2.0]));
        assert!((&a - &a).is_zero());
        assert_eq!(&a + &b, ComplexPoly::from_real(&[3.0, -3.0]));
    }

    #[test]
    fn derivative_rules() {
        assert!(ComplexPoly::from_real(&[5.0]).derivative().is_zero());
        assert_eq!(
            ComplexPoly::from_real(&[1.0, 2.0, 3.0]).derivative(),
            ComplexPoly::from_real(&[2.0, 6.0])
        );
    }

    #[test]
    fn normalization_strips_negligible_leading_terms() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 1e-15]);
        assert_eq!(p.degree(), Some(1));
        assert!(ComplexPoly::from_real(&[0.0, 0.0]).is_zero());
        assert_eq!(ComplexPoly::zero().degree(), None);
    }

    #[test]
    fn roots_of_blaschke_discriminant() {
        let delta = ComplexPoly::from_real(&[1.0, -14.0, 1.0]);
        let rs = sorted(delta.roots().unwrap().roots);
        let s = 4.0 * 3f64.sqrt();
        assert!((rs[0] - c(7.0 - s, 0.0)).norm() < 1e-12);
        assert!((rs[1] - c(7.0 + s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn repeated_root_is_clustered() {
        let p = ComplexPoly::from_real(&[0.0, 0.0, 1.0]);
        let rs = p.roots().unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs.max_multiplicity(), 2);
        // a shifted double root has to be resolved by the iteration itself
        let q = ComplexPoly::from_roots(ONE, &[c(0.3, 0.2), c(0.3, 0.2), c(-1.0, 0.5)]);
        let rs = q.roots().unwrap();
        assert_eq!(rs.max_multiplicity(), 2);
        assert_eq!(rs.clusters.len(), 2);
    }

    #[test]
    fn constants_have_no_roots() {
        assert_eq!(ComplexPoly::from_real(&[2.0]).roots(), Err(Error::DegreeZero));
        assert_eq!(ComplexPoly::zero().roots(), Err(Error::DegreeZero));
    }

    /// `g_d(z) = 1 + z + ... + z^(d-1) - d z^d`
    fn g(d: usize) -> ComplexPoly {
        let mut coeffs = vec![1.0; d];
        coeffs.push(-(d as f64));
        ComplexPoly::from_real(&coeffs)
    }

    #[test]
    fn g_d_roots_lie_in_closed_disc_with_simple_root_at_one() {
        for d in 2..=6 {
            let rs = g(d).roots().unwrap();
            assert_eq!(rs.len(), d);
            assert!(rs.residuals.iter().all(|&r| r <= tol::ROOT_RESIDUAL_TOL));
            assert!(rs.roots.iter().all(|r| r.norm() <= 1.0 + 1e-9), "d={d}");
            let at_one = rs.roots.iter().filter(|r| (*r - ONE).norm() < 1e-9).count();
            assert_eq!(at_one, 1, "d={d}");
            assert_eq!(rs.max_multiplicity(), 1);
        }
        // f_d = 1 + 2z + ... + d z^(d-1) is the derivative of z + z^2 + ... + z^d
        let f3 = ComplexPoly::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(f3.derivative(), ComplexPoly::from_real(&[2.0, 6.0]));
    }

    #[test]
    fn gcd_simple_cases() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        let q = ComplexPoly::from_real(&[-1.0, 1.0]);
        let g = gcd_approx(&p, &q).unwrap();
        assert!((g.coeff(0) + ONE).norm() < 1e-12 && (g.coeff(1) - ONE).norm() < 1e-12);
        assert_eq!(gcd_approx(&p, &ComplexPoly::one()).unwrap(), ComplexPoly::one());
        assert_eq!(
            gcd_approx(&ComplexPoly::zero(), &ComplexPoly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn div_rem_recovers_factor() {
        let a = ComplexPoly::from_roots(c(2.0, 1.0), &[c(1.0, 1.0), c(-0.5, 0.0)]);
        let b = ComplexPoly::from_roots(ONE, &[c(3.0, 0.0)]);
        let (q, r) = (&a * &b).div_rem(&b).unwrap();
        assert!(r.is_zero() || r.scale() < 1e-12);
        for (x, y) in q.coeffs().iter().zip(a.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    fn arb_complex() -> impl Strategy<Value = Complex64> {
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = ComplexPoly> {
        prop::collection::vec(arb_complex(), 2..=max_deg + 1).prop_filter_map(
            "leading coefficient too small",
            |v| {
                let p = ComplexPoly::new(v);
                (p.degree().unwrap_or(0) >= 1 && p.leading().norm() > 0.1).then_some(p)
            },
        )
    }

    proptest! {
        #[test]
        fn eval_matches_power_sum(p in arb_poly(8), z in arb_complex()) {
            let direct: Complex64 = p.coeffs().iter().enumerate().map(|(k, &a)| a * z.powu(k as u32)).sum();
            prop_assert!((p.eval(z) - direct).norm() <= 1e-12 * p.abs_eval(z).max(1.0));
        }

        #[test]
        fn eval_of_product_is_product_of_evals(p in arb_poly(6), q in arb_poly(6), z in arb_complex()) {
            let lhs = (&p * &q).eval(z);
            let rhs = p.eval(z) * q.eval(z);
            prop_assert!((lhs - rhs).norm() <= 1e-11 * (p.abs_eval(z) * q.abs_eval(z)).max(1.0));
        }

        #[test]
        fn leibniz_rule(p in arb_poly(6), q in arb_poly(6)) {
            let lhs = (&p * &q).derivative();
            let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
            let scale = p.scale() * q.scale();
            for k in 0..lhs.coeffs().len().max(rhs.coeffs().len()) {
                prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn roots_reconstruct_and_satisfy_vieta(p in arb_poly(10)) {
            let rs = p.roots().unwrap();
            let d = p.degree().unwrap();
            prop_assert_eq!(rs.len(), d);
            let rebuilt = ComplexPoly::from_roots(p.leading(), &rs.roots);
            let tol = 1e-8 * p.abs_eval(Complex64::new(rs.roots.iter().map(|r| r.norm()).fold(1.0, f64::max), 0.0));
            for k in 0..=d {
                prop_assert!((rebuilt.coeff(k) - p.coeff(k)).norm() <= tol, "k={} {:?}", k, rs);
            }
            let sum: Complex64 = rs.roots.iter().sum();
            let expected_sum = -p.coeff(d - 1) / p.leading();
            prop_assert!((sum - expected_sum).norm() <= tol / p.leading().norm());
        }

        #[test]
        fn planted_common_factor_is_recovered(
            p in arb_poly(3), q in arb_poly(3), a in arb_complex()
        ) {
            let factor = ComplexPoly::from_roots(ONE, &[a]);
            let pr = p.roots().unwrap().roots;
            let qr = q.roots().unwrap().roots;
            // keep the pair coprime and the planted root well separated
            let min_sep = pr.iter().flat_map(|x| qr.iter().map(move |y| (x - y).norm())).fold(f64::MAX, f64::min);
            let near_a = pr.iter().chain(&qr).map(|x| (x - a).norm()).fold(f64::MAX, f64::min);
            prop_assume!(min_sep > 1e-3 && near_a > 1e-3);
            let g = gcd_approx(&(&factor * &p), &(&factor * &q)).unwrap();
            prop_assert_eq!(g.degree(), Some(1));
            prop_assert!((g.coeff(0) + a).norm() < 1e-8);
        }
    }
}
