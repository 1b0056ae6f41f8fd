//! Outer regularity, Blaschke detection, boundary contacts and the branch
//! decompositions of the adjoint.
//!
//! A map is outer regular when every critical value lies in the open disc,
//! and strongly outer regular when in addition `φ(∞)` does. The branch
//! decompositions
//!
//! * bs form: `C_φ* = Λ₀ + Σ M_{h_j} C_{σ_j} B` with `h_j = z σ_j'`
//! * weighted form: `C_φ* = Λ_∞ + Σ M_{g_j} C_{σ_j}` with `g_j = z σ_j'/σ_j`
//!
//! are checked numerically on a branch atlas close to the unit circle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adjoint::fiber::{fiber_of, raw_fiber, PreimageFiber};
use crate::adjoint::{continue_branch, cycle_notation, CertifiedMap};
use crate::error::{Error, Result};
use crate::poly::{match_roots, ComplexPoly};
use crate::rational::{ExtPoint, RationalMap};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityClass {
    StronglyOuterRegular,
    OuterRegular,
    NotOuterRegular,
}

impl RegularityClass {
    pub fn is_outer_regular(self) -> bool {
        !matches!(self, Self::NotOuterRegular)
    }

    pub fn is_strongly_outer_regular(self) -> bool {
        matches!(self, Self::StronglyOuterRegular)
    }
}

/// Position of a point of the sphere relative to the unit circle, with
/// `CLASS_MARGIN` of slack on either side of the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    InDisc,
    OnCircle,
    Exterior,
    Infinity,
}

impl Location {
    pub fn of(p: ExtPoint) -> Self {
        match p {
            ExtPoint::Infinity => Location::Infinity,
            ExtPoint::Finite(z) => {
                let r = z.norm();
                if (r - 1.0).abs() <= tol::CLASS_MARGIN {
                    Location::OnCircle
                } else if r < 1.0 {
                    Location::InDisc
                } else {
                    Location::Exterior
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocatedPoint {
    pub value: ExtPoint,
    pub location: Location,
}

impl LocatedPoint {
    pub fn new(value: ExtPoint) -> Self {
        Self { value, location: Location::of(value) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValueEntry {
    pub value: ExtPoint,
    /// `None` for the point at infinity.
    pub modulus: Option<f64>,
    pub location: Location,
    pub witnesses: Vec<ExtPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryContacts {
    /// Finite Blaschke products send the whole circle to the circle.
    AllOfBoundary,
    Points { count: usize, points: Vec<Complex64> },
}

impl BoundaryContacts {
    pub fn count(&self) -> Option<usize> {
        match self {
            BoundaryContacts::AllOfBoundary => None,
            BoundaryContacts::Points { count, .. } => Some(*count),
        }
    }

    pub fn points(&self) -> &[Complex64] {
        match self {
            BoundaryContacts::AllOfBoundary => &[],
            BoundaryContacts::Points { points, .. } => points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub degree: usize,
    pub class: RegularityClass,
    pub phi_at_zero: Complex64,
    pub phi_at_infinity: LocatedPoint,
    pub critical_values_inside: Vec<CriticalValueEntry>,
    pub critical_values_outside_or_boundary: Vec<CriticalValueEntry>,
    /// Critical values within `CLASS_MARGIN` of the circle. They are counted
    /// as outside for the class, but the exact answer is not decided.
    pub indeterminate: Vec<CriticalValueEntry>,
    pub is_blaschke: bool,
    pub boundary_contacts: BoundaryContacts,
}

impl RegularityReport {
    pub fn critical_values(&self) -> impl Iterator<Item = &CriticalValueEntry> {
        self.critical_values_inside
            .iter()
            .chain(&self.critical_values_outside_or_boundary)
    }
}

pub fn classify(map: &CertifiedMap) -> Result<RegularityReport> {
    let phi = map.phi();
    let data = phi.critical_data()?;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut indeterminate = Vec::new();
    for cv in data.values {
        let entry = CriticalValueEntry {
            value: cv.value,
            modulus: cv.value.finite().map(|v| v.norm()),
            location: Location::of(cv.value),
            witnesses: cv.witnesses,
        };
        if entry.location == Location::OnCircle {
            indeterminate.push(entry.clone());
        }
        match entry.modulus {
            Some(r) if r < 1.0 - tol::CLASS_MARGIN => inside.push(entry),
            _ => outside.push(entry),
        }
    }
    let at_infinity = LocatedPoint::new(map.at_infinity());
    let class = if !outside.is_empty() {
        RegularityClass::NotOuterRegular
    } else if at_infinity.location == Location::InDisc {
        RegularityClass::StronglyOuterRegular
    } else {
        RegularityClass::OuterRegular
    };
    Ok(RegularityReport {
        degree: phi.degree(),
        class,
        phi_at_zero: map.at_zero(),
        phi_at_infinity: at_infinity,
        critical_values_inside: inside,
        critical_values_outside_or_boundary: outside,
        indeterminate,
        is_blaschke: is_finite_blaschke(phi),
        boundary_contacts: boundary_contacts(phi)?,
    })
}

fn boundary_point(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

/// True when `|φ| = 1` on the boundary grid and the zeros are the
/// reflections of the poles, with the missing poles (at infinity) matched by
/// zeros at the origin.
pub fn is_finite_blaschke(phi: &RationalMap) -> bool {
    let d = phi.degree();
    if d == 0 || phi.num().degree_or_zero() != d {
        return false;
    }
    let n = tol::BOUNDARY_GRID;
    let deviation = (0..n)
        .map(|k| (phi.eval_finite(boundary_point(k, n)).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if !(deviation <= tol::BLASCHKE_TOL) {
        return false;
    }
    let Ok(zeros) = phi.num().roots() else { return false };
    let poles = if phi.den().degree_or_zero() >= 1 {
        match phi.den().roots() {
            Ok(r) => r.roots,
            Err(_) => return false,
        }
    } else {
        Vec::new()
    };
    if poles.iter().any(|p| p.norm() <= 1.0) {
        return false;
    }
    let reflected: Vec<Complex64> = poles.iter().map(|p| p.conj().inv()).collect();
    let matched = match_roots(&zeros.roots, &reflected, tol::BLASCHKE_MATCH_TOL).len();
    let at_origin = zeros
        .roots
        .iter()
        .filter(|z| z.norm() <= tol::BLASCHKE_MATCH_TOL)
        .count();
    matched == reflected.len() && at_origin == d - reflected.len()
}

/// Points of the circle where `|φ|` reaches one: grid maxima, polished by
/// Newton's method on the derivative of `θ -> |φ(e^{iθ})|²`.
pub fn boundary_contacts(phi: &RationalMap) -> Result<BoundaryContacts> {
    if is_finite_blaschke(phi) {
        return Ok(BoundaryContacts::AllOfBoundary);
    }
    let n = tol::BOUNDARY_GRID;
    let h = TAU / n as f64;
    let modulus: Vec<f64> = (0..n).map(|k| phi.eval_finite(boundary_point(k, n)).norm()).collect();
    let d1 = phi.derivative();
    let d2 = d1.derivative();
    let mut points: Vec<Complex64> = Vec::new();
    for k in 0..n {
        let m = modulus[k];
        if m < modulus[(k + n - 1) % n] || m < modulus[(k + 1) % n] || m <= 1.0 - tol::CONTACT_PREFILTER {
            continue;
        }
        let theta0 = h * k as f64;
        let mut theta = theta0;
        for _ in 0..30 {
            let zeta = Complex64::from_polar(1.0, theta);
            let u = phi.eval_finite(zeta);
            let p1 = d1.eval_finite(zeta);
            let u1 = Complex64::i() * zeta * p1;
            let u2 = -zeta * zeta * d2.eval_finite(zeta) - zeta * p1;
            let f1 = 2.0 * (u.conj() * u1).re;
            let f2 = 2.0 * u1.norm_sqr() + 2.0 * (u.conj() * u2).re;
            if !(f2 < 0.0) {
                break;
            }
            let next = (theta - f1 / f2).clamp(theta0 - h, theta0 + h);
            let moved = (next - theta).abs();
            theta = next;
            if moved < 1e-15 {
                break;
            }
        }
        let zeta = Complex64::from_polar(1.0, theta);
        if phi.eval_finite(zeta).norm() >= 1.0 - tol::CONTACT_TOL
            && points.iter().all(|p| (p - zeta).norm() > tol::CONTACT_TOL)
        {
            points.push(zeta);
        }
    }
    Ok(BoundaryContacts::Points { count: points.len(), points })
}

/// Branches of `φₑ⁻¹` transported around the circle `|z| = radius` close to
/// the boundary, and the same branches pushed radially out to `|z| = 1`.
///
/// `inner[k].points[j]` and `boundary[k].points[j]` belong to branch `j`.
#[derive(Debug, Clone)]
pub struct BranchAtlas {
    pub radius: f64,
    pub inner: Vec<PreimageFiber>,
    pub boundary: Vec<PreimageFiber>,
    /// False where the radial push failed and `boundary[k]` repeats `inner[k]`.
    pub on_circle: Vec<bool>,
    /// Branch `j` returns as branch `permutation[j]` after one turn.
    pub permutation: Vec<usize>,
    /// Smallest distance between two branches over the inner circle.
    pub min_separation: f64,
}

impl BranchAtlas {
    /// Tries `1 - ATLAS_EPS` first and a few nearby radii if that circle meets
    /// a critical value.
    pub fn build(phi_e: &RationalMap, grid: usize) -> Result<Self> {
        let mut last = Error::DegreeZero;
        for scale in [1.0, 1.37, 0.71, 1.93] {
            match Self::on_radius(phi_e, 1.0 - tol::ATLAS_EPS * scale, grid) {
                Ok(atlas) => return Ok(atlas),
                Err(e @ (Error::PathThroughCriticalValue { .. } | Error::MatchingAmbiguity { .. })) => last = e,
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }

    fn on_radius(phi_e: &RationalMap, radius: f64, grid: usize) -> Result<Self> {
        let grid = grid.max(8);
        let node = |k: usize| Complex64::from_polar(radius, TAU * k as f64 / grid as f64);
        let start = fiber_of(phi_e, node(0)).map_err(|e| match e {
            Error::NotRegularValue { .. } => Error::PathThroughCriticalValue { at: node(0) },
            other => other,
        })?;
        let mut inner = Vec::with_capacity(grid);
        inner.push(start);
        for k in 1..grid {
            let next = continue_branch(phi_e, &inner[k - 1], &[node(k)])?;
            inner.push(next);
        }
        let closed = continue_branch(phi_e, &inner[grid - 1], &[node(0)])?;
        let permutation = closed
            .points
            .iter()
            .map(|&w| nearest(&inner[0].points, w))
            .collect();
        let mut boundary = Vec::with_capacity(grid);
        let mut on_circle = Vec::with_capacity(grid);
        for (k, fiber) in inner.iter().enumerate() {
            let target = node(k) / radius;
            match continue_branch(phi_e, fiber, &[target]) {
                Ok(f) => {
                    boundary.push(f);
                    on_circle.push(true);
                }
                Err(_) => {
                    boundary.push(fiber.clone());
                    on_circle.push(false);
                }
            }
        }
        let min_separation = inner.iter().map(|f| f.margin).fold(f64::INFINITY, f64::min);
        Ok(Self {
            radius,
            inner,
            boundary,
            on_circle,
            permutation,
            min_separation,
        })
    }

    pub fn grid(&self) -> usize {
        self.inner.len()
    }

    pub fn branch_count(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_single_valued(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn max_modulus(&self) -> f64 {
        self.boundary
            .iter()
            .flat_map(|f| f.points.iter().map(|w| w.norm()))
            .fold(0.0, f64::max)
    }

    /// Net turns of branch `j` around the origin along the boundary samples.
    pub fn winding(&self, j: usize) -> Option<i64> {
        if !self.is_single_valued() {
            return None;
        }
        let n = self.grid();
        let mut total = 0.0;
        for k in 0..n {
            let a = self.boundary[k].points[j];
            let b = self.boundary[(k + 1) % n].points[j];
            if a.norm() == 0.0 || b.norm() == 0.0 {
                return None;
            }
            total += (b / a).arg();
        }
        Some((total / TAU).round() as i64)
    }
}

fn nearest(points: &[Complex64], w: Complex64) -> usize {
    (0..points.len())
        .min_by(|&a, &b| (points[a] - w).norm().total_cmp(&(points[b] - w).norm()))
        .unwrap_or(0)
}

/// Branch `j` near boundary node `node`, re-solved at `e^{iθ}`.
/// Returns `(z, σ_j(z), φₑ'(σ_j(z)))`.
fn branch_at(
    phi_e: &RationalMap,
    node: &PreimageFiber,
    j: usize,
    theta: f64,
) -> Option<(Complex64, Complex64, Complex64)> {
    let z = Complex64::from_polar(1.0, theta);
    let (points, derivs, _) = raw_fiber(phi_e, z, Some(&node.points)).ok()?;
    let i = nearest(&points, node.points[j]);
    Some((z, points[i], derivs[i]))
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
fn golden_max(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = fc.max(fd);
    for _ in 0..60 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
        if b - a < 1e-15 {
            break;
        }
    }
    best
}

/// Boundary sup (or, with `sign = -1`, inf) of a quantity built from
/// `(z, σ_j, φₑ'(σ_j))`: grid extremum plus a golden-section polish.
fn boundary_extremum(
    phi_e: &RationalMap,
    atlas: &BranchAtlas,
    j: usize,
    sign: f64,
    q: impl Fn(Complex64, Complex64, Complex64) -> f64,
) -> f64 {
    let n = atlas.grid();
    let values: Vec<f64> = atlas
        .boundary
        .iter()
        .map(|f| sign * q(f.z, f.points[j], f.derivs[j]))
        .collect();
    let (k, &grid_best) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("atlas has nodes");
    let mut best = grid_best;
    if atlas.on_circle[k] && best.is_finite() {
        let h = TAU / n as f64;
        let theta = atlas.boundary[k].z.arg();
        let polished = golden_max(theta - h, theta + h, |t| {
            branch_at(phi_e, &atlas.boundary[k], j, t)
                .map(|(z, s, dv)| sign * q(z, s, dv))
                .filter(|v| !v.is_nan())
                .unwrap_or(f64::NEG_INFINITY)
        });
        best = best.max(polished);
    }
    sign * best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionForm {
    /// `Λ₀ + Σ M_{h_j} C_{σ_j} B`
    BsForm,
    /// `Λ_∞ + Σ M_{g_j} C_{σ_j}`
    WeightedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaTerm {
    /// `f(0)/(1 - conj(φ(0)) z)`
    LambdaZero,
    /// `f(0)/(1 - conj(φ(∞)) z)`, the zero operator when `φ(∞) = ∞`
    LambdaInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaDescriptor {
    pub term: LambdaTerm,
    pub kernel_point: LocatedPoint,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSummary {
    pub label: usize,
    pub sup_sigma: f64,
    pub min_sigma: f64,
    pub sup_h: f64,
    pub sup_g: f64,
    pub winding: Option<i64>,
    pub h_bounded: bool,
    pub g_bounded: bool,
    /// `sup |σ_j| < 1 - COMPACT_MARGIN`.
    pub composition_compact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summand {
    pub label: usize,
    pub sup_sigma: f64,
    /// `"h"` or `"g"`.
    pub weight: &'static str,
    pub sup_weight: f64,
    pub weight_bounded: bool,
    pub composition_compact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub form: DecompositionForm,
    pub class: RegularityClass,
    pub lambda: LambdaDescriptor,
    pub summands: Vec<Summand>,
    pub single_valued: bool,
    pub monodromy: String,
    pub atlas_radius: f64,
    pub grid: usize,
    pub boundary_fallbacks: usize,
    pub min_branch_separation: f64,
    /// The verdict of the classifier for this form.
    pub legitimate: bool,
    /// Whether the atlas estimates find every factor bounded.
    pub factors_bounded: bool,
    pub non_compact: Vec<usize>,
    /// Present when a single boundary contact leaves exactly one non-compact
    /// summand in a legitimate decomposition.
    pub compact_perturbation: Option<String>,
}

/// Classification, atlas and per-branch estimates, shared by both forms.
#[derive(Debug, Clone)]
pub struct BranchAnalysis {
    pub regularity: RegularityReport,
    pub atlas: BranchAtlas,
    pub branches: Vec<BranchSummary>,
    /// No critical value of `φₑ` in the closed disc.
    pub exterior_regular_on_disc: bool,
    at_zero: Complex64,
    at_infinity: ExtPoint,
}

impl BranchAnalysis {
    pub fn new(map: &CertifiedMap) -> Result<Self> {
        let regularity = classify(map)?;
        let phi_e = map.exterior();
        let atlas = BranchAtlas::build(phi_e, tol::BOUNDARY_GRID)?;
        let exterior_regular_on_disc = phi_e
            .critical_data()?
            .value_points()
            .all(|v| v.modulus() > 1.0 + tol::CLASS_MARGIN);
        let single = atlas.is_single_valued();
        // φₑ(0) = 0 exactly when φ(∞) = ∞; a zero of σ_j at the origin cancels in g_j
        let zero_at_origin = map.at_infinity().is_infinite();
        let mut branches = Vec::with_capacity(atlas.branch_count());
        for j in 0..atlas.branch_count() {
            let sup_sigma = boundary_extremum(phi_e, &atlas, j, 1.0, |_, s, _| s.norm());
            let min_sigma = boundary_extremum(phi_e, &atlas, j, -1.0, |_, s, _| s.norm());
            let sup_h = boundary_extremum(phi_e, &atlas, j, 1.0, |z, _, dv| (z / dv).norm());
            let sup_g = boundary_extremum(phi_e, &atlas, j, 1.0, |z, s, dv| (z / (dv * s)).norm());
            let winding = atlas.winding(j);
            let h_bounded = single && exterior_regular_on_disc && sup_h.is_finite();
            let g_bounded = h_bounded
                && sup_g.is_finite()
                && (zero_at_origin || (winding == Some(0) && min_sigma > tol::WEIGHT_FLOOR));
            branches.push(BranchSummary {
                label: j,
                sup_sigma,
                min_sigma,
                sup_h,
                sup_g,
                winding,
                h_bounded,
                g_bounded,
                composition_compact: sup_sigma < 1.0 - tol::COMPACT_MARGIN,
            });
        }
        Ok(Self {
            regularity,
            atlas,
            branches,
            exterior_regular_on_disc,
            at_zero: map.at_zero(),
            at_infinity: map.at_infinity(),
        })
    }

    pub fn report(&self, form: DecompositionForm) -> DecompositionReport {
        let class = self.regularity.class;
        let (lambda, legitimate) = match form {
            DecompositionForm::BsForm => (
                LambdaDescriptor {
                    term: LambdaTerm::LambdaZero,
                    kernel_point: LocatedPoint::new(ExtPoint::Finite(self.at_zero)),
                    bounded: self.at_zero.norm() < 1.0,
                },
                class.is_outer_regular(),
            ),
            DecompositionForm::WeightedForm => {
                let point = LocatedPoint::new(self.at_infinity);
                let bounded = matches!(point.location, Location::InDisc | Location::Infinity);
                (
                    LambdaDescriptor {
                        term: LambdaTerm::LambdaInfinity,
                        kernel_point: point,
                        bounded,
                    },
                    class.is_strongly_outer_regular(),
                )
            }
        };
        let summands: Vec<Summand> = self
            .branches
            .iter()
            .map(|b| {
                let (weight, sup_weight, weight_bounded) = match form {
                    DecompositionForm::BsForm => ("h", b.sup_h, b.h_bounded),
                    DecompositionForm::WeightedForm => ("g", b.sup_g, b.g_bounded),
                };
                Summand {
                    label: b.label,
                    sup_sigma: b.sup_sigma,
                    weight,
                    sup_weight,
                    weight_bounded,
                    composition_compact: b.composition_compact,
                }
            })
            .collect();
        let factors_bounded = lambda.bounded && summands.iter().all(|s| s.weight_bounded);
        let non_compact: Vec<usize> = summands
            .iter()
            .filter(|s| !s.composition_compact)
            .map(|s| s.label)
            .collect();
        let compact_perturbation = match (&non_compact[..], self.regularity.boundary_contacts.count()) {
            ([j], Some(1)) if legitimate => Some(match form {
                DecompositionForm::BsForm => {
                    format!("C_phi^* = K + M_h{j} C_sigma{j} B with K compact")
                }
                DecompositionForm::WeightedForm => {
                    format!("C_phi^* = K + M_g{j} C_sigma{j} with K compact")
                }
            }),
            _ => None,
        };
        DecompositionReport {
            form,
            class,
            lambda,
            summands,
            single_valued: self.atlas.is_single_valued(),
            monodromy: cycle_notation(&self.atlas.permutation),
            atlas_radius: self.atlas.radius,
            grid: self.atlas.grid(),
            boundary_fallbacks: self.atlas.on_circle.iter().filter(|&&b| !b).count(),
            min_branch_separation: self.atlas.min_separation,
            legitimate,
            factors_bounded,
            non_compact,
            compact_perturbation,
        }
    }
}

pub fn decomposition_report(map: &CertifiedMap, form: DecompositionForm) -> Result<DecompositionReport> {
    Ok(BranchAnalysis::new(map)?.report(form))
}

/// `ω Π (a_j - z)/(1 - conj(a_j) z)`.
pub fn blaschke_product(omega: Complex64, zeros: &[Complex64]) -> Result<RationalMap> {
    let one = Complex64::new(1.0, 0.0);
    let mut num = ComplexPoly::constant(omega);
    let mut den = ComplexPoly::one();
    for &a in zeros {
        num = &num * &ComplexPoly::new(vec![a, -one]);
        den = &den * &ComplexPoly::new(vec![one, -a.conj()]);
    }
    RationalMap::new(num, den)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeTrial {
    pub omega: Complex64,
    pub zeros: Vec<Complex64>,
    pub class: RegularityClass,
    /// Critical value of largest modulus.
    pub extreme_critical_value: Option<CriticalValueEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeCheck {
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<BlaschkeTrial>,
}

impl BlaschkeCheck {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.trials
    }
}

/// Classifies random Blaschke products of degree 2 to 5 (zeros uniform in
/// `|a| < 0.9`, unimodular `ω`) and collects those not found to be
/// `NotOuterRegular`.
pub fn blaschke_never_outer_regular_check(seed: u64, trials: usize) -> Result<BlaschkeCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failures = Vec::new();
    for _ in 0..trials {
        let degree = rng.gen_range(2..=5);
        let zeros: Vec<Complex64> = (0..degree)
            .map(|_| Complex64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)))
            .collect();
        let omega = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        let map = CertifiedMap::new(blaschke_product(omega, &zeros)?)?;
        let report = classify(&map)?;
        if report.class == RegularityClass::NotOuterRegular {
            passed += 1;
        } else {
            let extreme_critical_value = report
                .critical_values()
                .max_by(|a, b| {
                    a.modulus
                        .unwrap_or(f64::INFINITY)
                        .total_cmp(&b.modulus.unwrap_or(f64::INFINITY))
                })
                .cloned();
            failures.push(BlaschkeTrial {
                omega,
                zeros,
                class: report.class,
                extreme_critical_value,
            });
        }
    }
    Ok(BlaschkeCheck { seed, trials, passed, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn certified(num: &[f64], den: &[f64]) -> CertifiedMap {
        CertifiedMap::new(RationalMap::new(ComplexPoly::from_real(num), ComplexPoly::from_real(den)).unwrap()).unwrap()
    }

    fn ex41() -> CertifiedMap {
        certified(&[1.0], &[3.0, -1.0, -1.0])
    }

    fn ex42() -> CertifiedMap {
        certified(&[0.0, 0.0, 1.0], &[3.0, -1.0, -1.0])
    }

    fn bl26() -> CertifiedMap {
        certified(&[0.0, 1.0, -2.0], &[2.0, -1.0])
    }

    fn has_value(entries: &[CriticalValueEntry], v: Complex64, tol: f64) -> bool {
        entries.iter().any(|e| e.value.finite().is_some_and(|w| (w - v).norm() < tol))
    }

    #[test]
    fn classification_of_named_examples() {
        let r = classify(&ex41()).unwrap();
        assert_eq!(r.class, RegularityClass::StronglyOuterRegular);
        assert!(has_value(&r.critical_values_inside, c(0.0, 0.0), 1e-10));
        assert!(has_value(&r.critical_values_inside, c(4.0 / 13.0, 0.0), 1e-10));
        assert_eq!(r.phi_at_infinity.location, Location::InDisc);
        assert!(!r.is_blaschke);

        let r = classify(&ex42()).unwrap();
        assert_eq!(r.class, RegularityClass::OuterRegular);
        assert_eq!(r.phi_at_infinity.location, Location::OnCircle);
        assert!(has_value(&r.critical_values_inside, c(-12.0 / 13.0, 0.0), 1e-10));

        let r = classify(&bl26()).unwrap();
        assert_eq!(r.class, RegularityClass::NotOuterRegular);
        assert!(r.is_blaschke);
        assert!(has_value(&r.critical_values_outside_or_boundary, c(7.0 + 4.0 * 3f64.sqrt(), 0.0), 1e-9));
        assert_eq!(r.boundary_contacts, BoundaryContacts::AllOfBoundary);
    }

    #[test]
    fn polynomial_has_critical_value_at_infinity() {
        let sq = CertifiedMap::new(RationalMap::monomial(c(1.0, 0.0), 2)).unwrap();
        let r = classify(&sq).unwrap();
        assert_eq!(r.class, RegularityClass::NotOuterRegular);
        assert!(r
            .critical_values_outside_or_boundary
            .iter()
            .any(|e| e.location == Location::Infinity));
        assert!(r.is_blaschke);
    }

    #[test]
    fn blaschke_detection() {
        assert!(is_finite_blaschke(&RationalMap::monomial(c(1.0, 0.0), 2)));
        assert!(is_finite_blaschke(bl26().phi()));
        assert!(!is_finite_blaschke(ex41().phi()));
        assert!(!is_finite_blaschke(&RationalMap::monomial(c(0.5, 0.0), 1)));
        let b = blaschke_product(c(0.0, 1.0), &[c(0.3, 0.2), c(-0.5, 0.1), c(0.0, 0.0)]).unwrap();
        assert!(is_finite_blaschke(&b));
    }

    #[test]
    fn contacts() {
        let r = boundary_contacts(ex41().phi()).unwrap();
        assert_eq!(r.count(), Some(1));
        assert!((r.points()[0] - c(1.0, 0.0)).norm() < 1e-12);
        let d3 = RationalMap::new(ComplexPoly::one(), ComplexPoly::from_real(&[4.0, -1.0, -1.0, -1.0])).unwrap();
        let r = boundary_contacts(&d3).unwrap();
        assert_eq!(r.count(), Some(1));
        assert!((r.points()[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(boundary_contacts(&RationalMap::monomial(c(0.5, 0.0), 1)).unwrap().count(), Some(0));
    }

    #[test]
    fn off_grid_contact_is_polished() {
        // rotate the contact of 1/(3 - z - z²) away from the grid
        let t = 0.123_456_789f64;
        let u = Complex64::from_polar(1.0, -t);
        let den = ComplexPoly::new(vec![c(3.0, 0.0), -u, -u * u]);
        let phi = RationalMap::new(ComplexPoly::one(), den).unwrap();
        let r = boundary_contacts(&phi).unwrap();
        assert_eq!(r.count(), Some(1));
        assert!((r.points()[0] - Complex64::from_polar(1.0, t)).norm() < 1e-9);
    }

    #[test]
    fn weighted_decomposition_of_strong_example() {
        let a = BranchAnalysis::new(&ex41()).unwrap();
        let rep = a.report(DecompositionForm::WeightedForm);
        assert!(rep.legitimate);
        assert!(rep.factors_bounded);
        assert!(rep.single_valued);
        assert_eq!(rep.non_compact.len(), 1);
        let j = rep.non_compact[0];
        assert!((rep.summands[j].sup_sigma - 1.0).abs() < 1e-9);
        assert!(rep.compact_perturbation.is_some());
        assert!(rep.min_branch_separation > tol::CLUSTER_TOL);
        assert!(a.atlas.max_modulus() <= 1.0 + 1e-6);
    }

    #[test]
    fn sq_over_quad_forms_differ() {
        let a = BranchAnalysis::new(&ex42()).unwrap();
        let bs = a.report(DecompositionForm::BsForm);
        let w = a.report(DecompositionForm::WeightedForm);
        assert!(bs.legitimate && bs.factors_bounded);
        assert!(!w.legitimate && !w.factors_bounded);
        assert!(!w.lambda.bounded);
        assert!(w.summands.iter().any(|s| !s.weight_bounded && s.sup_weight > 1e6));
    }

    #[test]
    fn blaschke_decompositions_are_not_legitimate() {
        for m in [bl26(), CertifiedMap::new(RationalMap::monomial(c(1.0, 0.0), 2)).unwrap()] {
            let a = BranchAnalysis::new(&m).unwrap();
            for form in [DecompositionForm::BsForm, DecompositionForm::WeightedForm] {
                let rep = a.report(form);
                assert!(!rep.legitimate);
                assert!(!rep.factors_bounded);
            }
            assert_eq!(a.report(DecompositionForm::BsForm).monodromy, "(0 1)");
        }
    }

    #[test]
    fn random_blaschke_products_are_never_outer_regular() {
        let check = blaschke_never_outer_regular_check(7, 20).unwrap();
        assert!(check.all_passed(), "{:?}", check.failures);
    }

    #[test]
    fn degree_one_maps() {
        let half = CertifiedMap::new(RationalMap::monomial(c(0.5, 0.0), 1)).unwrap();
        let r = classify(&half).unwrap();
        assert_eq!(r.class, RegularityClass::OuterRegular);
        let a = BranchAnalysis::new(&half).unwrap();
        assert!(a.branches[0].composition_compact);
        assert!((a.branches[0].sup_sigma - 0.5).abs() < 1e-12);
    }
}
