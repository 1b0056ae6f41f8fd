//! Rational functions as maps of the Riemann sphere.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cluster_indices, gcd_approx, ComplexPoly};
use crate::tol;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }

    /// Modulus, `+inf` at the point at infinity.
    pub fn modulus(self) -> f64 {
        match self {
            ExtPoint::Finite(z) => z.norm(),
            ExtPoint::Infinity => f64::INFINITY,
        }
    }

    /// Inversion in the unit circle, `z -> 1/conj(z)`.
    pub fn reflect(self) -> ExtPoint {
        match self {
            ExtPoint::Infinity => ExtPoint::Finite(Complex64::new(0.0, 0.0)),
            ExtPoint::Finite(z) if z.norm() == 0.0 => ExtPoint::Infinity,
            ExtPoint::Finite(z) => ExtPoint::Finite(z.conj().inv()),
        }
    }

    /// Chordal distance on the Riemann sphere (diameter one).
    pub fn chordal(self, other: ExtPoint) -> f64 {
        match (self, other) {
            (ExtPoint::Infinity, ExtPoint::Infinity) => 0.0,
            (ExtPoint::Finite(a), ExtPoint::Infinity) | (ExtPoint::Infinity, ExtPoint::Finite(a)) => {
                1.0 / (1.0 + a.norm_sqr()).sqrt()
            }
            (ExtPoint::Finite(a), ExtPoint::Finite(b)) => {
                (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex64> for ExtPoint {
    fn from(z: Complex64) -> Self {
        ExtPoint::Finite(z)
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::Finite(z) => write!(f, "{z}"),
            ExtPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtPoint::Finite(z) => z.serialize(s),
            ExtPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair(Complex64),
            Name(String),
        }
        match Repr::deserialize(d)? {
            Repr::Pair(z) => Ok(ExtPoint::Finite(z)),
            Repr::Name(s) if s == "inf" => Ok(ExtPoint::Infinity),
            Repr::Name(s) => Err(de::Error::custom(format!("expected [re, im] or \"inf\", got {s:?}"))),
        }
    }
}

/// Reduced quotient `num / den` with monic denominator.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct RationalMap {
    num: ComplexPoly,
    den: ComplexPoly,
    degree: usize,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    num: ComplexPoly,
    den: ComplexPoly,
}

impl TryFrom<MapRepr> for RationalMap {
    type Error = Error;
    fn try_from(r: MapRepr) -> Result<Self> {
        RationalMap::new(r.num, r.den)
    }
}

impl From<RationalMap> for MapRepr {
    fn from(m: RationalMap) -> Self {
        MapRepr { num: m.num, den: m.den }
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] / [{:?}]", self.num, self.den)
    }
}

/// Fiber of a rational map over a point, counted with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fiber {
    pub points: Vec<ExtPoint>,
}

impl Fiber {
    /// Smallest chordal distance between two fiber points; `1.0` for a single point.
    pub fn min_separation(&self) -> f64 {
        let mut best: f64 = 1.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[..i] {
                best = best.min(a.chordal(*b));
            }
        }
        best
    }

    /// Groups of coincident points (chordal distance below the cluster tolerance).
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        cluster_indices(&self.points, |a, b| a.chordal(b) < tol::CLUSTER_TOL)
    }

    pub fn finite_points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.points.iter().filter_map(|p| p.finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityTest {
    pub regular: bool,
    /// Minimum pairwise chordal distance in the fiber.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub point: ExtPoint,
    pub value: ExtPoint,
    /// Local degree minus one.
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValue {
    pub value: ExtPoint,
    pub witnesses: Vec<ExtPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalData {
    pub points: Vec<CriticalPoint>,
    pub values: Vec<CriticalValue>,
}

impl CriticalData {
    pub fn value_points(&self) -> impl Iterator<Item = ExtPoint> + '_ {
        self.values.iter().map(|v| v.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfMapCheck {
    pub is_self_map: bool,
    pub max_boundary_modulus: f64,
    pub poles_in_closed_disc: Vec<Complex64>,
    pub grid: usize,
    pub reason: Option<String>,
}

impl RationalMap {
    /// Reduces `num / den` by their approximate GCD and makes `den` monic.
    pub fn new(num: ComplexPoly, den: ComplexPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = gcd_approx(&num, &den)?;
        let (num, den) = if g.degree_or_zero() == 0 {
            (num, den)
        } else {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        };
        let lead = den.leading();
        let (num, den) = if lead == Complex64::new(1.0, 0.0) {
            (num, den)
        } else {
            (num.scaled(lead.inv()), den.monic())
        };
        let degree = num.degree_or_zero().max(den.degree_or_zero());
        Ok(Self { num, den, degree })
    }

    /// `c z^n`.
    pub fn monomial(c: Complex64, n: usize) -> Self {
        Self::new(ComplexPoly::monomial(c, n), ComplexPoly::one()).expect("monomial is reduced")
    }

    pub fn num(&self) -> &ComplexPoly {
        &self.num
    }

    pub fn den(&self) -> &ComplexPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Value at a finite point; `Infinity` at poles.
    pub fn eval(&self, w: Complex64) -> Result<ExtPoint> {
        let n = self.num.eval(w);
        let d = self.den.eval(w);
        let den_floor = tol::NORMALIZATION_FLOOR * self.den.abs_eval(w);
        if d.norm() <= den_floor {
            let num_floor = tol::NORMALIZATION_FLOOR * self.num.abs_eval(w);
            if n.norm() <= num_floor {
                return Err(Error::IndeterminateValue { at: w });
            }
            return Ok(ExtPoint::Infinity);
        }
        Ok(ExtPoint::Finite(n / d))
    }

    /// Plain complex quotient with no pole handling.
    pub fn eval_finite(&self, w: Complex64) -> Complex64 {
        self.num.eval(w) / self.den.eval(w)
    }

    pub fn eval_ext(&self, w: ExtPoint) -> Result<ExtPoint> {
        match w {
            ExtPoint::Finite(w) => self.eval(w),
            ExtPoint::Infinity => Ok(self.at_infinity()),
        }
    }

    /// Value at infinity from the leading terms.
    pub fn at_infinity(&self) -> ExtPoint {
        let dn = self.num.degree_or_zero();
        let dd = self.den.degree_or_zero();
        if self.num.is_zero() || dn < dd {
            ExtPoint::Finite(Complex64::new(0.0, 0.0))
        } else if dn > dd {
            ExtPoint::Infinity
        } else {
            ExtPoint::Finite(self.num.leading() / self.den.leading())
        }
    }

    /// `rho o R o rho` with `rho(z) = 1/conj(z)`, built from reversed
    /// conjugated coefficients.
    pub fn exterior(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let d = self.degree;
        Self::new(self.den.conj().reversed(d), self.num.conj().reversed(d))
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> Self {
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(top, &self.den * &self.den).expect("denominator squared is nonzero")
    }

    /// `R'(w)` at a finite point by the quotient rule.
    pub fn eval_derivative(&self, w: Complex64) -> Complex64 {
        let n = self.num.eval(w);
        let d = self.den.eval(w);
        let dn = self.num.derivative().eval(w);
        let dd = self.den.derivative().eval(w);
        (dn * d - n * dd) / (d * d)
    }

    /// Preimage of `z` with multiplicity; always `degree` points.
    pub fn fiber(&self, z: ExtPoint) -> Result<Fiber> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        let target = match z {
            ExtPoint::Finite(z) => &self.num - &self.den.scaled(z),
            ExtPoint::Infinity => self.den.clone(),
        };
        let k = match target.degree() {
            Some(k) => k,
            None => return Err(Error::DegreeZero),
        };
        let mut points: Vec<ExtPoint> = if k >= 1 {
            target.roots()?.roots.into_iter().map(ExtPoint::Finite).collect()
        } else {
            Vec::new()
        };
        points.extend(std::iter::repeat(ExtPoint::Infinity).take(self.degree - k));
        Ok(Fiber { points })
    }

    pub fn is_regular_value(&self, z: ExtPoint) -> Result<RegularityTest> {
        let fiber = self.fiber(z)?;
        let margin = fiber.min_separation();
        let mut regular = margin > tol::CLUSTER_TOL;
        if regular && !z.is_infinite() {
            regular = fiber
                .finite_points()
                .all(|w| self.eval_derivative(w).norm() > tol::DERIVATIVE_FLOOR);
        }
        Ok(RegularityTest { regular, margin })
    }

    /// Multiplicity of infinity in the fiber over `R(inf)`.
    fn infinity_multiplicity(&self) -> usize {
        let dn = self.num.degree_or_zero();
        let dd = self.den.degree_or_zero();
        if dn > dd {
            return dn - dd;
        }
        let c = match self.at_infinity() {
            ExtPoint::Finite(c) => c,
            ExtPoint::Infinity => unreachable!(),
        };
        let mut coeffs: Vec<Complex64> = (0..=self.degree)
            .map(|k| self.num.coeff(k) - c * self.den.coeff(k))
            .collect();
        if dn == dd {
            // cancels by construction of c
            coeffs[self.degree] = Complex64::new(0.0, 0.0);
        }
        let scale = self.num.scale().max(c.norm() * self.den.scale());
        let floor = tol::NORMALIZATION_FLOOR * scale;
        let k = coeffs.iter().rposition(|a| a.norm() > floor).unwrap_or(0);
        self.degree - k
    }

    pub fn critical_data(&self) -> Result<CriticalData> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        let wronskian = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let mut points = Vec::new();
        if wronskian.degree_or_zero() >= 1 {
            for (w, order) in wronskian.roots()?.distinct() {
                points.push(CriticalPoint {
                    point: ExtPoint::Finite(w),
                    value: self.eval(w)?,
                    order,
                });
            }
        }
        let at_inf = self.infinity_multiplicity();
        if at_inf >= 2 {
            points.push(CriticalPoint {
                point: ExtPoint::Infinity,
                value: self.at_infinity(),
                order: at_inf - 1,
            });
        }
        let mut values: Vec<CriticalValue> = Vec::new();
        for cp in &points {
            match values
                .iter_mut()
                .find(|v| v.value.chordal(cp.value) < tol::CLUSTER_TOL)
            {
                Some(v) => v.witnesses.push(cp.point),
                None => values.push(CriticalValue {
                    value: cp.value,
                    witnesses: vec![cp.point],
                }),
            }
        }
        Ok(CriticalData { points, values })
    }

    /// Certifies that the map sends the open unit disc into itself: no poles in
    /// the closed disc and `|R| <= 1` on a boundary grid.
    pub fn self_map_check(&self) -> Result<SelfMapCheck> {
        let grid = tol::SELF_MAP_GRID;
        let poles_in_closed_disc: Vec<Complex64> = if self.den.degree_or_zero() >= 1 {
            self.den
                .roots()?
                .roots
                .into_iter()
                .filter(|r| r.norm() <= 1.0 + tol::CLUSTER_TOL)
                .collect()
        } else {
            Vec::new()
        };
        let max_boundary_modulus = if poles_in_closed_disc.is_empty() {
            (0..grid)
                .map(|k| {
                    let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / grid as f64);
                    self.eval_finite(zeta).norm()
                })
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        let reason = if !poles_in_closed_disc.is_empty() {
            Some(format!("{} pole(s) in the closed unit disc", poles_in_closed_disc.len()))
        } else if self.degree == 0 && max_boundary_modulus >= 1.0 {
            Some(format!("constant of modulus {max_boundary_modulus}"))
        } else if max_boundary_modulus > 1.0 + tol::BOUNDARY_TOL {
            Some(format!("boundary modulus reaches {max_boundary_modulus}"))
        } else {
            None
        };
        Ok(SelfMapCheck {
            is_self_map: reason.is_none(),
            max_boundary_modulus: if max_boundary_modulus.is_finite() { max_boundary_modulus } else { f64::MAX },
            poles_in_closed_disc,
            grid,
            reason,
        })
    }

    pub fn is_self_map_of_disc(&self) -> Result<bool> {
        Ok(self.self_map_check()?.is_self_map)
    }
}
