//! Finite Maclaurin expansions viewed as elements of H².
//!
//! The inner product is the coefficient dot product, so every polynomial `f`
//! is an honest H² element and `⟨f, K_z⟩ = f(z)` holds exactly once the
//! kernel is truncated at the degree of `f`.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::rational::RationalMap;
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Polynomial element of H²; `coeffs[n]` is the n-th Maclaurin coefficient.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HardyPoly {
    coeffs: Vec<Complex64>,
}

impl HardyPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Length of the coefficient vector minus one; zero for the empty vector.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `f(0)`, the zeroth coefficient.
    pub fn at_zero(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * a).collect())
    }

    /// `(f(z) - f(0)) / z`: drops the constant term and shifts down.
    pub fn backward_shift(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// Multiplication by `z`.
    pub fn forward_shift(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::default();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Drops the constant term, giving `f - f(0)`.
    pub fn without_constant(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if let Some(c) = coeffs.first_mut() {
            *c = ZERO;
        }
        Self::new(coeffs)
    }

    pub fn to_poly(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.clone())
    }
}

impl From<&ComplexPoly> for HardyPoly {
    fn from(p: &ComplexPoly) -> Self {
        Self::new(p.coeffs().to_vec())
    }
}

impl Add for &HardyPoly {
    type Output = HardyPoly;
    fn add(self, rhs: &HardyPoly) -> HardyPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        HardyPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &HardyPoly {
    type Output = HardyPoly;
    fn sub(self, rhs: &HardyPoly) -> HardyPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        HardyPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

/// `⟨f, g⟩ = Σ f̂(n) conj(ĝ(n))`.
pub fn inner_product(f: &HardyPoly, g: &HardyPoly) -> Complex64 {
    f.coeffs
        .iter()
        .zip(&g.coeffs)
        .map(|(a, b)| a * b.conj())
        .sum()
}

/// First `n + 1` coefficients of the reproducing kernel `K_z(w) = 1/(1 - conj(z) w)`.
pub fn kernel_coeffs(z: Complex64, n: usize) -> Result<HardyPoly> {
    if !(z.norm() < 1.0) {
        return Err(Error::DomainViolation { at: z });
    }
    let zc = z.conj();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        coeffs.push(power);
        power *= zc;
    }
    Ok(HardyPoly::new(coeffs))
}

/// Maclaurin coefficients of `a / b` through order `n` by power-series division.
fn series_quotient(a: &ComplexPoly, b: &ComplexPoly, n: usize) -> Result<Vec<Complex64>> {
    let b0 = b.coeff(0);
    if b0.norm() <= tol::NORMALIZATION_FLOOR * b.scale() || b.is_zero() {
        return Err(Error::PoleAtOrigin);
    }
    let db = b.degree_or_zero();
    let mut c: Vec<Complex64> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = a.coeff(k);
        for j in 1..=k.min(db) {
            acc -= b.coeff(j) * c[k - j];
        }
        c.push(acc / b0);
    }
    Ok(c)
}

/// First `n + 1` Maclaurin coefficients of a rational function analytic at 0.
pub fn taylor_of_rational(r: &RationalMap, n: usize) -> Result<HardyPoly> {
    Ok(HardyPoly::new(series_quotient(r.num(), r.den(), n)?))
}

/// `C_φ* f(z) = ⟨f, C_φ K_z⟩` computed from the Taylor coefficients of
/// `w -> 1/(1 - conj(z) φ(w))`.
///
/// Exact up to rounding for polynomial `f`: only the coefficients through
/// `deg f` enter the inner product. This path never touches fibers or
/// branches and serves as the reference for every branch formula.
pub fn adjoint_oracle(phi: &RationalMap, f: &HardyPoly, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::DomainViolation { at: z });
    }
    let den = phi.den();
    let shifted = den - &phi.num().scaled(z.conj());
    let kernel = series_quotient(den, &shifted, f.degree())?;
    Ok(f.coeffs
        .iter()
        .zip(&kernel)
        .map(|(a, k)| a * k.conj())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn map(num: &[f64], den: &[f64]) -> RationalMap {
        RationalMap::new(ComplexPoly::from_real(num), ComplexPoly::from_real(den)).unwrap()
    }

    #[test]
    fn monomials_are_orthonormal() {
        for n in 0..5 {
            for m in 0..5 {
                let zn = HardyPoly::new((0..=n).map(|k| if k == n { c(1.0, 0.0) } else { ZERO }).collect());
                let zm = HardyPoly::new((0..=m).map(|k| if k == m { c(1.0, 0.0) } else { ZERO }).collect());
                let expected = if n == m { 1.0 } else { 0.0 };
                assert_eq!(inner_product(&zn, &zm), c(expected, 0.0));
            }
        }
    }

    #[test]
    fn kernel_coefficients() {
        let k0 = kernel_coeffs(ZERO, 3).unwrap();
        assert_eq!(k0, HardyPoly::from_real(&[1.0, 0.0, 0.0, 0.0]));
        let k = kernel_coeffs(c(0.5, 0.0), 3).unwrap();
        assert_eq!(k, HardyPoly::from_real(&[1.0, 0.5, 0.25, 0.125]));
        assert!(matches!(kernel_coeffs(c(1.0, 0.0), 3), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn shifts() {
        assert_eq!(HardyPoly::from_real(&[1.0]).backward_shift().coeffs().len(), 0);
        assert_eq!(
            HardyPoly::from_real(&[0.0, 2.0, 0.0, 1.0]).backward_shift(),
            HardyPoly::from_real(&[2.0, 0.0, 1.0])
        );
        let f = HardyPoly::from_real(&[1.0, 2.0]);
        assert_eq!(f.forward_shift(), HardyPoly::from_real(&[0.0, 1.0, 2.0]));
        assert_eq!(f.forward_shift().backward_shift(), f);
    }

    #[test]
    fn taylor_coefficients() {
        let geo = taylor_of_rational(&map(&[1.0], &[1.0, -1.0]), 3).unwrap();
        for k in 0..4 {
            assert!((geo.coeff(k) - c(1.0, 0.0)).norm() < 1e-15);
        }
        // hand division of 1/(3 - z - z^2): 1/3, 1/9, 4/27
        let t = taylor_of_rational(&map(&[1.0], &[3.0, -1.0, -1.0]), 2).unwrap();
        for (k, v) in [1.0 / 3.0, 1.0 / 9.0, 4.0 / 27.0].iter().enumerate() {
            assert!((t.coeff(k) - c(*v, 0.0)).norm() < 1e-15);
        }
        assert_eq!(
            taylor_of_rational(&map(&[1.0], &[0.0, 1.0]), 2),
            Err(Error::PoleAtOrigin)
        );
    }

    #[test]
    fn taylor_times_denominator_reproduces_numerator() {
        let r = map(&[0.5, -1.0, 0.25], &[3.0, -1.0, -1.0, 0.5]);
        let n = 12;
        let t = taylor_of_rational(&r, n).unwrap().to_poly();
        let prod = &t * r.den();
        for k in 0..=n {
            assert!((prod.coeff(k) - r.num().coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn oracle_for_z_squared() {
        let sq = RationalMap::monomial(c(1.0, 0.0), 2);
        let f = HardyPoly::from_real(&[0.0, 0.0, 1.0, 0.0, 1.0]);
        for z in [c(0.3, 0.4), c(-0.7, 0.1), c(0.0, -0.9)] {
            let v = adjoint_oracle(&sq, &f, z).unwrap();
            assert!((v - (z * z + z)).norm() < 1e-14);
        }
    }

    #[test]
    fn oracle_special_values() {
        let phi = map(&[1.0], &[3.0, -1.0, -1.0]);
        let f = HardyPoly::new(vec![c(0.3, -1.0), c(2.0, 0.5), c(-1.0, 1.0)]);
        assert_eq!(adjoint_oracle(&phi, &f, ZERO).unwrap(), f.at_zero());
        let one = HardyPoly::from_real(&[1.0]);
        let z = c(0.2, 0.6);
        let phi0 = phi.eval_finite(ZERO);
        let expected = (c(1.0, 0.0) - phi0.conj() * z).inv();
        assert!((adjoint_oracle(&phi, &one, z).unwrap() - expected).norm() < 1e-15);
        assert!(matches!(adjoint_oracle(&phi, &f, c(0.0, 1.0)), Err(Error::DomainViolation { .. })));
    }

    /// Matrix of `C_φ` on polynomials of degree `<= n`: column `k` holds the
    /// Taylor coefficients of `φ^k`.
    fn composition_matrix(phi: &RationalMap, n: usize) -> Vec<Vec<Complex64>> {
        let t = taylor_of_rational(phi, n).unwrap().to_poly();
        let mut power = ComplexPoly::one();
        let mut cols = Vec::new();
        for _ in 0..=n {
            cols.push((0..=n).map(|m| power.coeff(m)).collect::<Vec<_>>());
            power = &power * &t;
        }
        cols
    }

    #[test]
    fn oracle_matches_matrix_adjoint() {
        let phi = map(&[0.0, 1.0, 0.5], &[3.0, -1.0, -1.0]);
        let n = 10;
        let f = HardyPoly::new((0..=n).map(|k| c((k as f64).sin(), (k as f64 * 0.3).cos())).collect());
        // (C_φ* f)̂(k) = Σ_m conj(M[m][k]) f̂(m) = ⟨f, φ^k⟩; the image has infinitely
        // many coefficients, so truncate far enough out for the tail to vanish.
        let big = 80;
        let cols = composition_matrix(&phi, big);
        let fbig = HardyPoly::new((0..=big).map(|k| f.coeff(k)).collect());
        let adj: Vec<Complex64> = cols
            .iter()
            .map(|col| col.iter().zip(fbig.coeffs()).map(|(m, a)| a * m.conj()).sum())
            .collect();
        let adj = HardyPoly::new(adj);
        for z in [c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1)] {
            let oracle = adjoint_oracle(&phi, &f, z).unwrap();
            assert!((adj.eval(z) - oracle).norm() <= 1e-10 * oracle.norm().max(1.0));
        }
    }

    fn arb_hardy(max_deg: usize) -> impl Strategy<Value = HardyPoly> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_deg + 1)
            .prop_map(|v| HardyPoly::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    fn arb_disc() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.99, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn reproducing_property(f in arb_hardy(12), z in arb_disc()) {
            let k = kernel_coeffs(z, f.degree()).unwrap();
            let lhs = inner_product(&f, &k);
            let rhs = f.eval(z);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(f.norm()));
        }

        #[test]
        fn conjugate_symmetry(f in arb_hardy(8), g in arb_hardy(8)) {
            prop_assert_eq!(inner_product(&f, &g), inner_product(&g, &f).conj());
        }

        #[test]
        fn backward_shift_is_adjoint_of_forward(f in arb_hardy(8), g in arb_hardy(8)) {
            let lhs = inner_product(&f.forward_shift(), &g);
            let rhs = inner_product(&f, &g.backward_shift());
            prop_assert!((lhs - rhs).norm() <= 1e-13);
        }

        #[test]
        fn oracle_is_linear(f in arb_hardy(10), g in arb_hardy(10), z in arb_disc(),
                            a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0)) {
            let phi = map(&[0.0, 0.0, 1.0], &[3.0, -1.0, -1.0]);
            let (a, b) = (c(a.0, a.1), c(b.0, b.1));
            let combo = &f.scaled(a) + &g.scaled(b);
            let lhs = adjoint_oracle(&phi, &combo, z).unwrap();
            let rhs = a * adjoint_oracle(&phi, &f, z).unwrap() + b * adjoint_oracle(&phi, &g, z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm().max(1.0));
        }

        #[test]
        fn oracle_at_zero_is_constant_term(f in arb_hardy(10)) {
            let phi = map(&[1.0], &[3.0, -1.0, -1.0]);
            prop_assert!((adjoint_oracle(&phi, &f, ZERO).unwrap() - f.at_zero()).norm() <= 1e-13);
        }
    }
}
