use std::f64::consts::TAU;

use hardy_adjoint::adjoint::{CertifiedMap, Form};
use hardy_adjoint::hardy::HardyPoly;
use hardy_adjoint::regularity::{classify, BranchAnalysis, DecompositionForm, Location, RegularityClass};
use hardy_adjoint::{ComplexPoly, Error, RationalMap};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random element of Rat(U): poles outside the closed disc, numerator scaled
/// so the boundary modulus is at most `peak`.
fn random_self_map(seed: u64, peak: f64) -> CertifiedMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let dn = rng.gen_range(0..=3);
        let dd = rng.gen_range(0..=3);
        let poles: Vec<Complex64> = (0..dd)
            .map(|_| Complex64::from_polar(rng.gen_range(1.3..3.0), rng.gen_range(0.0..TAU)))
            .collect();
        let den = ComplexPoly::from_roots(c(1.0, 0.0), &poles);
        let num = ComplexPoly::new((0..=dn).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
        let Ok(r) = RationalMap::new(num.clone(), den.clone()) else { continue };
        if r.degree() == 0 {
            continue;
        }
        let Ok(check) = r.self_map_check() else { continue };
        let scale = peak / check.max_boundary_modulus;
        let Ok(r) = RationalMap::new(num.scaled(c(scale, 0.0)), den) else { continue };
        if let Ok(m) = CertifiedMap::new(r) {
            return m;
        }
    }
}

fn truncated_kernel(w: Complex64, n: usize) -> HardyPoly {
    let mut coeffs = Vec::with_capacity(n);
    let mut p = c(1.0, 0.0);
    for _ in 0..n {
        coeffs.push(p);
        p *= w.conj();
    }
    HardyPoly::new(coeffs)
}

fn point(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // C_φ* K_w = K_{φ(w)}
    #[test]
    fn adjoint_sends_kernels_to_kernels(
        seed in any::<u64>(),
        wr in 0.0..0.5f64, wt in 0.0..TAU,
        zr in 0.01..0.95f64, zt in 0.0..TAU,
    ) {
        let map = random_self_map(seed, 0.95);
        let w = point(wr, wt);
        let z = point(zr, zt);
        let f = truncated_kernel(w, 64);
        let exact = (c(1.0, 0.0) - map.phi().eval_finite(w).conj() * z).inv();
        for form in [Form::Thm, Form::Cor, Form::Bs] {
            match map.evaluate(&f, z, form) {
                Ok(e) => prop_assert!((e.value - exact).norm() <= 1e-9 * (1.0 + exact.norm()), "{form:?}: {} vs {exact}", e.value),
                Err(Error::NotRegularValue { .. } | Error::PoleProximity { .. }) => {}
                Err(e) => prop_assert!(false, "{form:?}: {e}"),
            }
        }
    }

    #[test]
    fn adjoint_is_linear_in_f(
        seed in any::<u64>(),
        zr in 0.01..0.95f64, zt in 0.0..TAU,
        a in (-2.0..2.0f64, -2.0..2.0f64),
        fs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..10),
        gs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..10),
    ) {
        let map = random_self_map(seed, 0.9);
        let z = point(zr, zt);
        let a = c(a.0, a.1);
        let f = HardyPoly::new(fs.iter().map(|&(x, y)| c(x, y)).collect());
        let g = HardyPoly::new(gs.iter().map(|&(x, y)| c(x, y)).collect());
        let combo = &f.scaled(a) + &g;
        let (Ok(ef), Ok(eg), Ok(ec)) = (
            map.evaluate(&f, z, Form::Auto),
            map.evaluate(&g, z, Form::Auto),
            map.evaluate(&combo, z, Form::Auto),
        ) else {
            return Ok(());
        };
        let expected = a * ef.value + eg.value;
        prop_assert!((ec.value - expected).norm() <= 1e-10 * (1.0 + expected.norm()));
    }

    #[test]
    fn classification_is_consistent(seed in any::<u64>()) {
        let map = random_self_map(seed, 0.98);
        let r = classify(&map).unwrap();
        if r.class.is_strongly_outer_regular() {
            prop_assert!(r.class.is_outer_regular());
            prop_assert_eq!(r.phi_at_infinity.location, Location::InDisc);
        }
        if r.class.is_outer_regular() {
            prop_assert!(r.critical_values_outside_or_boundary.is_empty());
            prop_assert!(r.critical_values_inside.iter().all(|v| v.modulus.unwrap() < 1.0));
        } else {
            prop_assert!(!r.critical_values_outside_or_boundary.is_empty());
        }
        if r.is_blaschke && r.degree >= 2 {
            prop_assert_eq!(r.class, RegularityClass::NotOuterRegular);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn atlas_invariants(seed in any::<u64>()) {
        let map = random_self_map(seed, 0.98);
        let a = BranchAnalysis::new(&map).unwrap();
        prop_assert!(a.atlas.min_separation > hardy_adjoint::tol::CLUSTER_TOL);
        // critical values of φₑ are the reflections of those of φ
        prop_assert_eq!(a.exterior_regular_on_disc, a.regularity.class.is_outer_regular());
        if a.regularity.class.is_outer_regular() {
            prop_assert!(a.atlas.is_single_valued());
            prop_assert!(a.atlas.max_modulus() <= 1.0 + 1e-6);
        }
        let bs = a.report(DecompositionForm::BsForm);
        prop_assert_eq!(bs.legitimate, bs.factors_bounded);
        let weighted = a.report(DecompositionForm::WeightedForm);
        let affine = map.degree() == 1 && map.at_infinity().is_infinite();
        if !affine {
            prop_assert_eq!(weighted.legitimate, weighted.factors_bounded);
        }
        if a.regularity.boundary_contacts.count() == Some(1) && a.regularity.class.is_outer_regular() {
            prop_assert!(bs.non_compact.len() <= 1);
        }
    }
}

#[test]
fn z_over_a_minus_zn_is_strongly_outer_regular() {
    for n in 2..=4 {
        let den = {
            let mut d = vec![0.0; n + 1];
            d[0] = 2.0;
            d[n] = -1.0;
            ComplexPoly::from_real(&d)
        };
        let map = CertifiedMap::new(RationalMap::new(ComplexPoly::from_real(&[0.0, 1.0]), den).unwrap()).unwrap();
        let r = classify(&map).unwrap();
        assert_eq!(r.class, RegularityClass::StronglyOuterRegular, "n = {n}");
        assert_eq!(r.boundary_contacts.count(), Some(n));
    }
}

#[test]
fn affine_maps_have_bounded_weighted_factors() {
    // z/2 + 1/4: no critical values and φ(∞) = ∞, so outer regular but not
    // strongly; Λ_∞ vanishes and g = z σ'/σ stays bounded
    let map = CertifiedMap::new(RationalMap::new(ComplexPoly::from_real(&[0.25, 0.5]), ComplexPoly::one()).unwrap()).unwrap();
    let a = BranchAnalysis::new(&map).unwrap();
    assert_eq!(a.regularity.class, RegularityClass::OuterRegular);
    let w = a.report(DecompositionForm::WeightedForm);
    assert!(!w.legitimate);
    assert!(w.factors_bounded);
}
