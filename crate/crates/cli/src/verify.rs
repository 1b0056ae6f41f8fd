//! Invariant suites behind `hadj verify`.

use std::f64::consts::TAU;

use hardy_adjoint::adjoint::Form;
use hardy_adjoint::{adjoint_oracle, Error, ExtPoint, HardyPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::input::LoadedMap;

/// Samples within this distance of a critical value of the exterior map use
/// the relaxed tolerance.
const NEAR_CRITICAL: f64 = 1e-3;
const RELAXED_TOL: f64 = 1e-7;
const IDENTITY_TOL: f64 = 1e-10;
const MAX_DEGREE: usize = 12;
const MAX_DRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub status: Status,
    pub samples: usize,
    pub max_err: f64,
    pub tol: f64,
    pub near_critical_samples: usize,
    pub max_err_near_critical: f64,
    pub tol_near_critical: f64,
    pub note: Option<String>,
}

impl Suite {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            status: Status::Pass,
            samples: 0,
            max_err: 0.0,
            tol,
            near_critical_samples: 0,
            max_err_near_critical: 0.0,
            tol_near_critical: tol.max(RELAXED_TOL),
            note: None,
        }
    }

    fn record(&mut self, err: f64, near: bool) {
        if near {
            self.near_critical_samples += 1;
            self.max_err_near_critical = self.max_err_near_critical.max(err);
        } else {
            self.samples += 1;
            self.max_err = self.max_err.max(err);
        }
    }

    fn skip(mut self, why: &str) -> Self {
        self.status = Status::Skipped;
        self.note = Some(why.to_string());
        self
    }

    fn fail(&mut self, why: String) {
        self.status = Status::Fail;
        self.note.get_or_insert(why);
    }

    fn finish(mut self) -> Self {
        if self.status == Status::Pass
            && !(self.max_err <= self.tol && self.max_err_near_critical <= self.tol_near_critical)
        {
            self.status = Status::Fail;
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub suites: Vec<Suite>,
}

struct Sampler {
    rng: ChaCha8Rng,
    critical: Vec<Complex64>,
}

impl Sampler {
    fn f(&mut self) -> HardyPoly {
        let deg = self.rng.gen_range(0..=MAX_DEGREE);
        HardyPoly::new(
            (0..=deg)
                .map(|_| Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)))
                .collect(),
        )
    }

    fn z(&mut self) -> Complex64 {
        Complex64::from_polar(self.rng.gen::<f64>().sqrt(), self.rng.gen_range(0.0..TAU))
    }

    fn near_critical(&self, z: Complex64) -> bool {
        self.critical.iter().any(|v| (v - z).norm() < NEAR_CRITICAL)
    }
}

/// Draws points until `accept` succeeds `trials` times or the draw budget
/// runs out. Errors other than a critical or guarded point fail the suite.
fn run<T>(
    suite: &mut Suite,
    sampler: &mut Sampler,
    trials: usize,
    mut attempt: impl FnMut(&mut Sampler, Complex64) -> hardy_adjoint::Result<T>,
    mut accept: impl FnMut(&mut Suite, T, bool),
) {
    let mut done = 0;
    let mut draws = 0;
    while done < trials && draws < MAX_DRAWS * trials.max(1) {
        draws += 1;
        let z = sampler.z();
        let near = sampler.near_critical(z);
        match attempt(sampler, z) {
            Ok(v) => {
                accept(suite, v, near);
                done += 1;
            }
            Err(Error::NotRegularValue { .. } | Error::PoleProximity { .. }) => {}
            Err(e) => {
                suite.fail(format!("at {z}: {e}"));
                return;
            }
        }
    }
    if done < trials {
        suite.fail(format!("only {done} of {trials} usable points"));
    }
}

pub fn verify(m: &LoadedMap, trials: usize, seed: u64, tol: f64) -> Summary {
    let map = &m.map;
    let critical: Vec<Complex64> = map
        .exterior()
        .critical_data()
        .map(|d| d.value_points().filter_map(ExtPoint::finite).collect())
        .unwrap_or_default();
    let mut sampler = Sampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
        critical,
    };
    let mut suites = Vec::new();

    let mut three = Suite::new("three_form_agreement", tol);
    run(
        &mut three,
        &mut sampler,
        trials,
        |s, z| {
            let f = s.f();
            let bs = map.eval_bs(&f, z)?.value;
            let mut values = vec![bs];
            for form in [Form::Thm, Form::Cor] {
                match map.evaluate(&f, z, form) {
                    Ok(e) => values.push(e.value),
                    Err(Error::PoleProximity { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(values
                .iter()
                .map(|v| (v - bs).norm() / (1.0 + bs.norm()))
                .fold(0.0, f64::max))
        },
        |suite, err, near| suite.record(err, near),
    );
    suites.push(three.finish());

    let mut oracle = Suite::new("oracle_agreement", tol);
    run(
        &mut oracle,
        &mut sampler,
        trials,
        |s, z| {
            let f = s.f();
            let v = map.evaluate(&f, z, Form::Auto)?.value;
            let o = adjoint_oracle(map.phi(), &f, z)?;
            Ok((v - o).norm() / (1.0 + o.norm()))
        },
        |suite, err, near| suite.record(err, near),
    );
    suites.push(oracle.finish());

    let finite_at_infinity = !map.at_infinity().is_infinite();
    let identity = Suite::new("amusing_identity", IDENTITY_TOL);
    suites.push(if finite_at_infinity {
        let mut identity = identity;
        run(&mut identity, &mut sampler, trials, |_, z| map.identity_residual(z), |suite, r, near| {
            suite.record(r, near)
        });
        identity.finish()
    } else {
        identity.skip("phi(inf) = inf")
    });

    let partial = Suite::new("partial_fraction", IDENTITY_TOL);
    suites.push(if finite_at_infinity {
        let mut partial = partial;
        run(
            &mut partial,
            &mut sampler,
            trials,
            |s, z| {
                let pf = map.partial_fraction(z)?;
                let mut worst: f64 = 0.0;
                for _ in 0..5 {
                    let w = Complex64::new(s.rng.gen_range(-2.0..2.0), s.rng.gen_range(-2.0..2.0));
                    let exact = (Complex64::new(1.0, 0.0) - z.conj() * map.phi().eval_finite(w)).inv();
                    worst = worst.max((pf.eval(w) - exact).norm() / (1.0 + exact.norm()));
                }
                Ok(worst)
            },
            |suite, err, near| suite.record(err, near),
        );
        partial.finish()
    } else {
        partial.skip("phi(inf) = inf")
    });

    // the error column records max |w|, which must stay below one
    let mut containment = Suite::new("fiber_containment", 1.0);
    run(
        &mut containment,
        &mut sampler,
        trials,
        |_, z| match map.fiber(z) {
            Ok(f) => Ok(f.points.iter().map(|w| w.norm()).fold(0.0, f64::max)),
            Err(Error::FiberEscape { modulus }) => Ok(modulus),
            Err(e) => Err(e),
        },
        |suite, r, near| suite.record(r, near),
    );
    containment.tol_near_critical = 1.0;
    if containment.max_err >= 1.0 || containment.max_err_near_critical >= 1.0 {
        containment.fail("fiber point outside the open disc".into());
    }
    suites.push(containment.finish());

    Summary {
        name: m.name.clone(),
        seed,
        trials,
        passed: suites.iter().all(|s| s.status != Status::Fail),
        suites,
    }
}
