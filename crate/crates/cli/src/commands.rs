use hardy_adjoint::adjoint::{monodromy, Form};
use hardy_adjoint::rational::CriticalPoint;
use hardy_adjoint::regularity::{classify, BranchAnalysis, DecompositionForm, DecompositionReport, RegularityReport};
use hardy_adjoint::{adjoint_oracle, ComplexPoly, Error, ExtPoint, HardyPoly};
use num_complex::Complex64;
use serde::Serialize;

use crate::input::LoadedMap;
use crate::Failure;

#[derive(Serialize)]
pub struct AnalyzeOutput {
    pub name: String,
    pub num: ComplexPoly,
    pub den: ComplexPoly,
    pub critical_values: Vec<ExtPoint>,
    pub critical_points: Vec<CriticalPoint>,
    #[serde(flatten)]
    pub regularity: RegularityReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<DecompositionReport>,
}

pub fn analyze(m: &LoadedMap, forms: &[DecompositionForm]) -> Result<AnalyzeOutput, Failure> {
    let phi = m.map.phi();
    let data = phi.critical_data().map_err(numeric)?;
    let regularity = classify(&m.map).map_err(numeric)?;
    let decompositions = if forms.is_empty() {
        Vec::new()
    } else {
        let analysis = BranchAnalysis::new(&m.map).map_err(numeric)?;
        forms.iter().map(|&f| analysis.report(f)).collect()
    };
    Ok(AnalyzeOutput {
        name: m.name.clone(),
        num: phi.num().clone(),
        den: phi.den().clone(),
        critical_values: data.value_points().collect(),
        critical_points: data.points,
        regularity,
        decompositions,
    })
}

fn numeric(e: Error) -> Failure {
    match e {
        Error::PathThroughCriticalValue { .. } | Error::MatchingAmbiguity { .. } => Failure::Path(e.to_string()),
        other => Failure::Numeric(other.to_string()),
    }
}

#[derive(Serialize)]
pub struct EvalRow {
    pub index: usize,
    pub z: Complex64,
    pub value: Option<Complex64>,
    pub form_used: Option<Form>,
    pub lambda_term: Option<Complex64>,
    pub branch_terms: Vec<Complex64>,
    pub oracle_value: Option<Complex64>,
    pub abs_err: Option<f64>,
    pub near_pole: bool,
    pub near_critical: bool,
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct EvalCsvRow {
    pub index: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub form_used: Option<Form>,
    pub oracle_re: Option<f64>,
    pub oracle_im: Option<f64>,
    pub abs_err: Option<f64>,
    pub near_pole: bool,
    pub near_critical: bool,
    pub error: Option<String>,
}

impl From<&EvalRow> for EvalCsvRow {
    fn from(r: &EvalRow) -> Self {
        Self {
            index: r.index,
            z_re: r.z.re,
            z_im: r.z.im,
            value_re: r.value.map(|v| v.re),
            value_im: r.value.map(|v| v.im),
            form_used: r.form_used,
            oracle_re: r.oracle_value.map(|v| v.re),
            oracle_im: r.oracle_value.map(|v| v.im),
            abs_err: r.abs_err,
            near_pole: r.near_pole,
            near_critical: r.near_critical,
            error: r.error.clone(),
        }
    }
}

/// One row per grid point; the reference column comes from the series path.
pub fn eval(m: &LoadedMap, f: &HardyPoly, points: &[Complex64], form: Form) -> Vec<EvalRow> {
    points
        .iter()
        .enumerate()
        .map(|(index, &z)| {
            let mut row = EvalRow {
                index,
                z,
                value: None,
                form_used: None,
                lambda_term: None,
                branch_terms: Vec::new(),
                oracle_value: None,
                abs_err: None,
                near_pole: false,
                near_critical: false,
                error: None,
            };
            match m.map.evaluate(f, z, form) {
                Ok(e) => {
                    row.value = Some(e.value);
                    row.form_used = Some(e.form_used);
                    row.lambda_term = Some(e.lambda_term);
                    row.branch_terms = e.branch_terms;
                    row.near_pole = e.flags.near_pole;
                    row.near_critical = e.flags.near_critical;
                    match adjoint_oracle(m.map.phi(), f, z) {
                        Ok(o) => {
                            row.oracle_value = Some(o);
                            row.abs_err = Some((e.value - o).norm());
                        }
                        Err(err) => row.error = Some(format!("reference: {err}")),
                    }
                }
                Err(err) => row.error = Some(err.to_string()),
            }
            row
        })
        .collect()
}

#[derive(Serialize)]
pub struct MonodromyOutput {
    pub name: String,
    pub center: Complex64,
    pub radius: f64,
    pub steps: usize,
    pub base: Complex64,
    pub cycles: String,
    pub permutation: Vec<usize>,
    pub max_return_error: f64,
    pub base_fiber: Vec<Complex64>,
}

#[derive(Serialize)]
pub struct MonodromyCsvRow<'a> {
    pub name: &'a str,
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
    pub steps: usize,
    pub cycles: &'a str,
    pub max_return_error: f64,
}

impl<'a> From<&'a MonodromyOutput> for MonodromyCsvRow<'a> {
    fn from(m: &'a MonodromyOutput) -> Self {
        Self {
            name: &m.name,
            center_re: m.center.re,
            center_im: m.center.im,
            radius: m.radius,
            steps: m.steps,
            cycles: &m.cycles,
            max_return_error: m.max_return_error,
        }
    }
}

/// Branch permutation of the exterior map around `|z - center| = radius`.
pub fn run_monodromy(m: &LoadedMap, center: Complex64, radius: f64, steps: usize) -> Result<MonodromyOutput, Failure> {
    if !(radius > 0.0) {
        return Err(Failure::Parse(format!("radius must be positive, got {radius}")));
    }
    let result = monodromy(m.map.exterior(), center, radius, steps).map_err(|e| match e {
        Error::PathThroughCriticalValue { .. } | Error::MatchingAmbiguity { .. } | Error::NotRegularValue { .. } => {
            Failure::Path(e.to_string())
        }
        other => Failure::Numeric(other.to_string()),
    })?;
    Ok(MonodromyOutput {
        name: m.name.clone(),
        center,
        radius,
        steps: steps.max(3),
        base: result.base,
        cycles: result.cycles,
        permutation: result.permutation,
        max_return_error: result.max_return_error,
        base_fiber: result.start.points,
    })
}
