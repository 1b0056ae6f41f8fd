use std::fs;
use std::io::Read;
use std::path::Path;

use hardy_adjoint::{builtin, CertifiedMap, ComplexPoly, Error, HardyPoly, RationalMap};
use num_complex::Complex64;
use serde::Deserialize;

use crate::Failure;

#[derive(Deserialize)]
#[serde(untagged)]
enum Coeff {
    Pair([f64; 2]),
    Real(f64),
}

impl From<&Coeff> for Complex64 {
    fn from(c: &Coeff) -> Self {
        match *c {
            Coeff::Pair([re, im]) => Complex64::new(re, im),
            Coeff::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

fn to_complex(coeffs: &[Coeff]) -> Vec<Complex64> {
    coeffs.iter().map(Complex64::from).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDocument {
    num: Vec<Coeff>,
    den: Vec<Coeff>,
    #[serde(default)]
    name: Option<String>,
}

pub struct LoadedMap {
    pub name: String,
    pub map: CertifiedMap,
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
    }
}

fn certify(name: String, map: RationalMap) -> Result<LoadedMap, Failure> {
    match CertifiedMap::new(map) {
        Ok(map) => Ok(LoadedMap { name, map }),
        Err(e @ (Error::NotSelfMap { .. } | Error::DegreeZero)) => {
            Err(Failure::Certification(format!("{name} is not in Rat(U): {e}")))
        }
        Err(e) => Err(Failure::Certification(format!("{name}: {e}"))),
    }
}

/// A builtin name, or a JSON document `{"num": [...], "den": [...]}` read from
/// `input` (`-` for stdin).
pub fn load_map(name: Option<&str>, input: Option<&Path>) -> Result<LoadedMap, Failure> {
    match (name, input) {
        (Some(_), Some(_)) => Err(Failure::Parse("give either a map name or --in, not both".into())),
        (None, None) => Err(Failure::Parse("no map given (name or --in)".into())),
        (Some(name), None) => {
            let map = builtin(name).map_err(|e| Failure::Parse(e.to_string()))?;
            certify(name.to_string(), map)
        }
        (None, Some(path)) => {
            let text = read_source(path)?;
            let doc: MapDocument =
                serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
            let map = RationalMap::new(ComplexPoly::new(to_complex(&doc.num)), ComplexPoly::new(to_complex(&doc.den)))
                .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
            let name = doc.name.unwrap_or_else(|| path.display().to_string());
            certify(name, map)
        }
    }
}

/// Coefficients of `f` as inline JSON or `@path`.
pub fn parse_function(spec: &str) -> Result<HardyPoly, Failure> {
    let text = match spec.strip_prefix('@') {
        Some(path) => read_source(Path::new(path))?,
        None => spec.to_string(),
    };
    let coeffs: Vec<Coeff> =
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("function coefficients: {e}")))?;
    Ok(HardyPoly::new(to_complex(&coeffs)))
}

/// `"re,im"` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("cannot parse {s:?} as re,im"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

/// `AxR`: `A` equally spaced angles on each of `R` circles of radius
/// `rmax * i / R`, ordered by radius then angle.
pub fn polar_grid(spec: &str, rmax: f64) -> Result<Vec<Complex64>, Failure> {
    let bad = || Failure::Parse(format!("grid {spec:?} is not of the form AxR"));
    let (a, r) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    if a == 0 || r == 0 {
        return Err(bad());
    }
    Ok((1..=r)
        .flat_map(|i| {
            let radius = rmax * i as f64 / r as f64;
            (0..a).map(move |j| Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / a as f64))
        })
        .collect())
}
