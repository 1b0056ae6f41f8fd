//! Named example maps.
//!
//! Names take the form `name` or `name:key=value,key=value`:
//!
//! | name                 | map                              | parameters |
//! |----------------------|----------------------------------|------------|
//! | `example-4.1`        | `1/(3 - z - z²)`                 |            |
//! | `example-4.2`        | `z²/(3 - z - z²)`                |            |
//! | `blaschke-2.6`       | `z(1 - 2z)/(2 - z)`              |            |
//! | `family-5.3`         | `1/((d + 1) - z - ... - z^d)`    | `d >= 1`   |
//! | `z-pow`              | `z^n`                            | `n >= 1`   |
//! | `z-over-a-minus-zn`  | `z/(a - z^n)`                    | real `a`, `n >= 1` |

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::rational::RationalMap;

/// The named maps used by the test suites and `--all` style CLI runs.
pub fn standard_names() -> Vec<String> {
    let mut names: Vec<String> = ["example-4.1", "example-4.2", "blaschke-2.6"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    names.extend((2..=6).map(|d| format!("family-5.3:d={d}")));
    names.extend((2..=3).map(|n| format!("z-pow:n={n}")));
    names.extend((2..=4).map(|n| format!("z-over-a-minus-zn:a=2,n={n}")));
    names
}

fn params(name: &str, raw: Option<&str>) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let Some(raw) = raw else { return Ok(out) };
    for item in raw.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::BadMapName(format!("{name}: expected key=value, got {item:?}")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn take<T: std::str::FromStr>(p: &mut BTreeMap<String, String>, key: &str, name: &str) -> Result<T> {
    let v = p
        .remove(key)
        .ok_or_else(|| Error::BadMapName(format!("{name}: missing parameter {key}")))?;
    v.parse()
        .map_err(|_| Error::BadMapName(format!("{name}: cannot parse {key}={v}")))
}

fn positive(n: usize, key: &str, name: &str) -> Result<usize> {
    if n == 0 {
        Err(Error::BadMapName(format!("{name}: {key} must be at least 1")))
    } else {
        Ok(n)
    }
}

/// Builds a named map. Certification is left to the caller.
pub fn builtin(spec: &str) -> Result<RationalMap> {
    let (name, raw) = match spec.split_once(':') {
        Some((n, r)) => (n.trim(), Some(r)),
        None => (spec.trim(), None),
    };
    let mut p = params(name, raw)?;
    let map = match name {
        "example-4.1" => RationalMap::new(ComplexPoly::one(), ComplexPoly::from_real(&[3.0, -1.0, -1.0])),
        "example-4.2" => RationalMap::new(
            ComplexPoly::from_real(&[0.0, 0.0, 1.0]),
            ComplexPoly::from_real(&[3.0, -1.0, -1.0]),
        ),
        "blaschke-2.6" => RationalMap::new(ComplexPoly::from_real(&[0.0, 1.0, -2.0]), ComplexPoly::from_real(&[2.0, -1.0])),
        "family-5.3" => {
            let d = positive(take(&mut p, "d", name)?, "d", name)?;
            let mut den = vec![-1.0; d + 1];
            den[0] = (d + 1) as f64;
            RationalMap::new(ComplexPoly::one(), ComplexPoly::from_real(&den))
        }
        "z-pow" => {
            let n = positive(take(&mut p, "n", name)?, "n", name)?;
            Ok(RationalMap::monomial(num_complex::Complex64::new(1.0, 0.0), n))
        }
        "z-over-a-minus-zn" => {
            let a: f64 = take(&mut p, "a", name)?;
            let n = positive(take(&mut p, "n", name)?, "n", name)?;
            let mut den = vec![0.0; n + 1];
            den[0] = a;
            den[n] = -1.0;
            RationalMap::new(ComplexPoly::from_real(&[0.0, 1.0]), ComplexPoly::from_real(&den))
        }
        _ => return Err(Error::BadMapName(format!("unknown map {name:?}"))),
    }?;
    if let Some(k) = p.keys().next() {
        return Err(Error::BadMapName(format!("{name}: unexpected parameter {k}")));
    }
    Ok(map)
}
