//! Reading externally computed spectra.
//!
//! Two inputs are accepted: the Spectrum JSON document, and plain text with
//! one eigenvalue per line (blank lines and `#` comments ignored).

use num_traits::Signed;

use super::{Level, Spectrum, Unit};
use crate::error::{Error, Result};
use crate::exactnum::{from_f64_shortest, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// Values must be exact rationals; only equal values merge.
    Exact,
    /// Values are floats; neighbours within a relative tolerance merge, and the
    /// resulting spectrum is flagged approximate.
    Float,
}

pub fn load_spectrum(source: &str, mode: LoadMode, dedupe_tolerance: f64) -> Result<Spectrum> {
    if dedupe_tolerance.is_nan() || dedupe_tolerance < 0.0 {
        return Err(Error::UnsupportedParameter(format!(
            "dedupe tolerance must be nonnegative, got {dedupe_tolerance}"
        )));
    }
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        return load_json(trimmed, mode);
    }
    let lines = source
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    match mode {
        LoadMode::Exact => {
            let values = lines.map(parse_rational).collect::<Result<Vec<_>>>()?;
            levels_from_exact(values, Unit::Absolute)
        }
        LoadMode::Float => {
            let values = lines
                .map(|l| {
                    l.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("{l:?} is not a number")))
                })
                .collect::<Result<Vec<_>>>()?;
            levels_from_floats(values, dedupe_tolerance)
        }
    }
}

fn load_json(text: &str, mode: LoadMode) -> Result<Spectrum> {
    let spectrum: Spectrum =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("spectrum JSON: {e}")))?;
    spectrum.validate()?;
    Ok(match mode {
        LoadMode::Exact => spectrum,
        LoadMode::Float => spectrum.mark_approximate(),
    })
}

fn levels_from_exact(mut values: Vec<Rational>, unit: Unit) -> Result<Spectrum> {
    if let Some(neg) = values.iter().find(|v| v.is_negative()) {
        return Err(Error::NegativeEigenvalue(neg.to_string()));
    }
    values.sort();
    let mut levels: Vec<Level> = Vec::new();
    for v in values {
        match levels.last_mut() {
            Some(last) if last.value == v => last.mult += 1,
            _ => levels.push(Level::new(v, 1)),
        }
    }
    Spectrum::new(unit, levels)
}

fn levels_from_floats(mut values: Vec<f64>, tol: f64) -> Result<Spectrum> {
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Parse(format!("non-finite eigenvalue {bad}")));
    }
    if let Some(neg) = values.iter().find(|v| **v < 0.0) {
        return Err(Error::NegativeEigenvalue(neg.to_string()));
    }
    values.sort_by(f64::total_cmp);
    // (representative, count); a value joins the current cluster when it is
    // within `tol` of the cluster's first value, relative to the larger one.
    let mut clusters: Vec<(f64, u64)> = Vec::new();
    for v in values {
        match clusters.last_mut() {
            Some((rep, count)) if (v - *rep).abs() <= tol * v.abs().max(rep.abs()) => *count += 1,
            _ => clusters.push((v, 1)),
        }
    }
    let levels = clusters
        .into_iter()
        .map(|(rep, count)| Ok(Level::new(from_f64_shortest(rep)?, count)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new(Unit::Absolute, levels)?.mark_approximate())
}
