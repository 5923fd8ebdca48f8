//! Experiment runner and table emitters behind the `polymg` binary.

pub mod experiment;
pub mod tables;

use std::ops::RangeInclusive;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] polymg::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `"3"`, `"1..6"` (inclusive) or `"1,2,5"` into a list of counts
/// restricted to `valid`.
pub fn parse_counts(spec: &str, valid: RangeInclusive<usize>) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("cannot parse count list `{spec}`"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    if let Some(k) = out.iter().find(|k| !valid.contains(k)) {
        return Err(CliError::Usage(format!(
            "value {k} outside [{}, {}]",
            valid.start(),
            valid.end()
        )));
    }
    Ok(out)
}

/// Parses a comma-separated list of reals.
pub fn parse_reals(spec: &str) -> CliResult<Vec<f64>> {
    let out: Result<Vec<f64>, _> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    match out {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("cannot parse number list `{spec}`"))),
    }
}

/// Formats a float for table output; NaN prints as `nan`.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}
