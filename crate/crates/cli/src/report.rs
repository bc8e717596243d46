//! Consolidates `summary.json` files into one CSV row per experiment.

use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::SCHEMA_VERSION;
use crate::error::{HarnessError, Result};
use crate::output::{fmt17, Csv};
use crate::runner::Summary;

pub const REPORT_HEADER: [&str; 12] = [
    "kind",
    "truth",
    "predictor",
    "N",
    "seeds",
    "final_cesaro_mean",
    "weak",
    "strong",
    "weak_count",
    "strong_count",
    "record_count",
    "gap",
];

fn read_summary(path: &Path) -> Result<(u64, Value)> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| HarnessError::Schema(format!("{}: not a summary ({e})", path.display())))?;
    let version = value
        .get("schema_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| HarnessError::Schema(format!("{}: missing schema_version", path.display())))?;
    Ok((version, value))
}

/// Mean over seeds of the final Cesàro mean, where the kind has one.
fn final_cesaro(summary: &Summary) -> Option<f64> {
    if let Some(m) = &summary.merge {
        let n = m.runs.len() as f64;
        return Some(m.runs.iter().map(|r| r.final_cesaro_mean).sum::<f64>() / n);
    }
    summary.decision.as_ref().map(|d| d.mean_final_cesaro)
}

fn row(summary: &Summary) -> Vec<String> {
    let config = &summary.metadata.config;
    let opt = |x: Option<String>| x.unwrap_or_default();
    let merge = summary.merge.as_ref();
    let runs = merge.map_or(0, |m| m.runs.len());
    vec![
        summary.kind.to_string(),
        config.component.describe(),
        opt(config.predictor.as_ref().map(|p| p.describe())),
        config.horizon.to_string(),
        config.seeds.len().to_string(),
        opt(final_cesaro(summary).map(fmt17)),
        opt(merge.map(|m| (m.weak_count == runs).to_string())),
        opt(merge.map(|m| (m.strong_count == runs).to_string())),
        opt(merge.map(|m| m.weak_count.to_string())),
        opt(merge.map(|m| m.strong_count.to_string())),
        opt(merge.map(|m| m.runs.iter().map(|r| r.record_times.len()).sum::<usize>().to_string())),
        opt(summary.decision.as_ref().map(|d| fmt17(d.gap))),
    ]
}

/// One row per summary, in argument order; an empty list gives the header only.
pub fn consolidate(paths: &[PathBuf]) -> Result<Csv> {
    let mut csv = Csv::new(&REPORT_HEADER);
    let mut first: Option<(u64, &Path)> = None;
    for path in paths {
        let (version, value) = read_summary(path)?;
        if let Some((v0, p0)) = first {
            if v0 != version {
                return Err(HarnessError::Schema(format!(
                    "{} has schema_version {v0} but {} has {version}",
                    p0.display(),
                    path.display()
                )));
            }
        } else {
            first = Some((version, path));
        }
        if version != u64::from(SCHEMA_VERSION) {
            return Err(HarnessError::Schema(format!(
                "{} has schema_version {version}; this build reads {SCHEMA_VERSION}",
                path.display()
            )));
        }
        let summary: Summary = serde_json::from_value(value)
            .map_err(|e| HarnessError::Schema(format!("{}: {e}", path.display())))?;
        csv.row(&row(&summary));
    }
    Ok(csv)
}
