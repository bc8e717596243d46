//! Experiment configs: JSON files with a mandatory `schema_version`.
//!
//! Parsing never stops at the first problem. Every field is checked and all
//! violations are reported together, each naming its field.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use ergolearn::components::{ComponentParams, EXACT_BLOCK_MAX_LEN};
use ergolearn::decisions::DecisionProblem;
use ergolearn::merging_lab::{
    MergeParams, DEFAULT_EPSILON, DEFAULT_RECORD_THRESHOLD, DEFAULT_TAIL_FRACTION,
};
use ergolearn::predictor::{Predictor, PredictorSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{FieldViolation, HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;
pub const DEFAULT_BLOCK_LENGTH: usize = 3;
/// Largest number of distinct blocks a `freq` table may enumerate.
pub const MAX_BLOCK_TABLE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Merge,
    Calibrate,
    Freq,
    Decide,
    DiracWitness,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Merge => "merge",
            Self::Calibrate => "calibrate",
            Self::Freq => "freq",
            Self::Decide => "decide",
            Self::DiracWitness => "dirac-witness",
        }
    }

    /// Optional and required fields beyond the common ones.
    fn fields(self) -> &'static [&'static str] {
        match self {
            Self::Merge => &["component", "predictor", "epsilon", "tail_fraction", "record_threshold"],
            Self::DiracWitness => &["component", "epsilon", "tail_fraction", "record_threshold"],
            Self::Calibrate => &["component", "predictor", "bin_width"],
            Self::Freq => &["component", "block_length", "decomposition"],
            Self::Decide => &["component", "predictor", "problem"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Payoff table of a `decide` experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProblemSpec {
    /// One action per outcome, payoff 1 for naming the realized outcome.
    Matching,
    /// `payoff[outcome][action]`.
    Table { actions: Vec<String>, payoff: Vec<Vec<f64>> },
}

impl ProblemSpec {
    pub fn build(&self, component: &ComponentParams) -> ergolearn::Result<DecisionProblem> {
        match self {
            Self::Matching => Ok(DecisionProblem::matching(&component.alphabet())),
            Self::Table { actions, payoff } => DecisionProblem::new(actions.clone(), payoff.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub component: ComponentParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predictor: Option<PredictorSpec>,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    pub epsilon: f64,
    pub tail_fraction: f64,
    pub record_threshold: f64,
    pub bin_width: f64,
    pub block_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<ComponentParams>>,
    pub problem: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn merge_params(&self) -> ergolearn::Result<MergeParams> {
        MergeParams::new(self.epsilon, self.tail_fraction, self.record_threshold)
    }

    /// Replaces the seed list, as `--seeds` does.
    pub fn with_seeds(mut self, seeds: Vec<u64>) -> Result<Self> {
        let mut errs = Vec::new();
        check_seeds(&seeds, &mut errs);
        if !errs.is_empty() {
            return Err(HarnessError::Validation(errs));
        }
        self.seeds = seeds;
        Ok(self)
    }

    /// The predictor, which every kind but `freq` has after validation.
    pub fn predictor(&self) -> Result<&PredictorSpec> {
        self.predictor
            .as_ref()
            .ok_or_else(|| HarnessError::Validation(vec![FieldViolation::new("predictor", "required")]))
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config(&text)
}

fn take<T: DeserializeOwned>(obj: &mut Map<String, Value>, key: &str, errs: &mut Vec<FieldViolation>) -> Option<T> {
    let value = obj.remove(key)?;
    match serde_json::from_value(value) {
        Ok(v) => Some(v),
        Err(e) => {
            errs.push(FieldViolation::new(key, e.to_string()));
            None
        }
    }
}

fn check_seeds(seeds: &[u64], errs: &mut Vec<FieldViolation>) {
    if seeds.is_empty() {
        errs.push(FieldViolation::new("seeds", "must list at least one seed"));
    }
    let distinct: BTreeSet<_> = seeds.iter().collect();
    if distinct.len() != seeds.len() {
        errs.push(FieldViolation::new("seeds", "seeds must be distinct"));
    }
}

fn check_positive(value: f64, field: &str, errs: &mut Vec<FieldViolation>) {
    if !(value.is_finite() && value > 0.0) {
        errs.push(FieldViolation::new(field, format!("must be positive, got {value}")));
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| HarnessError::Validation(vec![FieldViolation::new("<root>", e.to_string())]))?;
    let Value::Object(mut obj) = root else {
        return Err(HarnessError::Validation(vec![FieldViolation::new("<root>", "config must be a JSON object")]));
    };
    let mut errs = Vec::new();
    let present: BTreeSet<String> = obj.keys().cloned().collect();

    let schema_version: Option<u32> = take(&mut obj, "schema_version", &mut errs);
    match schema_version {
        Some(SCHEMA_VERSION) => {}
        Some(v) => errs.push(FieldViolation::new(
            "schema_version",
            format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
        )),
        None if !present.contains("schema_version") => errs.push(FieldViolation::new("schema_version", "required")),
        None => {}
    }
    let kind: Option<ExperimentKind> = take(&mut obj, "kind", &mut errs);
    if kind.is_none() && !present.contains("kind") {
        errs.push(FieldViolation::new("kind", "required"));
    }

    let component: Option<ComponentParams> = take(&mut obj, "component", &mut errs);
    let predictor: Option<PredictorSpec> = take(&mut obj, "predictor", &mut errs);
    let horizon_long: Option<usize> = take(&mut obj, "horizon", &mut errs);
    let horizon_short: Option<usize> = take(&mut obj, "N", &mut errs);
    let seeds: Option<Vec<u64>> = take(&mut obj, "seeds", &mut errs);
    let epsilon: Option<f64> = take(&mut obj, "epsilon", &mut errs);
    let tail_fraction: Option<f64> = take(&mut obj, "tail_fraction", &mut errs);
    let record_threshold: Option<f64> = take(&mut obj, "record_threshold", &mut errs);
    let bin_width: Option<f64> = take(&mut obj, "bin_width", &mut errs);
    let block_length: Option<usize> = take(&mut obj, "block_length", &mut errs);
    let decomposition: Option<Vec<ComponentParams>> = take(&mut obj, "decomposition", &mut errs);
    let problem: Option<ProblemSpec> = take(&mut obj, "problem", &mut errs);
    let output: Option<PathBuf> = take(&mut obj, "output", &mut errs);

    for key in obj.keys() {
        errs.push(FieldViolation::new(key.clone(), "unknown field"));
    }

    let horizon = match (horizon_long, horizon_short) {
        (Some(_), Some(_)) => {
            errs.push(FieldViolation::new("horizon", "give either horizon or N, not both"));
            None
        }
        (h, n) => h.or(n),
    };
    if horizon.is_none() && !present.contains("horizon") && !present.contains("N") {
        errs.push(FieldViolation::new("horizon", "required"));
    }
    if horizon == Some(0) {
        errs.push(FieldViolation::new("horizon", "must be at least 1"));
    }
    match &seeds {
        Some(s) => check_seeds(s, &mut errs),
        None if !present.contains("seeds") => errs.push(FieldViolation::new("seeds", "required")),
        None => {}
    }

    let epsilon = epsilon.unwrap_or(DEFAULT_EPSILON);
    let tail_fraction = tail_fraction.unwrap_or(DEFAULT_TAIL_FRACTION);
    let record_threshold = record_threshold.unwrap_or(DEFAULT_RECORD_THRESHOLD);
    let bin_width = bin_width.unwrap_or(DEFAULT_BIN_WIDTH);
    let block_length = block_length.unwrap_or(DEFAULT_BLOCK_LENGTH);
    let problem = problem.unwrap_or(ProblemSpec::Matching);
    check_positive(epsilon, "epsilon", &mut errs);
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        errs.push(FieldViolation::new("tail_fraction", format!("must lie in (0, 1), got {tail_fraction}")));
    }
    check_positive(record_threshold, "record_threshold", &mut errs);
    if !(bin_width > 0.0 && bin_width <= 1.0) {
        errs.push(FieldViolation::new("bin_width", format!("must lie in (0, 1], got {bin_width}")));
    }

    let Some(kind) = kind else {
        return Err(HarnessError::Validation(errs));
    };

    for field in ["component", "predictor", "epsilon", "tail_fraction", "record_threshold", "bin_width", "block_length", "decomposition", "problem"] {
        if present.contains(field) && !kind.fields().contains(&field) {
            errs.push(FieldViolation::new(field, format!("not used by kind {kind}")));
        }
    }

    let component = match (kind, component) {
        (ExperimentKind::DiracWitness, None) => Some(ComponentParams::Dirac),
        (ExperimentKind::DiracWitness, Some(ComponentParams::Dirac)) => Some(ComponentParams::Dirac),
        (ExperimentKind::DiracWitness, Some(_)) => {
            errs.push(FieldViolation::new("component", "dirac-witness runs only the dirac family"));
            None
        }
        (_, None) => {
            if !present.contains("component") {
                errs.push(FieldViolation::new("component", "required"));
            }
            None
        }
        (_, Some(c)) => match c.validate() {
            Ok(()) => Some(c),
            Err(e) => {
                errs.push(FieldViolation::new("component", e.to_string()));
                None
            }
        },
    };

    let needs_predictor = matches!(kind, ExperimentKind::Merge | ExperimentKind::Calibrate | ExperimentKind::Decide);
    let predictor = match (kind, predictor) {
        (ExperimentKind::DiracWitness, _) => Some(PredictorSpec::Constant { weights: vec![0.5, 0.5] }),
        (_, None) => {
            if needs_predictor && !present.contains("predictor") {
                errs.push(FieldViolation::new("predictor", "required"));
            }
            None
        }
        (_, Some(p)) => {
            let mut ok = true;
            if let Err(e) = Predictor::build(&p) {
                errs.push(FieldViolation::new("predictor", e.to_string()));
                ok = false;
            }
            if let (Some(c), true) = (&component, ok) {
                if let Err(e) = p.check_compatible(c) {
                    errs.push(FieldViolation::new("predictor", e.to_string()));
                }
            }
            Some(p)
        }
    };

    if kind == ExperimentKind::Freq {
        if let Some(c) = &component {
            let size = c.alphabet().len();
            let blocks = (1..=block_length).try_fold(1usize, |acc, _| acc.checked_mul(size));
            if block_length == 0 || block_length > EXACT_BLOCK_MAX_LEN || blocks.is_none_or(|b| b > MAX_BLOCK_TABLE) {
                errs.push(FieldViolation::new(
                    "block_length",
                    format!("must lie in 1..={EXACT_BLOCK_MAX_LEN} with at most {MAX_BLOCK_TABLE} blocks"),
                ));
            }
            if matches!(c, ComponentParams::Dirac) {
                errs.push(FieldViolation::new("component", "dirac has no block law to compare against"));
            }
            if let Some(h) = horizon {
                if h < block_length {
                    errs.push(FieldViolation::new("horizon", "must be at least block_length"));
                }
            }
            if let Some(dec) = &decomposition {
                if dec.is_empty() {
                    errs.push(FieldViolation::new("decomposition", "must list at least one component"));
                }
                for d in dec {
                    if let Err(e) = d.validate() {
                        errs.push(FieldViolation::new("decomposition", e.to_string()));
                    } else if d.alphabet().len() != size || matches!(d, ComponentParams::Dirac) {
                        errs.push(FieldViolation::new(
                            "decomposition",
                            format!("{} cannot score blocks of {}", d.describe(), c.describe()),
                        ));
                    }
                }
            }
        }
    }

    if kind == ExperimentKind::Decide {
        if let Some(c) = &component {
            match problem.build(c) {
                Ok(p) if p.outcomes() != c.alphabet().len() => errs.push(FieldViolation::new(
                    "problem",
                    format!("payoff table has {} outcome rows for {} symbols", p.outcomes(), c.alphabet().len()),
                )),
                Ok(_) => {}
                Err(e) => errs.push(FieldViolation::new("problem", e.to_string())),
            }
        }
    }

    if !errs.is_empty() {
        return Err(HarnessError::Validation(errs));
    }
    Ok(ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        kind,
        component: component.expect("validated"),
        predictor,
        horizon: horizon.expect("validated"),
        seeds: seeds.expect("validated"),
        epsilon,
        tail_fraction,
        record_threshold,
        bin_width,
        block_length,
        decomposition,
        problem,
        output,
    })
}

/// Parses `--seeds` lists such as `1..20`, `1-20`, `3,5,8` or `1..5,9`.
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>> {
    let bad = |msg: String| HarnessError::Validation(vec![FieldViolation::new("seeds", msg)]);
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let range = part.split_once("..=").or_else(|| part.split_once("..")).or_else(|| part.split_once('-'));
        match range {
            Some((a, b)) => {
                let lo: u64 = a.trim().parse().map_err(|_| bad(format!("bad range start in {part:?}")))?;
                let hi: u64 = b.trim().parse().map_err(|_| bad(format!("bad range end in {part:?}")))?;
                if lo > hi {
                    return Err(bad(format!("empty range {part:?}")));
                }
                seeds.extend(lo..=hi);
            }
            None => seeds.push(part.parse().map_err(|_| bad(format!("bad seed {part:?}")))?),
        }
    }
    let mut errs = Vec::new();
    check_seeds(&seeds, &mut errs);
    if errs.is_empty() {
        Ok(seeds)
    } else {
        Err(HarnessError::Validation(errs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WAR: &str = r#"{"schema_version":1,"kind":"merge","component":{"family":"war"},
        "predictor":{"kind":"war_bayes"},"horizon":1000,"seeds":[1,2,3]}"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(WAR).unwrap();
        assert_eq!(c.kind, ExperimentKind::Merge);
        assert_eq!((c.epsilon, c.tail_fraction, c.record_threshold), (0.05, 0.5, 0.2));
        assert_eq!(c.seeds, [1, 2, 3]);
    }

    #[test]
    fn every_violation_is_reported() {
        let err = parse_config(r#"{"schema_version":2,"kind":"merge","component":{"family":"war"},"horizon":0,"colour":1}"#)
            .unwrap_err();
        let mut fields = err.fields();
        fields.sort_unstable();
        assert_eq!(fields, ["colour", "horizon", "predictor", "schema_version", "seeds"]);
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seed_list("1..5").unwrap(), [1, 2, 3, 4, 5]);
        assert_eq!(parse_seed_list("1-3, 7").unwrap(), [1, 2, 3, 7]);
        assert_eq!(parse_seed_list("2..=3").unwrap(), [2, 3]);
        assert_eq!(parse_seed_list("").unwrap_err().fields(), ["seeds"]);
        assert_eq!(parse_seed_list("1,1").unwrap_err().fields(), ["seeds"]);
        assert!(parse_seed_list("x").is_err());
    }

    #[test]
    fn horizon_alias() {
        let c = parse_config(&WAR.replace("\"horizon\"", "\"N\"")).unwrap();
        assert_eq!(c.horizon, 1000);
    }
}
