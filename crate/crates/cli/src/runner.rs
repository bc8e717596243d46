//! Executes validated configs and writes their artifacts.
//!
//! Every kind writes `summary.json` next to its per-seed CSV files. Seeds run
//! on a rayon pool sized by `ERGOLEARN_THREADS` (unset or `0` = one worker
//! per core); results are gathered in seed order before anything is written.

use std::path::{Path, PathBuf};

use ergolearn::components::{ComponentLaw, ComponentParams, Simulator};
use ergolearn::decisions::{epsilon_optimality_gap, DecisionProblem, SeedGap};
use ergolearn::empirical::{block_frequencies, block_rows, identify_component, max_gap_to_law, Identification};
use ergolearn::merging_lab::{
    dirac_witness_experiment, run_calibration, run_merging_experiment, CalibrationReport, MergingReport,
    RecordTime,
};
use ergolearn::bayes_predictors::Decomposition;
use ergolearn::predictor::PredictorSpec;
use ergolearn::rng::PRNG_ALGORITHM;
use ergolearn::{MergeVerdict, LIBRARY_VERSION};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind, SCHEMA_VERSION};
use crate::error::{FieldViolation, HarnessError, Result};
use crate::output::{fmt17, write_json, Csv};

pub const THREADS_ENV: &str = "ERGOLEARN_THREADS";
pub const SUMMARY_FILE: &str = "summary.json";

const THRESHOLD_NOTE: &str =
    "epsilon, tail_fraction and record_threshold are finite-horizon surrogate choices; no merging rate is implied";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryMetadata {
    /// The validated config with defaults filled in and `output` removed.
    pub config: ExperimentConfig,
    pub prng: String,
    pub library_version: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedMerge {
    pub seed: u64,
    pub trace: String,
    pub final_cesaro_mean: f64,
    pub record_times: Vec<RecordTime>,
    pub verdict: MergeVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeSummary {
    pub weak_count: usize,
    pub strong_count: usize,
    pub median_final_cesaro_mean: f64,
    pub runs: Vec<SeedMerge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedCalibration {
    pub seed: u64,
    pub table: String,
    pub report: CalibrationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFrequencies {
    pub seed: u64,
    pub tables: Vec<String>,
    /// `max_gap_by_length[k−1]` is the largest gap over blocks of length `k`.
    pub max_gap_by_length: Vec<f64>,
    pub max_gap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identification: Option<Identification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct DecisionSummary {
    pub problem: DecisionProblem,
    pub belief: PredictorSpec,
    pub truth: ComponentParams,
    pub N: usize,
    pub seeds: Vec<u64>,
    pub V_belief: f64,
    pub V_oracle: f64,
    pub gap: f64,
    pub mean_final_cesaro: f64,
    pub per_seed: Vec<SeedGap>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub metadata: SummaryMetadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merge: Option<MergeSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<Vec<SeedCalibration>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Vec<SeedFrequencies>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<DecisionSummary>,
}

impl Summary {
    fn new(config: &ExperimentConfig) -> Self {
        let mut config = config.clone();
        config.output = None;
        Self {
            schema_version: SCHEMA_VERSION,
            kind: config.kind,
            metadata: SummaryMetadata {
                config,
                prng: PRNG_ALGORITHM.to_string(),
                library_version: LIBRARY_VERSION.to_string(),
                note: THRESHOLD_NOTE.to_string(),
            },
            merge: None,
            calibration: None,
            frequencies: None,
            decision: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Summary,
    /// Every file written, summary last.
    pub files: Vec<PathBuf>,
}

/// Worker pool honouring `ERGOLEARN_THREADS`.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse::<usize>().map_err(|_| {
            HarnessError::Validation(vec![FieldViolation::new(
                THREADS_ENV,
                format!("expected a non-negative integer, got {v:?}"),
            )])
        })?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start worker pool: {e}")))
}

/// Runs `config` and writes its artifacts under `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutcome> {
    let pool = worker_pool()?;
    pool.install(|| {
        let mut summary = Summary::new(config);
        let mut files = match config.kind {
            ExperimentKind::Merge | ExperimentKind::DiracWitness => run_merge(config, out_dir, &mut summary)?,
            ExperimentKind::Calibrate => run_calibrate(config, out_dir, &mut summary)?,
            ExperimentKind::Freq => run_freq(config, out_dir, &mut summary)?,
            ExperimentKind::Decide => run_decide(config, out_dir, &mut summary)?,
        };
        let path = out_dir.join(SUMMARY_FILE);
        write_json(&path, &summary)?;
        files.push(path);
        Ok(RunOutcome { summary, files })
    })
}

/// Median of a nonempty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

/// `n,d_n,cesaro_mean` with `n` counted from 0.
pub fn trace_csv(report: &MergingReport) -> Csv {
    let mut csv = Csv::new(&["n", "d_n", "cesaro_mean"]);
    for (n, (d, m)) in report.distances.values().iter().zip(report.distances.running_means()).enumerate() {
        csv.row(&[n.to_string(), fmt17(*d), fmt17(*m)]);
    }
    csv
}

fn run_merge(config: &ExperimentConfig, out_dir: &Path, summary: &mut Summary) -> Result<Vec<PathBuf>> {
    let params = config.merge_params()?;
    let predictor = config.predictor()?;
    let reports = config
        .seeds
        .par_iter()
        .map(|&seed| match config.kind {
            ExperimentKind::DiracWitness => dirac_witness_experiment(config.horizon, seed, params),
            _ => run_merging_experiment(&config.component, predictor, config.horizon, seed, params),
        })
        .collect::<ergolearn::Result<Vec<_>>>()?;

    let mut files = Vec::new();
    let mut runs = Vec::new();
    for report in &reports {
        let seed = report.metadata.seed;
        let name = format!("trace_seed_{seed}.csv");
        let path = out_dir.join(&name);
        trace_csv(report).write(&path)?;
        files.push(path);
        runs.push(SeedMerge {
            seed,
            trace: name,
            final_cesaro_mean: report.final_cesaro_mean(),
            record_times: report.record_times.clone(),
            verdict: report.verdict,
        });
    }
    let finals: Vec<f64> = runs.iter().map(|r| r.final_cesaro_mean).collect();
    summary.merge = Some(MergeSummary {
        weak_count: runs.iter().filter(|r| r.verdict.weak).count(),
        strong_count: runs.iter().filter(|r| r.verdict.strong).count(),
        median_final_cesaro_mean: median(&finals),
        runs,
    });
    Ok(files)
}

fn run_calibrate(config: &ExperimentConfig, out_dir: &Path, summary: &mut Summary) -> Result<Vec<PathBuf>> {
    let predictor = config.predictor()?;
    let reports = config
        .seeds
        .par_iter()
        .map(|&seed| run_calibration(&config.component, predictor, config.horizon, seed, config.bin_width))
        .collect::<ergolearn::Result<Vec<_>>>()?;
    let alphabet = config.component.alphabet();
    let mut files = Vec::new();
    let mut runs = Vec::new();
    for (&seed, report) in config.seeds.iter().zip(reports) {
        let mut csv = Csv::new(&["symbol", "lower", "upper", "count", "mean_predicted", "empirical_frequency", "low_confidence"]);
        for s in &report.symbols {
            for b in &s.bins {
                csv.row(&[
                    alphabet.label(s.symbol).unwrap_or("?").to_string(),
                    fmt17(b.lower),
                    fmt17(b.upper),
                    b.count.to_string(),
                    fmt17(b.mean_predicted),
                    fmt17(b.empirical_frequency),
                    b.low_confidence.to_string(),
                ]);
            }
        }
        let name = format!("calibration_seed_{seed}.csv");
        let path = out_dir.join(&name);
        csv.write(&path)?;
        files.push(path);
        runs.push(SeedCalibration { seed, table: name, report });
    }
    summary.calibration = Some(runs);
    Ok(files)
}

struct FreqRun {
    tables: Vec<(String, Csv)>,
    record: SeedFrequencies,
}

fn freq_one_seed(config: &ExperimentConfig, dec: Option<&Decomposition>, seed: u64) -> ergolearn::Result<FreqRun> {
    let mut sim = Simulator::new(&config.component, seed)?;
    let path = sim.sample_path(config.horizon);
    let law = sim.component();
    let alphabet = law.alphabet();
    let mut tables = Vec::new();
    let mut gaps = Vec::new();
    let mut identification = None;
    for k in 1..=config.block_length {
        let table = block_frequencies(&path, &alphabet, k)?;
        gaps.push(max_gap_to_law(&table, law)?);
        let mut csv = Csv::new(&["block", "frequency", "exact", "gap"]);
        for row in block_rows(&table, law)? {
            csv.row(&[row.block, fmt17(row.frequency), fmt17(row.exact), fmt17(row.gap)]);
        }
        tables.push((format!("freq_seed_{seed}_k{k}.csv"), csv));
        if k == config.block_length {
            identification = dec.map(|d| identify_component(&table, d)).transpose()?;
        }
    }
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    let record = SeedFrequencies {
        seed,
        tables: tables.iter().map(|(n, _)| n.clone()).collect(),
        max_gap_by_length: gaps,
        max_gap,
        identification,
    };
    Ok(FreqRun { tables, record })
}

fn run_freq(config: &ExperimentConfig, out_dir: &Path, summary: &mut Summary) -> Result<Vec<PathBuf>> {
    let dec = config
        .decomposition
        .as_ref()
        .map(|d| Decomposition::from_params(d, None))
        .transpose()?;
    let runs = config
        .seeds
        .par_iter()
        .map(|&seed| freq_one_seed(config, dec.as_ref(), seed))
        .collect::<ergolearn::Result<Vec<_>>>()?;
    let mut files = Vec::new();
    let mut records = Vec::new();
    for run in runs {
        for (name, csv) in &run.tables {
            let path = out_dir.join(name);
            csv.write(&path)?;
            files.push(path);
        }
        records.push(run.record);
    }
    summary.frequencies = Some(records);
    Ok(files)
}

fn run_decide(config: &ExperimentConfig, out_dir: &Path, summary: &mut Summary) -> Result<Vec<PathBuf>> {
    let belief = config.predictor()?;
    let problem = config.problem.build(&config.component)?;
    let report = epsilon_optimality_gap(belief, &config.component, &problem, config.horizon, &config.seeds)?;
    let mut csv = Csv::new(&["seed", "v_belief", "v_oracle", "gap", "final_cesaro_mean"]);
    for s in &report.per_seed {
        csv.row(&[s.seed.to_string(), fmt17(s.v_belief), fmt17(s.v_oracle), fmt17(s.gap), fmt17(s.final_cesaro_mean)]);
    }
    let path = out_dir.join("decision.csv");
    csv.write(&path)?;
    summary.decision = Some(DecisionSummary {
        problem,
        belief: belief.clone(),
        truth: config.component.clone(),
        N: config.horizon,
        seeds: config.seeds.clone(),
        V_belief: report.v_belief,
        V_oracle: report.v_oracle,
        gap: report.gap,
        mean_final_cesaro: report.mean_final_cesaro,
        per_seed: report.per_seed,
    });
    Ok(vec![path])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub schema_version: u32,
    pub component: ComponentParams,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    pub paths: Vec<String>,
    pub prng: String,
    pub library_version: String,
}

/// Writes one `n,symbol` path per seed plus `simulation.json`.
pub fn simulate(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let pool = worker_pool()?;
    pool.install(|| {
        let alphabet = config.component.alphabet();
        let paths = config
            .seeds
            .par_iter()
            .map(|&seed| Ok(Simulator::new(&config.component, seed)?.sample_path(config.horizon)))
            .collect::<ergolearn::Result<Vec<_>>>()?;
        let mut files = Vec::new();
        let mut names = Vec::new();
        for (&seed, path) in config.seeds.iter().zip(paths) {
            let mut csv = Csv::new(&["n", "symbol"]);
            for (n, s) in path.iter().enumerate() {
                csv.row(&[n.to_string(), alphabet.label(*s).unwrap_or("?").to_string()]);
            }
            let name = format!("path_seed_{seed}.csv");
            let file = out_dir.join(&name);
            csv.write(&file)?;
            files.push(file);
            names.push(name);
        }
        let summary = SimulationSummary {
            schema_version: SCHEMA_VERSION,
            component: config.component.clone(),
            horizon: config.horizon,
            seeds: config.seeds.clone(),
            paths: names,
            prng: PRNG_ALGORITHM.to_string(),
            library_version: LIBRARY_VERSION.to_string(),
        };
        let file = out_dir.join("simulation.json");
        write_json(&file, &summary)?;
        files.push(file);
        Ok(files)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd_samples() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
