//! Truth-versus-Bayes prediction races.
//!
//! A race draws one path from a fixed ergodic component. Before each outcome
//! `ζ_n` is revealed, the Bayesian predictive and the oracle predictive are
//! compared in sup norm; then both are advanced on the realized symbol. The
//! resulting distances are summarized by their Cesàro means, the times at
//! which they spike, and a finite-horizon weak/strong merging verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::components::{ComponentParams, Simulator};
use crate::error::{Error, Result};
use crate::predictor::{Predictor, PredictorSpec};
use crate::process_core::{
    cesaro_means, full_density_limit_test, sup_distance, CesaroTrace, Distribution, MergeVerdict,
    Symbol,
};
use crate::rng::PRNG_ALGORITHM;
use crate::LIBRARY_VERSION;

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;
pub const DEFAULT_RECORD_THRESHOLD: f64 = 0.2;

/// Slack applied when comparing distances against a record threshold.
pub const RECORD_TOLERANCE: f64 = 1e-9;

/// Bins with fewer samples are flagged as low confidence.
pub const CALIBRATION_MIN_SAMPLES: usize = 30;

/// Thresholds of the finite-horizon verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeParams {
    pub epsilon: f64,
    pub tail_fraction: f64,
    pub record_threshold: f64,
}

impl MergeParams {
    pub fn new(epsilon: f64, tail_fraction: f64, record_threshold: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail_fraction must lie in (0, 1), got {tail_fraction}"
            )));
        }
        if !(record_threshold > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "record_threshold must be positive, got {record_threshold}"
            )));
        }
        Ok(Self { epsilon, tail_fraction, record_threshold })
    }
}

/// One step of a race, before the predictors see `symbol`.
#[derive(Debug)]
pub struct StepRecord<'a> {
    pub n: usize,
    pub belief: &'a Distribution,
    pub oracle: &'a Distribution,
    pub symbol: Symbol,
    pub distance: f64,
}

/// Runs `horizon` steps of `predictor` against a path of `truth` drawn with
/// `seed`, calling `visit` once per step.
pub fn race<F>(
    truth: &ComponentParams,
    predictor: &PredictorSpec,
    horizon: usize,
    seed: u64,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&StepRecord<'_>) -> Result<()>,
{
    predictor.check_compatible(truth)?;
    let mut sim = Simulator::new(truth, seed)?;
    let mut belief_model = Predictor::build(predictor)?;
    for n in 0..horizon {
        let oracle = sim.oracle_predict();
        let belief = if belief_model.is_oracle() {
            oracle.clone()
        } else {
            belief_model.predictive(&mut sim)
        };
        let distance = sup_distance(&belief, &oracle)?;
        let symbol = sim.step();
        visit(&StepRecord { n, belief: &belief, oracle: &oracle, symbol, distance })?;
        belief_model.observe(symbol)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub component: ComponentParams,
    pub predictor: PredictorSpec,
    pub seed: u64,
    pub params: MergeParams,
    pub prng: String,
    pub library_version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordTime {
    pub n: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergingReport {
    pub horizon: usize,
    pub distances: CesaroTrace,
    /// Steps whose distance reached `params.record_threshold`.
    pub record_times: Vec<RecordTime>,
    pub verdict: MergeVerdict,
    pub metadata: ReportMetadata,
}

impl MergingReport {
    fn from_distances(values: Vec<f64>, metadata: ReportMetadata) -> Result<Self> {
        let distances = cesaro_means(&values);
        let params = metadata.params;
        let verdict = full_density_limit_test(&distances, params.epsilon, params.tail_fraction)?;
        let record_times = values
            .iter()
            .enumerate()
            .filter(|(_, d)| **d >= params.record_threshold - RECORD_TOLERANCE)
            .map(|(n, d)| RecordTime { n, distance: *d })
            .collect();
        Ok(Self { horizon: values.len(), distances, record_times, verdict, metadata })
    }

    pub fn final_cesaro_mean(&self) -> f64 {
        self.distances.final_mean().unwrap_or(0.0)
    }

    /// Running mean after the first `n` steps (`1 ≤ n ≤ horizon`).
    pub fn cesaro_mean_at(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.distances.running_means().get(i).copied())
    }
}

pub fn run_merging_experiment(
    truth: &ComponentParams,
    predictor: &PredictorSpec,
    horizon: usize,
    seed: u64,
    params: MergeParams,
) -> Result<MergingReport> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let mut values = Vec::with_capacity(horizon);
    race(truth, predictor, horizon, seed, |step| {
        values.push(step.distance);
        Ok(())
    })?;
    let metadata = ReportMetadata {
        component: truth.clone(),
        predictor: predictor.clone(),
        seed,
        params,
        prng: PRNG_ALGORITHM.to_string(),
        library_version: LIBRARY_VERSION.to_string(),
    };
    MergingReport::from_distances(values, metadata)
}

/// One report per seed, in seed order; seeds run in parallel.
pub fn run_merging_panel(
    truth: &ComponentParams,
    predictor: &PredictorSpec,
    horizon: usize,
    seeds: &[u64],
    params: MergeParams,
) -> Result<Vec<MergingReport>> {
    seeds
        .par_iter()
        .map(|&seed| run_merging_experiment(truth, predictor, horizon, seed, params))
        .collect()
}

/// Steps `n` with `d_n ≥ threshold − 1e-9`.
pub fn detect_record_times(report: &MergingReport, threshold: f64) -> Vec<usize> {
    report
        .distances
        .values()
        .iter()
        .enumerate()
        .filter(|(_, d)| **d >= threshold - RECORD_TOLERANCE)
        .map(|(n, _)| n)
        .collect()
}

/// Fair-coin truth under the decomposition into single realizations: the
/// oracle knows the next outcome while the Bayesian prediction stays at
/// `(1/2, 1/2)`, so every distance is exactly `1/2`.
pub fn dirac_witness_experiment(horizon: usize, seed: u64, params: MergeParams) -> Result<MergingReport> {
    run_merging_experiment(
        &ComponentParams::Dirac,
        &PredictorSpec::Constant { weights: vec![0.5, 0.5] },
        horizon,
        seed,
        params,
    )
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationBin {
    pub lower: f64,
    pub upper: f64,
    /// Steps whose predicted probability fell in this bin.
    pub count: usize,
    pub mean_predicted: f64,
    pub empirical_frequency: f64,
    pub low_confidence: bool,
}

impl CalibrationBin {
    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolCalibration {
    pub symbol: Symbol,
    /// Nonempty bins in increasing order.
    pub bins: Vec<CalibrationBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub bin_width: f64,
    pub samples: usize,
    pub symbols: Vec<SymbolCalibration>,
}

/// `j·w` rounded to 12 decimals so that e.g. `3 × 0.1` reads as `0.3`.
fn bin_edge(j: usize, w: f64) -> f64 {
    (j as f64 * w * 1e12).round() / 1e12
}

/// Streaming form of [`calibration_test`].
#[derive(Debug, Clone)]
pub struct CalibrationAccumulator {
    bin_width: f64,
    bins: usize,
    samples: usize,
    // [symbol][bin] -> (count, hits, predicted sum)
    cells: Vec<Vec<(usize, usize, f64)>>,
}

impl CalibrationAccumulator {
    pub fn new(alphabet_size: usize, bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0 && bin_width <= 1.0) {
            return Err(Error::InvalidParameter(format!("bin_width {bin_width} outside (0, 1]")));
        }
        let bins = ((1.0 / bin_width) - 1e-9).ceil().max(1.0) as usize;
        Ok(Self { bin_width, bins, samples: 0, cells: vec![vec![(0, 0, 0.0); bins]; alphabet_size] })
    }

    fn bin_of(&self, p: f64) -> usize {
        // The small offset keeps values such as 0.3 = 3 × 0.1 in the bin that
        // starts at them despite binary rounding.
        ((p / self.bin_width + 1e-9).floor() as usize).min(self.bins - 1)
    }

    pub fn add(&mut self, predictive: &Distribution, realized: Symbol) -> Result<()> {
        if predictive.len() != self.cells.len() {
            return Err(Error::AlphabetMismatch { left: predictive.len(), right: self.cells.len() });
        }
        for (symbol, &p) in predictive.weights().iter().enumerate() {
            let j = self.bin_of(p);
            let cell = &mut self.cells[symbol][j];
            cell.0 += 1;
            cell.1 += usize::from(symbol == realized);
            cell.2 += p;
        }
        self.samples += 1;
        Ok(())
    }

    pub fn finish(&self) -> CalibrationReport {
        let symbols = self
            .cells
            .iter()
            .enumerate()
            .map(|(symbol, cells)| SymbolCalibration {
                symbol,
                bins: cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.0 > 0)
                    .map(|(j, &(count, hits, sum))| CalibrationBin {
                        lower: bin_edge(j, self.bin_width),
                        upper: bin_edge(j + 1, self.bin_width).min(1.0),
                        count,
                        mean_predicted: sum / count as f64,
                        empirical_frequency: hits as f64 / count as f64,
                        low_confidence: count < CALIBRATION_MIN_SAMPLES,
                    })
                    .collect(),
            })
            .collect();
        CalibrationReport { bin_width: self.bin_width, samples: self.samples, symbols }
    }
}

/// Bins each step's predicted probability of every symbol into
/// `[j·w, (j+1)·w)` (the last bin is closed) and reports how often the symbol
/// was realized within each bin.
pub fn calibration_test(
    pairs: &[(Distribution, Symbol)],
    bin_width: f64,
) -> Result<CalibrationReport> {
    let size = pairs.first().map_or(2, |(d, _)| d.len());
    let mut acc = CalibrationAccumulator::new(size, bin_width)?;
    for (d, s) in pairs {
        acc.add(d, *s)?;
    }
    Ok(acc.finish())
}

/// Calibration of `predictor`'s forecasts along one path of `truth`.
pub fn run_calibration(
    truth: &ComponentParams,
    predictor: &PredictorSpec,
    horizon: usize,
    seed: u64,
    bin_width: f64,
) -> Result<CalibrationReport> {
    let mut acc = CalibrationAccumulator::new(truth.alphabet().len(), bin_width)?;
    race(truth, predictor, horizon, seed, |step| acc.add(step.belief, step.symbol))?;
    Ok(acc.finish())
}
