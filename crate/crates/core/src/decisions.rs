//! Finite decision problems scored by average payoff over a horizon.
//!
//! Actions do not affect the process and payoffs add up across periods, so
//! choosing `argmax_d Σ_a p(a)·r(a, d)` myopically under a belief is optimal
//! for the horizon-`N` average under that belief. Comparing the greedy rule
//! under the truth's oracle with the greedy rule under a Bayesian belief on
//! the same paths measures how far the belief is from optimal.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::components::{ComponentParams, Simulator};
use crate::error::{Error, Result};
use crate::merging_lab::race;
use crate::predictor::PredictorSpec;
use crate::process_core::{Alphabet, Distribution, Symbol};

/// Actions `D` and payoffs `r(a, d) ∈ [0, 1]`, stored as `payoff[a][d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionProblem {
    actions: Vec<String>,
    payoff: Vec<Vec<f64>>,
}

impl DecisionProblem {
    pub fn new(actions: Vec<String>, payoff: Vec<Vec<f64>>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidParameter("decision problem needs an action".into()));
        }
        if payoff.len() < 2 {
            return Err(Error::InvalidParameter("payoff table needs a row per outcome".into()));
        }
        for (a, row) in payoff.iter().enumerate() {
            if row.len() != actions.len() {
                return Err(Error::InvalidParameter(format!(
                    "payoff row {a} has {} entries for {} actions",
                    row.len(),
                    actions.len()
                )));
            }
            if let Some(r) = row.iter().find(|r| !(0.0..=1.0).contains(*r)) {
                return Err(Error::InvalidParameter(format!("payoff {r} outside [0, 1]")));
            }
        }
        Ok(Self { actions, payoff })
    }

    /// One action per outcome; payoff 1 for naming the realized outcome.
    pub fn matching(alphabet: &Alphabet) -> Self {
        let n = alphabet.len();
        let payoff = (0..n).map(|a| (0..n).map(|d| f64::from(u8::from(a == d))).collect()).collect();
        Self { actions: alphabet.symbols().to_vec(), payoff }
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn outcomes(&self) -> usize {
        self.payoff.len()
    }

    pub fn payoff(&self, outcome: Symbol, action: usize) -> f64 {
        self.payoff[outcome][action]
    }

    pub fn expected_payoff(&self, predictive: &Distribution, action: usize) -> f64 {
        predictive.weights().iter().zip(&self.payoff).map(|(p, row)| p * row[action]).sum()
    }

    /// Best response to `predictive`; ties go to the lowest action index.
    pub fn greedy_action(&self, predictive: &Distribution) -> usize {
        let mut best = 0;
        let mut best_value = self.expected_payoff(predictive, 0);
        for d in 1..self.actions.len() {
            let v = self.expected_payoff(predictive, d);
            if v > best_value {
                best = d;
                best_value = v;
            }
        }
        best
    }

    /// `r ↦ scale·r + shift`, without the `[0, 1]` range check.
    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        Self {
            actions: self.actions.clone(),
            payoff: self
                .payoff
                .iter()
                .map(|row| row.iter().map(|r| scale * r + shift).collect())
                .collect(),
        }
    }
}

/// Rule mapping observed histories to actions.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Myopic best response to a predictor.
    Greedy { problem: DecisionProblem, predictor: PredictorSpec },
    /// Explicit action for every history up to the evaluation horizon.
    Table { problem: DecisionProblem, actions: BTreeMap<Vec<Symbol>, usize> },
}

impl Strategy {
    pub fn problem(&self) -> &DecisionProblem {
        match self {
            Self::Greedy { problem, .. } | Self::Table { problem, .. } => problem,
        }
    }
}

pub fn greedy_strategy(problem: &DecisionProblem, predictor: &PredictorSpec) -> Result<Strategy> {
    if let Some(size) = predictor.alphabet_size() {
        if size != problem.outcomes() {
            return Err(Error::AlphabetMismatch { left: size, right: problem.outcomes() });
        }
    }
    Ok(Strategy::Greedy { problem: problem.clone(), predictor: predictor.clone() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VnEstimate {
    pub mean: f64,
    pub per_seed: Vec<f64>,
}

fn average_over_seeds(per_seed: &[f64]) -> f64 {
    per_seed.iter().sum::<f64>() / per_seed.len() as f64
}

fn check_run(problem: &DecisionProblem, truth: &ComponentParams, horizon: usize, seeds: &[u64]) -> Result<()> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    if seeds.is_empty() {
        return Err(Error::Config("at least one seed is required".into()));
    }
    let size = truth.alphabet().len();
    if size != problem.outcomes() {
        return Err(Error::AlphabetMismatch { left: problem.outcomes(), right: size });
    }
    Ok(())
}

fn average_payoff_on_path(strategy: &Strategy, truth: &ComponentParams, horizon: usize, seed: u64) -> Result<f64> {
    let mut total = 0.0;
    match strategy {
        Strategy::Greedy { problem, predictor } => {
            race(truth, predictor, horizon, seed, |step| {
                total += problem.payoff(step.symbol, problem.greedy_action(step.belief));
                Ok(())
            })?;
        }
        Strategy::Table { problem, actions } => {
            let mut sim = Simulator::new(truth, seed)?;
            let mut history = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                let action = *actions.get(&history).ok_or_else(|| {
                    Error::Config(format!("strategy table has no action for history {history:?}"))
                })?;
                let symbol = sim.step();
                total += problem.payoff(symbol, action);
                history.push(symbol);
            }
        }
    }
    Ok(total / horizon as f64)
}

/// Seeded Monte Carlo estimate of `V_N(f) = E[(1/N) Σ_{n<N} r(a_n, f(a_0..a_{n-1}))]`.
pub fn evaluate_vn(strategy: &Strategy, truth: &ComponentParams, horizon: usize, seeds: &[u64]) -> Result<VnEstimate> {
    check_run(strategy.problem(), truth, horizon, seeds)?;
    let per_seed = seeds
        .par_iter()
        .map(|&seed| average_payoff_on_path(strategy, truth, horizon, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(VnEstimate { mean: average_over_seeds(&per_seed), per_seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedGap {
    pub seed: u64,
    pub v_belief: f64,
    pub v_oracle: f64,
    pub gap: f64,
    /// Final Cesàro mean of the belief-vs-oracle distance on the same path.
    pub final_cesaro_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub v_belief: f64,
    pub v_oracle: f64,
    /// `v_oracle − v_belief`.
    pub gap: f64,
    /// Seed average of the per-path final Cesàro means.
    pub mean_final_cesaro: f64,
    pub per_seed: Vec<SeedGap>,
}

fn paired_run(
    belief: &PredictorSpec,
    truth: &ComponentParams,
    problem: &DecisionProblem,
    horizon: usize,
    seed: u64,
) -> Result<SeedGap> {
    let (mut belief_total, mut oracle_total, mut distance_total) = (0.0, 0.0, 0.0);
    race(truth, belief, horizon, seed, |step| {
        belief_total += problem.payoff(step.symbol, problem.greedy_action(step.belief));
        oracle_total += problem.payoff(step.symbol, problem.greedy_action(step.oracle));
        distance_total += step.distance;
        Ok(())
    })?;
    let n = horizon as f64;
    let (v_belief, v_oracle) = (belief_total / n, oracle_total / n);
    Ok(SeedGap {
        seed,
        v_belief,
        v_oracle,
        gap: v_oracle - v_belief,
        final_cesaro_mean: distance_total / n,
    })
}

/// `V_N(greedy under oracle) − V_N(greedy under belief)`, both arms replaying
/// the same paths.
pub fn epsilon_optimality_gap(
    belief: &PredictorSpec,
    truth: &ComponentParams,
    problem: &DecisionProblem,
    horizon: usize,
    seeds: &[u64],
) -> Result<GapReport> {
    check_run(problem, truth, horizon, seeds)?;
    belief.check_compatible(truth)?;
    let per_seed = seeds
        .par_iter()
        .map(|&seed| paired_run(belief, truth, problem, horizon, seed))
        .collect::<Result<Vec<_>>>()?;
    let v_belief = average_over_seeds(&per_seed.iter().map(|s| s.v_belief).collect::<Vec<_>>());
    let v_oracle = average_over_seeds(&per_seed.iter().map(|s| s.v_oracle).collect::<Vec<_>>());
    let mean_final_cesaro =
        average_over_seeds(&per_seed.iter().map(|s| s.final_cesaro_mean).collect::<Vec<_>>());
    Ok(GapReport { v_belief, v_oracle, gap: v_oracle - v_belief, mean_final_cesaro, per_seed })
}

/// Greedy action sequence along one path.
pub fn greedy_actions(
    problem: &DecisionProblem,
    predictor: &PredictorSpec,
    truth: &ComponentParams,
    horizon: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let mut actions = Vec::with_capacity(horizon);
    race(truth, predictor, horizon, seed, |step| {
        actions.push(problem.greedy_action(step.belief));
        Ok(())
    })?;
    Ok(actions)
}
