//! Predictor specifications as written in experiment configs, and their
//! runtime counterpart.

use serde::{Deserialize, Serialize};

use crate::bayes_predictors::{
    Decomposition, ExchangeablePosterior, GridPosterior, MixturePosterior, SequentialPredictor,
    WarPosterior,
};
use crate::components::{ComponentParams, Simulator};
use crate::error::{Error, Result};
use crate::process_core::{Distribution, Symbol};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorSpec {
    /// The truth's own oracle predictive.
    Oracle,
    /// Uniform prior on the coin bias.
    Exchangeable,
    /// Finite decomposition; `prior` defaults to uniform.
    Mixture {
        components: Vec<ComponentParams>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prior: Option<Vec<f64>>,
    },
    /// Uniform prior on midpoints of a `step`-partition of `[0, 1]`.
    BernoulliGrid { step: f64 },
    /// Uniform prior on the `(p, q)` grid with the given spacing.
    HmmGrid { step: f64 },
    /// Uniform prior on the war parameter.
    WarBayes,
    /// Same prediction at every step.
    Constant { weights: Vec<f64> },
}

impl PredictorSpec {
    /// Alphabet size the predictor works over; `None` adapts to the truth.
    pub fn alphabet_size(&self) -> Option<usize> {
        match self {
            Self::Oracle => None,
            Self::Exchangeable | Self::BernoulliGrid { .. } | Self::HmmGrid { .. } => Some(2),
            Self::WarBayes => Some(3),
            Self::Mixture { components, .. } => components.first().map(|c| c.alphabet().len()),
            Self::Constant { weights } => Some(weights.len()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Oracle => "oracle".into(),
            Self::Exchangeable => "exchangeable".into(),
            Self::Mixture { components, .. } => format!("mixture({} components)", components.len()),
            Self::BernoulliGrid { step } => format!("bernoulli_grid(step={step})"),
            Self::HmmGrid { step } => format!("hmm_grid(step={step})"),
            Self::WarBayes => "war_bayes".into(),
            Self::Constant { weights } => format!("constant({weights:?})"),
        }
    }

    /// Fails when the predictor cannot score outcomes of `truth`.
    pub fn check_compatible(&self, truth: &ComponentParams) -> Result<()> {
        let truth_size = truth.alphabet().len();
        match self.alphabet_size() {
            Some(size) if size != truth_size => Err(Error::Config(format!(
                "predictor {} works over {size} symbols but component {} emits {truth_size}",
                self.describe(),
                truth.family()
            ))),
            _ => Ok(()),
        }
    }
}

/// Runtime predictor built from a [`PredictorSpec`].
#[derive(Debug, Clone)]
pub enum Predictor {
    Oracle,
    Exchangeable(ExchangeablePosterior),
    Mixture(MixturePosterior),
    Grid(GridPosterior),
    War(WarPosterior),
    Constant(Distribution),
}

impl Predictor {
    pub fn build(spec: &PredictorSpec) -> Result<Self> {
        Ok(match spec {
            PredictorSpec::Oracle => Self::Oracle,
            PredictorSpec::Exchangeable => Self::Exchangeable(ExchangeablePosterior::new()),
            PredictorSpec::Mixture { components, prior } => {
                let dec = Decomposition::from_params(components, prior.clone())?;
                Self::Mixture(MixturePosterior::new(&dec)?)
            }
            PredictorSpec::BernoulliGrid { step } => {
                Self::Mixture(MixturePosterior::new(&Decomposition::bernoulli_grid(*step)?)?)
            }
            PredictorSpec::HmmGrid { step } => Self::Grid(GridPosterior::uniform(*step)?),
            PredictorSpec::WarBayes => Self::War(WarPosterior::new()),
            PredictorSpec::Constant { weights } => Self::Constant(Distribution::new(weights.clone())?),
        })
    }

    pub fn is_oracle(&self) -> bool {
        matches!(self, Self::Oracle)
    }

    /// Next-period predictive; the oracle variant defers to `truth`.
    pub fn predictive(&self, truth: &mut Simulator) -> Distribution {
        match self {
            Self::Oracle => truth.oracle_predict(),
            Self::Exchangeable(p) => p.predictive(),
            Self::Mixture(p) => p.predictive(),
            Self::Grid(p) => p.predictive(),
            Self::War(p) => p.predictive(),
            Self::Constant(d) => d.clone(),
        }
    }

    pub fn observe(&mut self, symbol: Symbol) -> Result<()> {
        match self {
            Self::Oracle | Self::Constant(_) => Ok(()),
            Self::Exchangeable(p) => p.observe(symbol),
            Self::Mixture(p) => p.observe(symbol),
            Self::Grid(p) => p.observe(symbol),
            Self::War(p) => p.observe(symbol),
        }
    }
}
