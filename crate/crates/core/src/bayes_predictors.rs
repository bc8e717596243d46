//! Bayesian predictive distributions for decompositions `μ = Σ_θ λ(θ) μ_θ`.
//!
//! The posterior weight of a parameter is proportional to
//! `λ(θ) · μ_θ(a_0, …, a_{n-1})` and the predictive is the posterior mixture of
//! the components' own conditionals `μ_θ(· | a_0, …, a_{n-1})`. Likelihoods
//! are accumulated in log space; each component's conditional comes from a
//! forward filter so histories of any length are handled in one pass.
//!
//! Three families have dedicated posteriors: the uniform-prior exchangeable
//! coin ([`ExchangeablePosterior`]), a gridded hidden Markov decomposition
//! ([`GridPosterior`]) and the war process with a uniform prior on its
//! parameter ([`WarPosterior`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::components::{
    hmm_filter_predict_g, hmm_filter_update, war, war_truncated_propagate,
    war_truncated_stationary, Component, ComponentLaw, ComponentParams, HiddenBelief,
    HMM_STATIONARY, WAR_GAP_TRUNCATION,
};
use crate::error::{Error, Result};
use crate::process_core::{Distribution, Symbol};
use crate::rng::PathRng;

/// Incremental predictor: predict the next symbol, then observe it.
pub trait SequentialPredictor {
    fn predictive(&self) -> Distribution;
    fn observe(&mut self, symbol: Symbol) -> Result<()>;
}

// ---------------------------------------------------------------------------
// Exchangeable coin with uniform prior on θ
// ---------------------------------------------------------------------------

/// Counts `(n, d)` of observations and ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeablePosterior {
    n: u64,
    d: u64,
}

impl ExchangeablePosterior {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(n: u64, d: u64) -> Result<Self> {
        if d > n {
            return Err(Error::InvalidParameter(format!("ones count {d} exceeds n={n}")));
        }
        Ok(Self { n, d })
    }

    pub fn counts(&self) -> (u64, u64) {
        (self.n, self.d)
    }
}

/// `P(next = 1) = (d + 1) / (n + 2)`, the ratio of consecutive block
/// probabilities `1 / ((k+1)·C(k, d))` of the uniform-prior coin.
pub fn exchangeable_predictive(post: &ExchangeablePosterior) -> Distribution {
    let denom = (post.n + 2) as f64;
    let one = (post.d + 1) as f64 / denom;
    let zero = (post.n - post.d + 1) as f64 / denom;
    Distribution::from_exact(vec![zero, one])
}

impl SequentialPredictor for ExchangeablePosterior {
    fn predictive(&self) -> Distribution {
        exchangeable_predictive(self)
    }

    fn observe(&mut self, symbol: Symbol) -> Result<()> {
        match symbol {
            0 => self.n += 1,
            1 => {
                self.n += 1;
                self.d += 1;
            }
            _ => return Err(Error::InvalidSymbol { symbol, size: 2 }),
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Finite decompositions
// ---------------------------------------------------------------------------

/// Finite parameter set with prior weights and one component per parameter.
#[derive(Debug, Clone)]
pub struct Decomposition {
    labels: Vec<String>,
    components: Vec<Component>,
    prior: Distribution,
}

impl Decomposition {
    pub fn new(labels: Vec<String>, components: Vec<Component>, prior: Distribution) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("decomposition needs at least one component".into()));
        }
        if labels.len() != components.len() || prior.len() != components.len() {
            return Err(Error::InvalidParameter(format!(
                "{} labels, {} components and {} prior weights",
                labels.len(),
                components.len(),
                prior.len()
            )));
        }
        let size = components[0].alphabet().len();
        if let Some(c) = components.iter().find(|c| c.alphabet().len() != size) {
            return Err(Error::AlphabetMismatch { left: size, right: c.alphabet().len() });
        }
        Ok(Self { labels, components, prior })
    }

    /// Components built from parameter records; component `i` takes any
    /// random parameter from seed `i`. `prior = None` means uniform.
    pub fn from_params(params: &[ComponentParams], prior: Option<Vec<f64>>) -> Result<Self> {
        let components = params
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut rng = PathRng::new(i as u64, crate::rng::PATH_STREAM);
                Component::initialize(p, i as u64, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        let prior = match prior {
            Some(w) => Distribution::new(w)?,
            None => Distribution::uniform(params.len().max(1)),
        };
        let labels = params.iter().map(ComponentParams::describe).collect();
        Self::new(labels, components, prior)
    }

    pub fn bernoulli(thetas: &[f64], prior: Option<Vec<f64>>) -> Result<Self> {
        let params: Vec<_> = thetas.iter().map(|&theta| ComponentParams::Bernoulli { theta }).collect();
        Self::from_params(&params, prior)
    }

    /// Uniform prior on the midpoints `(i + 1/2)·step` of a partition of `[0, 1]`.
    pub fn bernoulli_grid(step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::InvalidParameter(format!("grid step {step} outside (0, 1]")));
        }
        let cells = (1.0 / step).round() as usize;
        let thetas: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) / cells as f64).collect();
        Self::bernoulli(&thetas, None)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn prior(&self) -> &Distribution {
        &self.prior
    }

    pub fn alphabet_size(&self) -> usize {
        self.components[0].alphabet().len()
    }
}

/// Observation-conditioned law `μ_θ(· | a_0, …, a_{n-1})` of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ComponentFilter {
    Bernoulli { theta: f64 },
    HiddenMarkov { p: f64, q: f64, belief: HiddenBelief },
    Markov { rows: Vec<Distribution>, stationary: Distribution, last: Option<Symbol> },
    /// Belief over the truncated gap, with `θ(1..=truncation)` known.
    War { theta: Vec<Symbol>, belief: Vec<f64> },
}

impl ComponentFilter {
    pub fn for_component(c: &Component) -> Result<Self> {
        Ok(match c {
            Component::Bernoulli(b) => Self::Bernoulli { theta: b.theta() },
            Component::HiddenMarkov(h) => {
                let (p, q) = h.params();
                Self::HiddenMarkov { p, q, belief: HMM_STATIONARY }
            }
            Component::Markov(m) => Self::Markov {
                rows: m.rows().to_vec(),
                stationary: m.stationary_distribution().clone(),
                last: None,
            },
            Component::War(w) => Self::War {
                theta: w.theta_table().materialized()[..WAR_GAP_TRUNCATION].to_vec(),
                belief: war_truncated_stationary(),
            },
            Component::Dirac(_) => {
                return Err(Error::Unsupported("dirac components have no predictive filter".into()))
            }
        })
    }

    fn war_emission(theta: &[Symbol], x: usize) -> Symbol {
        if x == 0 {
            war::W
        } else {
            theta[x - 1]
        }
    }

    pub fn predictive(&self) -> Distribution {
        match self {
            Self::Bernoulli { theta } => Distribution::from_exact(vec![1.0 - theta, *theta]),
            Self::HiddenMarkov { p, q, belief } => {
                let g = hmm_filter_predict_g(*belief, *p, *q);
                Distribution::from_exact(vec![1.0 - g, g])
            }
            Self::Markov { rows, stationary, last } => match last {
                Some(s) => rows[*s].clone(),
                None => stationary.clone(),
            },
            Self::War { theta, belief } => {
                let pred = war_truncated_propagate(belief);
                let mut masses = vec![0.0; 3];
                for (x, m) in pred.iter().enumerate() {
                    masses[Self::war_emission(theta, x)] += m;
                }
                Distribution::normalized(masses).expect("positive gap mass")
            }
        }
    }

    /// Conditions on `symbol` and returns its conditional probability.
    pub fn update(&mut self, symbol: Symbol) -> f64 {
        match self {
            Self::Bernoulli { theta } => {
                if symbol == 1 {
                    *theta
                } else {
                    1.0 - *theta
                }
            }
            Self::HiddenMarkov { p, q, belief } => {
                let (next, likelihood) = hmm_filter_update(*belief, symbol, *p, *q);
                *belief = next;
                likelihood
            }
            Self::Markov { rows, stationary, last } => {
                let likelihood = match last {
                    Some(s) => rows[*s].prob(symbol),
                    None => stationary.prob(symbol),
                };
                *last = Some(symbol);
                likelihood
            }
            Self::War { theta, belief } => {
                let mut pred = war_truncated_propagate(belief);
                for (x, m) in pred.iter_mut().enumerate() {
                    if Self::war_emission(theta, x) != symbol {
                        *m = 0.0;
                    }
                }
                let likelihood: f64 = pred.iter().sum();
                if likelihood > 0.0 {
                    pred.iter_mut().for_each(|m| *m /= likelihood);
                    *belief = pred;
                }
                likelihood
            }
        }
    }
}

/// `-∞` log weights are written as `null`.
mod log_weights_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(w: &[f64], s: S) -> Result<S::Ok, S::Error> {
        w.iter()
            .map(|x| x.is_finite().then_some(*x))
            .collect::<Vec<Option<f64>>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Option<f64>>::deserialize(d)?;
        Ok(raw.into_iter().map(|x| x.unwrap_or(f64::NEG_INFINITY)).collect())
    }
}

/// Normalized weights from log weights; `None` if every weight is `-∞`.
fn softmax(log_weights: &[f64]) -> Option<Vec<f64>> {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let mut w: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    Some(w)
}

/// Shifts log weights so the largest is zero.
fn recenter(log_weights: &mut [f64]) -> bool {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return false;
    }
    log_weights.iter_mut().for_each(|l| *l -= max);
    true
}

/// Posterior over a finite [`Decomposition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePosterior {
    #[serde(with = "log_weights_serde")]
    log_weights: Vec<f64>,
    filters: Vec<ComponentFilter>,
    alphabet_size: usize,
    steps: usize,
}

impl MixturePosterior {
    pub fn new(dec: &Decomposition) -> Result<Self> {
        let filters = dec
            .components()
            .iter()
            .map(ComponentFilter::for_component)
            .collect::<Result<Vec<_>>>()?;
        let log_weights = dec.prior().weights().iter().map(|w| w.ln()).collect();
        Ok(Self { log_weights, filters, alphabet_size: dec.alphabet_size(), steps: 0 })
    }

    pub fn posterior_weights(&self) -> Vec<f64> {
        softmax(&self.log_weights).expect("posterior keeps positive mass")
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Pure step: the posterior after also observing `symbol`.
    pub fn step(&self, symbol: Symbol) -> Result<Self> {
        let mut next = self.clone();
        next.observe(symbol)?;
        Ok(next)
    }
}

impl SequentialPredictor for MixturePosterior {
    fn predictive(&self) -> Distribution {
        let weights = self.posterior_weights();
        let mut masses = vec![0.0; self.alphabet_size];
        for (w, f) in weights.iter().zip(&self.filters) {
            if *w > 0.0 {
                for (m, p) in masses.iter_mut().zip(f.predictive().weights()) {
                    *m += w * p;
                }
            }
        }
        Distribution::normalized(masses).expect("mixture of distributions")
    }

    fn observe(&mut self, symbol: Symbol) -> Result<()> {
        if symbol >= self.alphabet_size {
            return Err(Error::InvalidSymbol { symbol, size: self.alphabet_size });
        }
        let mut updated = self.clone();
        for (lw, f) in updated.log_weights.iter_mut().zip(updated.filters.iter_mut()) {
            let likelihood = f.update(symbol);
            *lw += likelihood.ln();
        }
        if !recenter(&mut updated.log_weights) {
            return Err(Error::InconsistentObservation { prefix_len: self.steps + 1, symbol });
        }
        updated.steps += 1;
        *self = updated;
        Ok(())
    }
}

/// Predictive of the mixture after observing `history`.
///
/// Fails with [`Error::InconsistentObservation`] naming the shortest prefix
/// that every component rules out.
pub fn mixture_predictive(dec: &Decomposition, history: &[Symbol]) -> Result<Distribution> {
    let mut post = MixturePosterior::new(dec)?;
    for &s in history {
        post.observe(s)?;
    }
    Ok(post.predictive())
}

// ---------------------------------------------------------------------------
// Gridded hidden Markov decomposition
// ---------------------------------------------------------------------------

/// Points `1/2 + k·step` strictly inside `(1/2, 1)`, rounded to 12 decimals.
pub fn hmm_grid_axis(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 0.5) {
        return Err(Error::InvalidParameter(format!("grid step {step} outside (0, 1/2)")));
    }
    Ok((1..)
        .map(|k| ((0.5 + k as f64 * step) * 1e12).round() / 1e12)
        .take_while(|v| *v < 1.0 - 1e-12)
        .collect())
}

/// Per-parameter forward filters and log weights over a `(p, q)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPosterior {
    grid: Vec<(f64, f64)>,
    #[serde(with = "log_weights_serde")]
    log_weights: Vec<f64>,
    filter_states: Vec<HiddenBelief>,
    steps: usize,
}

impl GridPosterior {
    /// Explicit grid; `prior = None` means uniform.
    pub fn new(grid: Vec<(f64, f64)>, prior: Option<Distribution>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        for &(p, q) in &grid {
            crate::components::hm_transition(0, p, q)?;
        }
        let log_weights = match prior {
            Some(d) if d.len() != grid.len() => {
                return Err(Error::InvalidParameter(format!(
                    "prior has {} weights for {} grid points",
                    d.len(),
                    grid.len()
                )))
            }
            Some(d) => d.weights().iter().map(|w| w.ln()).collect(),
            None => vec![0.0; grid.len()],
        };
        let filter_states = vec![HMM_STATIONARY; grid.len()];
        Ok(Self { grid, log_weights, filter_states, steps: 0 })
    }

    /// Uniform prior on the square grid `hmm_grid_axis(step)²`.
    pub fn uniform(step: f64) -> Result<Self> {
        let axis = hmm_grid_axis(step)?;
        let grid = axis.iter().flat_map(|&p| axis.iter().map(move |&q| (p, q))).collect();
        Self::new(grid, None)
    }

    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn filter_states(&self) -> &[HiddenBelief] {
        &self.filter_states
    }

    pub fn weights(&self) -> Vec<f64> {
        softmax(&self.log_weights).expect("posterior keeps positive mass")
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Posterior mean of `(p, q)`.
    pub fn posterior_mean(&self) -> (f64, f64) {
        self.weights()
            .iter()
            .zip(&self.grid)
            .fold((0.0, 0.0), |(a, b), (w, (p, q))| (a + w * p, b + w * q))
    }
}

/// One forward-filter step per grid point followed by the Bayes reweighting.
pub fn grid_posterior_step(gp: &GridPosterior, symbol: Symbol) -> Result<GridPosterior> {
    let mut next = gp.clone();
    next.observe(symbol)?;
    Ok(next)
}

impl SequentialPredictor for GridPosterior {
    fn predictive(&self) -> Distribution {
        let weights = self.weights();
        let g: f64 = weights
            .iter()
            .zip(&self.grid)
            .zip(&self.filter_states)
            .map(|((w, (p, q)), b)| w * hmm_filter_predict_g(*b, *p, *q))
            .sum();
        let g = g.clamp(0.0, 1.0);
        Distribution::from_exact(vec![1.0 - g, g])
    }

    fn observe(&mut self, symbol: Symbol) -> Result<()> {
        if symbol > 1 {
            return Err(Error::InvalidSymbol { symbol, size: 2 });
        }
        let mut log_weights = self.log_weights.clone();
        let mut states = self.filter_states.clone();
        for ((lw, b), (p, q)) in log_weights.iter_mut().zip(states.iter_mut()).zip(&self.grid) {
            let (next, likelihood) = hmm_filter_update(*b, symbol, *p, *q);
            *b = next;
            *lw += likelihood.ln();
        }
        if !recenter(&mut log_weights) {
            return Err(Error::InconsistentObservation { prefix_len: self.steps + 1, symbol });
        }
        self.log_weights = log_weights;
        self.filter_states = states;
        self.steps += 1;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// War process with uniform prior on θ
// ---------------------------------------------------------------------------

/// What an observer of the war process has deduced so far.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarPosterior {
    /// `θ(k)` values pinned by observations after the first war.
    learned: BTreeMap<u64, Symbol>,
    /// Current gap; `None` until the first war is observed.
    k_current: Option<u64>,
    /// Non-war outcomes seen before the first war.
    pre_war_history: Vec<Symbol>,
    steps: usize,
}

impl WarPosterior {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn learned(&self) -> &BTreeMap<u64, Symbol> {
        &self.learned
    }

    pub fn k_current(&self) -> Option<u64> {
        self.k_current
    }

    pub fn pre_war_history(&self) -> &[Symbol] {
        &self.pre_war_history
    }

    /// Whether `θ(k+1)` is known for the current gap `k`.
    pub fn next_is_learned(&self) -> bool {
        self.next_value().is_some()
    }

    fn next_value(&self) -> Option<Symbol> {
        self.k_current.and_then(|k| self.learned.get(&(k + 1)).copied())
    }
}

/// `(W: 1/2, θ(k+1): 1/2)` when `θ(k+1)` has been deduced, otherwise
/// `(1/2, 1/4, 1/4)`.
pub fn war_bayes_predictive(wp: &WarPosterior) -> Distribution {
    let mut weights = vec![0.0; 3];
    weights[war::W] = 0.5;
    match wp.next_value() {
        Some(x) => weights[x] = 0.5,
        None => {
            weights[war::B] = 0.25;
            weights[war::G] = 0.25;
        }
    }
    Distribution::from_exact(weights)
}

/// Records `symbol`: a war resets the gap, a peaceful outcome at known gap `k`
/// pins `θ(k+1)`.
pub fn war_posterior_step(wp: &WarPosterior, symbol: Symbol) -> Result<WarPosterior> {
    let mut next = wp.clone();
    next.observe(symbol)?;
    Ok(next)
}

impl SequentialPredictor for WarPosterior {
    fn predictive(&self) -> Distribution {
        war_bayes_predictive(self)
    }

    fn observe(&mut self, symbol: Symbol) -> Result<()> {
        match (symbol, self.k_current) {
            (war::W, _) => self.k_current = Some(0),
            (war::B | war::G, None) => self.pre_war_history.push(symbol),
            (war::B | war::G, Some(k)) => {
                let index = k + 1;
                match self.learned.get(&index) {
                    Some(&known) if known != symbol => {
                        return Err(Error::ImpossibleObservation {
                            step: self.steps,
                            reason: format!(
                                "theta({index}) was deduced as {known}, observed {symbol}"
                            ),
                        })
                    }
                    Some(_) => {}
                    None => {
                        self.learned.insert(index, symbol);
                    }
                }
                self.k_current = Some(index);
            }
            _ => return Err(Error::InvalidSymbol { symbol, size: 3 }),
        }
        self.steps += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::hmm;

    fn p1(d: &Distribution) -> f64 {
        d.prob(1)
    }

    #[test]
    fn exchangeable_examples() {
        let post = ExchangeablePosterior::new();
        assert_eq!(p1(&exchangeable_predictive(&post)), 0.5);
        let post = ExchangeablePosterior::from_counts(3, 2).unwrap();
        assert!((p1(&exchangeable_predictive(&post)) - 0.6).abs() < 1e-15);
        let post = ExchangeablePosterior::from_counts(9, 9).unwrap();
        assert!((p1(&exchangeable_predictive(&post)) - 10.0 / 11.0).abs() < 1e-15);
        assert!(ExchangeablePosterior::from_counts(2, 3).is_err());
    }

    #[test]
    fn mixture_examples() {
        let dec = Decomposition::bernoulli(&[0.0, 1.0], None).unwrap();
        assert_eq!(mixture_predictive(&dec, &[1]).unwrap().weights(), &[0.0, 1.0]);

        let dec = Decomposition::bernoulli(&[0.3, 0.7], None).unwrap();
        assert!((p1(&mixture_predictive(&dec, &[]).unwrap()) - 0.5).abs() < 1e-15);
        assert!((p1(&mixture_predictive(&dec, &[1]).unwrap()) - 0.58).abs() < 1e-12);
    }

    #[test]
    fn mixture_names_first_impossible_prefix() {
        let dec = Decomposition::bernoulli(&[0.0, 1.0], None).unwrap();
        let err = mixture_predictive(&dec, &[1, 1, 0]).unwrap_err();
        assert_eq!(err, Error::InconsistentObservation { prefix_len: 3, symbol: 0 });
    }

    #[test]
    fn grid_single_point_equals_filter() {
        let mut gp = GridPosterior::new(vec![(0.9, 0.8)], None).unwrap();
        assert!((p1(&gp.predictive()) - 0.5).abs() < 1e-15);
        gp.observe(hmm::G).unwrap();
        let b = gp.filter_states()[0];
        assert!((b[1] - 0.8).abs() < 1e-15 && (b[0] - 0.2).abs() < 1e-15);
        assert!((p1(&gp.predictive()) - 0.644).abs() < 1e-15);
    }

    #[test]
    fn grid_noiseless_signal_pins_hidden_state() {
        let mut gp = GridPosterior::new(vec![(0.9, 1.0)], None).unwrap();
        gp.observe(hmm::G).unwrap();
        gp.observe(hmm::G).unwrap();
        assert_eq!(gp.filter_states()[0], [0.0, 1.0]);
    }

    #[test]
    fn grid_zero_likelihood_points_drop_out() {
        let mut gp = GridPosterior::new(vec![(1.0, 1.0), (0.9, 0.8)], None).unwrap();
        gp.observe(hmm::G).unwrap();
        gp.observe(hmm::B).unwrap();
        assert_eq!(gp.log_weights()[0], f64::NEG_INFINITY);
        assert!((gp.weights()[1] - 1.0).abs() < 1e-15);

        let mut only_det = GridPosterior::new(vec![(1.0, 1.0)], None).unwrap();
        only_det.observe(hmm::G).unwrap();
        assert!(matches!(only_det.observe(hmm::B), Err(Error::InconsistentObservation { .. })));
    }

    #[test]
    fn grid_axis_contains_reference_truth() {
        let axis = hmm_grid_axis(0.02).unwrap();
        assert_eq!(axis.len(), 24);
        assert_eq!(axis[0], 0.52);
        assert_eq!(*axis.last().unwrap(), 0.98);
        assert!(axis.contains(&0.9) && axis.contains(&0.8));
    }

    #[test]
    fn war_examples() {
        let mut wp = WarPosterior::new();
        assert_eq!(war_bayes_predictive(&wp).weights(), &[0.5, 0.25, 0.25]);

        wp.observe(war::G).unwrap();
        assert_eq!(wp.pre_war_history(), &[war::G]);
        assert!(wp.learned().is_empty());

        wp.observe(war::W).unwrap();
        wp.observe(war::B).unwrap();
        assert_eq!(wp.learned().get(&1), Some(&war::B));
        assert_eq!(wp.k_current(), Some(1));

        let before = wp.learned().clone();
        wp.observe(war::W).unwrap();
        assert_eq!(wp.k_current(), Some(0));
        assert_eq!(wp.learned(), &before);
        assert_eq!(war_bayes_predictive(&wp).weights(), &[0.5, 0.5, 0.0]);
        assert!(matches!(wp.observe(war::G), Err(Error::ImpossibleObservation { .. })));
    }

    #[test]
    fn war_learned_and_unlearned_predictives() {
        let mut learned = BTreeMap::new();
        learned.insert(6, war::G);
        let wp = WarPosterior { learned, k_current: Some(5), ..Default::default() };
        assert_eq!(war_bayes_predictive(&wp).weights(), &[0.5, 0.0, 0.5]);
        let wp = WarPosterior { k_current: Some(7), ..Default::default() };
        assert_eq!(war_bayes_predictive(&wp).weights(), &[0.5, 0.25, 0.25]);
    }
}
