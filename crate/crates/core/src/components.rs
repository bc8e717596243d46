//! Ergodic component laws.
//!
//! Each family provides exact block probabilities, a seeded sampler started
//! from its stationary hidden-state law, and an oracle predictor that knows the
//! true parameter.
//!
//! Hidden-state conventions: a component stores the hidden state of the *last*
//! emitted period. Construction draws that state (the period before time 0)
//! from the stationary law, and [`ComponentLaw::sample_step`] first moves the
//! hidden chain and then emits. The war and Markov oracles condition on this
//! hidden state directly; the hidden Markov oracle runs the true-parameter
//! forward filter on the observed symbols, since its hidden state is never
//! revealed by the outcomes.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process_core::{Alphabet, Distribution, Symbol};
use crate::rng::{PathRng, PARAMETER_STREAM, PATH_STREAM};

/// Longest block accepted by [`ComponentLaw::exact_block_probability`].
pub const EXACT_BLOCK_MAX_LEN: usize = 25;

/// Gap values `ξ ≥ WAR_GAP_TRUNCATION` are lumped into one state when
/// computing exact war-process block probabilities. The lumped stationary mass
/// is `2^-60`.
pub const WAR_GAP_TRUNCATION: usize = 60;

pub mod hmm {
    //! Symbols of the two-state hidden Markov family.
    use crate::process_core::Symbol;
    pub const B: Symbol = 0;
    pub const G: Symbol = 1;
}

pub mod war {
    //! Symbols of the war family.
    use crate::process_core::Symbol;
    pub const W: Symbol = 0;
    pub const B: Symbol = 1;
    pub const G: Symbol = 2;
}

/// Family and parameters of a component, as written in configs:
/// `{"family": "bernoulli", "parameters": {"theta": 0.7}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "parameters", rename_all = "snake_case")]
pub enum ComponentParams {
    Bernoulli { theta: f64 },
    HiddenMarkov { p: f64, q: f64 },
    /// `θ` is drawn from the uniform prior using the run's seed.
    War,
    Markov { transition: Vec<Vec<f64>> },
    /// Fair-coin realization whose oracle sees the next outcome.
    Dirac,
}

impl ComponentParams {
    pub fn family(&self) -> &'static str {
        match self {
            Self::Bernoulli { .. } => "bernoulli",
            Self::HiddenMarkov { .. } => "hidden_markov",
            Self::War => "war",
            Self::Markov { .. } => "markov",
            Self::Dirac => "dirac",
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Self::Bernoulli { .. } | Self::Dirac => Alphabet::numeric(2),
            Self::HiddenMarkov { .. } => Alphabet::new(["B", "G"]),
            Self::War => Alphabet::new(["W", "B", "G"]),
            Self::Markov { transition } => Alphabet::numeric(transition.len().max(2)),
        }
        .expect("family alphabets are valid")
    }

    /// Checks parameter ranges without building the component.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Bernoulli { theta } => check_bernoulli(*theta),
            Self::HiddenMarkov { p, q } => check_hmm(*p, *q),
            Self::War | Self::Dirac => Ok(()),
            Self::Markov { transition } => MarkovComponent::new(transition.clone()).map(|_| ()),
        }
    }

    /// Short human-readable description for reports.
    pub fn describe(&self) -> String {
        match self {
            Self::Bernoulli { theta } => format!("bernoulli(theta={theta})"),
            Self::HiddenMarkov { p, q } => format!("hidden_markov(p={p},q={q})"),
            Self::War => "war".into(),
            Self::Markov { transition } => format!("markov({} states)", transition.len()),
            Self::Dirac => "dirac(fair coin)".into(),
        }
    }
}

/// A component family together with the seed its sample path is drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    #[serde(flatten)]
    pub params: ComponentParams,
    pub seed: u64,
}

/// Common interface of the component families.
pub trait ComponentLaw {
    fn alphabet(&self) -> Alphabet;

    /// Advances the hidden state one period and returns the emitted symbol.
    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol;

    /// Next-period predictive with full knowledge of the parameter.
    fn oracle_predict(&mut self) -> Distribution;

    /// Stationary probability of observing `block` in consecutive periods.
    fn exact_block_probability(&self, block: &[Symbol]) -> Result<f64>;
}

fn check_block(block: &[Symbol], size: usize) -> Result<()> {
    if block.len() > EXACT_BLOCK_MAX_LEN {
        return Err(Error::BlockTooLong { len: block.len(), max: EXACT_BLOCK_MAX_LEN });
    }
    if let Some(&symbol) = block.iter().find(|&&s| s >= size) {
        return Err(Error::InvalidSymbol { symbol, size });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Bernoulli
// ---------------------------------------------------------------------------

fn check_bernoulli(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("bernoulli theta={theta} outside [0, 1]")))
    }
}

/// i.i.d. outcomes in `{0, 1}` with `P(1) = theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliComponent {
    theta: f64,
}

impl BernoulliComponent {
    pub fn new(theta: f64) -> Result<Self> {
        check_bernoulli(theta)?;
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `θ^d (1 − θ)^(k − d)` where `d` counts ones in a block of length `k`.
pub fn bernoulli_block_probability(theta: f64, block: &[Symbol]) -> Result<f64> {
    check_bernoulli(theta)?;
    check_block(block, 2)?;
    let ones = block.iter().filter(|&&s| s == 1).count() as i32;
    let zeros = block.len() as i32 - ones;
    Ok(theta.powi(ones) * (1.0 - theta).powi(zeros))
}

impl ComponentLaw for BernoulliComponent {
    fn alphabet(&self) -> Alphabet {
        Alphabet::numeric(2).expect("binary alphabet")
    }

    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol {
        usize::from(rng.bernoulli(self.theta))
    }

    fn oracle_predict(&mut self) -> Distribution {
        Distribution::from_exact(vec![1.0 - self.theta, self.theta])
    }

    fn exact_block_probability(&self, block: &[Symbol]) -> Result<f64> {
        bernoulli_block_probability(self.theta, block)
    }
}

// ---------------------------------------------------------------------------
// Hidden Markov (two hidden states, noisy signal)
// ---------------------------------------------------------------------------

fn check_hmm(p: f64, q: f64) -> Result<()> {
    let ok = |x: f64| x > 0.5 && x <= 1.0;
    if ok(p) && ok(q) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "hidden Markov parameters must lie in (1/2, 1], got p={p}, q={q}"
        )))
    }
}

/// Joint law of the next (hidden, observed) pair given hidden state `h`.
///
/// Entries are indexed `2·h' + a'` with `B = 0`, `G = 1`, i.e. in the order
/// `(B,B), (B,G), (G,B), (G,G)`.
pub fn hm_transition(h: Symbol, p: f64, q: f64) -> Result<Distribution> {
    check_hmm(p, q)?;
    if h > 1 {
        return Err(Error::InvalidSymbol { symbol: h, size: 2 });
    }
    let mut weights = Vec::with_capacity(4);
    for h_next in 0..2 {
        let move_prob = if h_next == h { p } else { 1.0 - p };
        for a_next in 0..2 {
            let signal = if a_next == h_next { q } else { 1.0 - q };
            weights.push(move_prob * signal);
        }
    }
    Distribution::new(weights)
}

/// Filtered belief over the last hidden state, `[P(B), P(G)]`.
pub type HiddenBelief = [f64; 2];

/// Stationary hidden law of the symmetric two-state chain.
pub const HMM_STATIONARY: HiddenBelief = [0.5, 0.5];

#[inline]
fn hmm_propagate(belief: HiddenBelief, p: f64) -> HiddenBelief {
    let g = belief[1] * p + belief[0] * (1.0 - p);
    [1.0 - g, g]
}

/// `P(next = G)` given the filtered belief over the current hidden state.
#[inline]
pub fn hmm_filter_predict_g(belief: HiddenBelief, p: f64, q: f64) -> f64 {
    let pred = hmm_propagate(belief, p);
    pred[1] * q + pred[0] * (1.0 - q)
}

/// One forward-filter step on observing `symbol`.
///
/// Returns the new filtered belief and `P(symbol | past)`. A zero likelihood
/// leaves the belief unchanged.
#[inline]
pub fn hmm_filter_update(belief: HiddenBelief, symbol: Symbol, p: f64, q: f64) -> (HiddenBelief, f64) {
    let pred = hmm_propagate(belief, p);
    let emit = |h: usize| if h == symbol { q } else { 1.0 - q };
    let joint = [pred[0] * emit(0), pred[1] * emit(1)];
    let likelihood = joint[0] + joint[1];
    if likelihood > 0.0 {
        let g = joint[1] / likelihood;
        ([1.0 - g, g], likelihood)
    } else {
        (belief, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenMarkovComponent {
    p: f64,
    q: f64,
    hidden: Symbol,
    filter: HiddenBelief,
}

impl HiddenMarkovComponent {
    pub fn new(p: f64, q: f64, hidden: Symbol) -> Result<Self> {
        check_hmm(p, q)?;
        if hidden > 1 {
            return Err(Error::InvalidSymbol { symbol: hidden, size: 2 });
        }
        Ok(Self { p, q, hidden, filter: HMM_STATIONARY })
    }

    /// Draws the initial hidden state from the stationary law `(1/2, 1/2)`.
    pub fn stationary(p: f64, q: f64, rng: &mut PathRng) -> Result<Self> {
        let hidden = usize::from(rng.fair_bit());
        Self::new(p, q, hidden)
    }

    pub fn params(&self) -> (f64, f64) {
        (self.p, self.q)
    }

    pub fn hidden(&self) -> Symbol {
        self.hidden
    }

    /// The oracle filter's belief over the last hidden state.
    pub fn filter_belief(&self) -> HiddenBelief {
        self.filter
    }
}

impl ComponentLaw for HiddenMarkovComponent {
    fn alphabet(&self) -> Alphabet {
        ComponentParams::HiddenMarkov { p: self.p, q: self.q }.alphabet()
    }

    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol {
        if !rng.bernoulli(self.p) {
            self.hidden = 1 - self.hidden;
        }
        let symbol = if rng.bernoulli(self.q) { self.hidden } else { 1 - self.hidden };
        self.filter = hmm_filter_update(self.filter, symbol, self.p, self.q).0;
        symbol
    }

    fn oracle_predict(&mut self) -> Distribution {
        let g = hmm_filter_predict_g(self.filter, self.p, self.q);
        Distribution::from_exact(vec![1.0 - g, g])
    }

    fn exact_block_probability(&self, block: &[Symbol]) -> Result<f64> {
        check_block(block, 2)?;
        let mut prob = 1.0;
        let mut belief = HMM_STATIONARY;
        for &s in block {
            let (next, likelihood) = hmm_filter_update(belief, s, self.p, self.q);
            prob *= likelihood;
            if likelihood == 0.0 {
                return Ok(0.0);
            }
            belief = next;
        }
        Ok(prob)
    }
}

// ---------------------------------------------------------------------------
// War process
// ---------------------------------------------------------------------------

/// Values of `θ : {1, 2, …} → {B, G}`, read in index order from a dedicated
/// random stream. `θ(k)` is the `k`-th fair bit of that stream regardless of
/// the order in which indices are first requested.
#[derive(Debug, Clone)]
pub struct WarTheta {
    values: Vec<Symbol>,
    rng: PathRng,
}

impl WarTheta {
    pub fn from_seed(seed: u64) -> Self {
        Self { values: Vec::new(), rng: PathRng::new(seed, PARAMETER_STREAM) }
    }

    /// Fixed prefix `θ(1..=n)`; indices past the prefix come from `seed`.
    pub fn with_prefix(prefix: &[Symbol], seed: u64) -> Result<Self> {
        if let Some(&symbol) = prefix.iter().find(|&&s| s != war::B && s != war::G) {
            return Err(Error::InvalidParameter(format!(
                "war parameter values must be B or G, got symbol {symbol}"
            )));
        }
        let mut theta = Self::from_seed(seed);
        // Burn the stream positions the prefix replaces.
        for _ in prefix {
            theta.rng.fair_bit();
        }
        theta.values = prefix.to_vec();
        Ok(theta)
    }

    /// `θ(k)` for `k ≥ 1`, materializing as needed.
    pub fn get(&mut self, k: u64) -> Symbol {
        assert!(k >= 1, "war parameter is indexed from 1");
        let k = k as usize;
        while self.values.len() < k {
            let v = if self.rng.fair_bit() { war::G } else { war::B };
            self.values.push(v);
        }
        self.values[k - 1]
    }

    /// Already-materialized value, if any.
    pub fn peek(&self, k: u64) -> Option<Symbol> {
        (k >= 1).then(|| self.values.get(k as usize - 1).copied()).flatten()
    }

    pub fn materialized(&self) -> &[Symbol] {
        &self.values
    }
}

/// Samples the hidden gap from its stationary law `P(ξ = k) = 2^-(k+1)`.
pub fn war_stationary_hidden_init(seed: u64) -> u64 {
    PathRng::new(seed, PATH_STREAM).geometric_half()
}

#[derive(Debug, Clone)]
pub struct WarComponent {
    theta: WarTheta,
    xi: u64,
}

impl WarComponent {
    pub fn new(mut theta: WarTheta, xi: u64) -> Self {
        theta.get(WAR_GAP_TRUNCATION as u64 + 1);
        Self { theta, xi }
    }

    /// `θ` from `seed`'s parameter stream and `ξ` from the stationary law.
    pub fn stationary(seed: u64, rng: &mut PathRng) -> Self {
        let xi = rng.geometric_half();
        Self::new(WarTheta::from_seed(seed), xi)
    }

    /// Periods since the last war.
    pub fn xi(&self) -> u64 {
        self.xi
    }

    pub fn theta(&mut self, k: u64) -> Symbol {
        self.theta.get(k)
    }

    pub fn theta_table(&self) -> &WarTheta {
        &self.theta
    }

    /// Emission of the truncated gap state `x`.
    fn truncated_emission(&self, x: usize) -> Symbol {
        if x == 0 {
            war::W
        } else {
            self.theta.values[x - 1]
        }
    }
}

/// `(W: 1/2, θ(k+1): 1/2)` where `k` is the component's current gap.
pub fn war_oracle_predict(c: &mut WarComponent) -> Distribution {
    let next = c.theta.get(c.xi + 1);
    let mut weights = vec![0.0; 3];
    weights[war::W] = 0.5;
    weights[next] = 0.5;
    Distribution::from_exact(weights)
}

/// Stationary law of the gap chain truncated at [`WAR_GAP_TRUNCATION`].
pub(crate) fn war_truncated_stationary() -> Vec<f64> {
    let top = WAR_GAP_TRUNCATION;
    let mut pi: Vec<f64> = (0..top).map(|k| 0.5f64.powi(k as i32 + 1)).collect();
    pi.push(0.5f64.powi(top as i32));
    pi
}

/// One forward step on the truncated gap chain: `x → 0` and
/// `x → min(x + 1, top)` with probability `1/2` each.
pub(crate) fn war_truncated_propagate(alpha: &[f64]) -> Vec<f64> {
    let top = WAR_GAP_TRUNCATION;
    let mut next = vec![0.0; top + 1];
    next[0] = 0.5 * alpha.iter().sum::<f64>();
    for (x, a) in alpha.iter().enumerate() {
        next[(x + 1).min(top)] += 0.5 * a;
    }
    next
}

impl ComponentLaw for WarComponent {
    fn alphabet(&self) -> Alphabet {
        ComponentParams::War.alphabet()
    }

    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol {
        if rng.fair_bit() {
            self.xi = 0;
            war::W
        } else {
            self.xi += 1;
            self.theta.get(self.xi)
        }
    }

    fn oracle_predict(&mut self) -> Distribution {
        war_oracle_predict(self)
    }

    fn exact_block_probability(&self, block: &[Symbol]) -> Result<f64> {
        check_block(block, 3)?;
        let Some((&first, rest)) = block.split_first() else {
            return Ok(1.0);
        };
        let emit = |alpha: &mut [f64], s: Symbol| {
            for (x, a) in alpha.iter_mut().enumerate() {
                if self.truncated_emission(x) != s {
                    *a = 0.0;
                }
            }
        };
        let mut alpha = war_truncated_stationary();
        emit(&mut alpha, first);
        for &s in rest {
            alpha = war_truncated_propagate(&alpha);
            emit(&mut alpha, s);
        }
        Ok(alpha.iter().sum())
    }
}

// ---------------------------------------------------------------------------
// Finite Markov chain
// ---------------------------------------------------------------------------

/// Irreducible aperiodic chain on `{0, …, n−1}` started from its stationary law.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovComponent {
    rows: Vec<Distribution>,
    stationary: Distribution,
    last: Symbol,
}

impl MarkovComponent {
    pub fn new(transition: Vec<Vec<f64>>) -> Result<Self> {
        let n = transition.len();
        if n < 2 {
            return Err(Error::InvalidParameter("markov chain needs at least 2 states".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in transition.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "transition row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            rows.push(Distribution::new(row).map_err(|e| {
                Error::InvalidParameter(format!("transition row {i}: {e}"))
            })?);
        }
        if !is_primitive(&rows) {
            return Err(Error::InvalidParameter(
                "transition matrix must be irreducible and aperiodic".into(),
            ));
        }
        let stationary = stationary_vector(&rows)?;
        Ok(Self { rows, stationary, last: 0 })
    }

    pub fn stationary_distribution(&self) -> &Distribution {
        &self.stationary
    }

    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    pub fn with_state(mut self, last: Symbol) -> Result<Self> {
        if last >= self.rows.len() {
            return Err(Error::InvalidSymbol { symbol: last, size: self.rows.len() });
        }
        self.last = last;
        Ok(self)
    }
}

/// Some power of the transition graph's adjacency matrix is strictly positive
/// (Wielandt: checking power `(n−1)² + 1` suffices).
fn is_primitive(rows: &[Distribution]) -> bool {
    let n = rows.len();
    let adj: Vec<Vec<bool>> = rows.iter().map(|r| r.weights().iter().map(|w| *w > 0.0).collect()).collect();
    let mut power = adj.clone();
    for _ in 1..((n - 1) * (n - 1) + 1) {
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] {
                    for j in 0..n {
                        next[i][j] |= adj[k][j];
                    }
                }
            }
        }
        power = next;
    }
    power.iter().all(|r| r.iter().all(|&b| b))
}

/// Solves `πP = π`, `Σπ = 1` and verifies the balance equations to 1e-10.
fn stationary_vector(rows: &[Distribution]) -> Result<Distribution> {
    let n = rows.len();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(j, i)] = rows[i].prob(j) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::InvalidParameter("singular stationary system".into()))?;
    let pi: Vec<f64> = pi.iter().map(|x| x.max(0.0)).collect();
    for j in 0..n {
        let inflow: f64 = (0..n).map(|i| pi[i] * rows[i].prob(j)).sum();
        if (inflow - pi[j]).abs() > 1e-10 {
            return Err(Error::InvalidParameter("stationary vector failed balance check".into()));
        }
    }
    Distribution::normalized(pi)
}

impl ComponentLaw for MarkovComponent {
    fn alphabet(&self) -> Alphabet {
        Alphabet::numeric(self.rows.len()).expect("n >= 2")
    }

    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol {
        self.last = rng.categorical(&self.rows[self.last]);
        self.last
    }

    fn oracle_predict(&mut self) -> Distribution {
        self.rows[self.last].clone()
    }

    fn exact_block_probability(&self, block: &[Symbol]) -> Result<f64> {
        check_block(block, self.rows.len())?;
        let Some((&first, _)) = block.split_first() else {
            return Ok(1.0);
        };
        Ok(block
            .windows(2)
            .fold(self.stationary.prob(first), |acc, w| acc * self.rows[w[0]].prob(w[1])))
    }
}

// ---------------------------------------------------------------------------
// Dirac (a fixed fair-coin realization)
// ---------------------------------------------------------------------------

/// Fair-coin realization `ω*` whose "parameter" is the realization itself, so
/// its oracle puts all mass on the next outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracComponent {
    next: Symbol,
}

impl DiracComponent {
    pub fn new(rng: &mut PathRng) -> Self {
        Self { next: usize::from(rng.fair_bit()) }
    }
}

impl ComponentLaw for DiracComponent {
    fn alphabet(&self) -> Alphabet {
        ComponentParams::Dirac.alphabet()
    }

    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol {
        let out = self.next;
        self.next = usize::from(rng.fair_bit());
        out
    }

    fn oracle_predict(&mut self) -> Distribution {
        Distribution::point_mass(2, self.next)
    }

    fn exact_block_probability(&self, _block: &[Symbol]) -> Result<f64> {
        Err(Error::Unsupported(
            "a single realization has no stationary block law".into(),
        ))
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

// Components are built once per run and never moved in bulk.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum Component {
    Bernoulli(BernoulliComponent),
    HiddenMarkov(HiddenMarkovComponent),
    War(WarComponent),
    Markov(MarkovComponent),
    Dirac(DiracComponent),
}

impl Component {
    /// Builds a component, drawing its initial hidden state from `rng` and any
    /// random parameter (war `θ`) from `seed`'s parameter stream.
    pub fn initialize(params: &ComponentParams, seed: u64, rng: &mut PathRng) -> Result<Self> {
        Ok(match params {
            ComponentParams::Bernoulli { theta } => Self::Bernoulli(BernoulliComponent::new(*theta)?),
            ComponentParams::HiddenMarkov { p, q } => {
                Self::HiddenMarkov(HiddenMarkovComponent::stationary(*p, *q, rng)?)
            }
            ComponentParams::War => Self::War(WarComponent::stationary(seed, rng)),
            ComponentParams::Markov { transition } => {
                let chain = MarkovComponent::new(transition.clone())?;
                let last = rng.categorical(chain.stationary_distribution());
                Self::Markov(chain.with_state(last)?)
            }
            ComponentParams::Dirac => Self::Dirac(DiracComponent::new(rng)),
        })
    }

    fn law(&self) -> &dyn ComponentLaw {
        match self {
            Self::Bernoulli(c) => c,
            Self::HiddenMarkov(c) => c,
            Self::War(c) => c,
            Self::Markov(c) => c,
            Self::Dirac(c) => c,
        }
    }

    fn law_mut(&mut self) -> &mut dyn ComponentLaw {
        match self {
            Self::Bernoulli(c) => c,
            Self::HiddenMarkov(c) => c,
            Self::War(c) => c,
            Self::Markov(c) => c,
            Self::Dirac(c) => c,
        }
    }
}

impl ComponentLaw for Component {
    fn alphabet(&self) -> Alphabet {
        self.law().alphabet()
    }

    fn sample_step(&mut self, rng: &mut PathRng) -> Symbol {
        self.law_mut().sample_step(rng)
    }

    fn oracle_predict(&mut self) -> Distribution {
        self.law_mut().oracle_predict()
    }

    fn exact_block_probability(&self, block: &[Symbol]) -> Result<f64> {
        self.law().exact_block_probability(block)
    }
}

/// A component paired with its path stream: one seeded realization.
#[derive(Debug, Clone)]
pub struct Simulator {
    component: Component,
    rng: PathRng,
}

impl Simulator {
    pub fn new(params: &ComponentParams, seed: u64) -> Result<Self> {
        let mut rng = PathRng::new(seed, PATH_STREAM);
        let component = Component::initialize(params, seed, &mut rng)?;
        Ok(Self { component, rng })
    }

    pub fn from_spec(spec: &ComponentSpec) -> Result<Self> {
        Self::new(&spec.params, spec.seed)
    }

    pub fn component(&self) -> &Component {
        &self.component
    }

    pub fn component_mut(&mut self) -> &mut Component {
        &mut self.component
    }

    pub fn oracle_predict(&mut self) -> Distribution {
        self.component.oracle_predict()
    }

    pub fn step(&mut self) -> Symbol {
        self.component.sample_step(&mut self.rng)
    }

    pub fn sample_path(&mut self, len: usize) -> Vec<Symbol> {
        (0..len).map(|_| self.step()).collect()
    }
}
