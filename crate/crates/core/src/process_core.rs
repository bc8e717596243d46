//! Outcome alphabets, predictive distributions, and the sup-norm / Cesàro
//! diagnostics every experiment is scored with.
//!
//! Two predictives `p`, `q` over the same alphabet are compared with
//! `‖p − q‖ = max_a |p[a] − q[a]|`. A sequence of such distances `d_0, d_1, …`
//! merges weakly when its running means `(1/N) Σ_{k<N} d_k` tend to zero, which
//! at a finite horizon is checked by [`full_density_limit_test`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an outcome within its [`Alphabet`].
pub type Symbol = usize;

/// Absolute tolerance on the total mass of a [`Distribution`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Ordered, finite set of outcome labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// `{"0", "1", …, "n-1"}`.
    pub fn numeric(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn label(&self, symbol: Symbol) -> Option<&str> {
        self.symbols.get(symbol).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == label)
    }

    pub fn check(&self, symbol: Symbol) -> Result<()> {
        if symbol < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidSymbol { symbol, size: self.len() })
        }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(symbols: Vec<String>) -> Result<Self> {
        Self::new(symbols)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// Probability vector over a finite alphabet, indexed by [`Symbol`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validates that every weight lies in `[0, 1]` and the total is 1 within
    /// [`NORMALIZATION_TOLERANCE`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidDistribution(format!("weight {w} outside [0, 1]")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative finite masses to total 1.
    pub fn normalized(masses: Vec<f64>) -> Result<Self> {
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidDistribution(
                "masses must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("total mass is zero".into()));
        }
        Self::new(masses.into_iter().map(|m| (m / total).min(1.0)).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn point_mass(n: usize, symbol: Symbol) -> Self {
        let mut weights = vec![0.0; n];
        weights[symbol] = 1.0;
        Self { weights }
    }

    /// Builds a distribution from weights the caller guarantees are already
    /// normalized (used on hot paths where the arithmetic is exact).
    pub(crate) fn from_exact(weights: Vec<f64>) -> Self {
        debug_assert!(Self::new(weights.clone()).is_ok(), "{weights:?}");
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn prob(&self, symbol: Symbol) -> f64 {
        self.weights[symbol]
    }

    /// Lowest-index symbol carrying the largest mass.
    pub fn argmax(&self) -> Symbol {
        let mut best = 0;
        for (i, w) in self.weights.iter().enumerate().skip(1) {
            if *w > self.weights[best] {
                best = i;
            }
        }
        best
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.weights
    }
}

/// Time-ordered outcomes `a_0, a_1, …`. The empty history is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct History {
    outcomes: Vec<Symbol>,
}

impl History {
    pub fn new(alphabet: &Alphabet, outcomes: Vec<Symbol>) -> Result<Self> {
        for &s in &outcomes {
            alphabet.check(s)?;
        }
        Ok(Self { outcomes })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn push(&mut self, alphabet: &Alphabet, symbol: Symbol) -> Result<()> {
        alphabet.check(symbol)?;
        self.outcomes.push(symbol);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.outcomes
    }
}

impl AsRef<[Symbol]> for History {
    fn as_ref(&self) -> &[Symbol] {
        &self.outcomes
    }
}

/// `‖p − q‖ = max_a |p[a] − q[a]|`.
pub fn sup_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::AlphabetMismatch { left: p.len(), right: q.len() });
    }
    Ok(p.weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// A distance sequence together with its running means.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CesaroTrace {
    values: Vec<f64>,
    running_means: Vec<f64>,
}

impl CesaroTrace {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `running_means()[n] = (1/(n+1)) Σ_{k≤n} values()[k]`.
    pub fn running_means(&self) -> &[f64] {
        &self.running_means
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn final_mean(&self) -> Option<f64> {
        self.running_means.last().copied()
    }
}

/// Running means of `values`; an empty input gives an empty trace.
pub fn cesaro_means(values: &[f64]) -> CesaroTrace {
    let mut running_means = Vec::with_capacity(values.len());
    let mut sum = 0.0;
    for (n, v) in values.iter().enumerate() {
        sum += v;
        running_means.push(sum / (n + 1) as f64);
    }
    CesaroTrace { values: values.to_vec(), running_means }
}

/// Finite-horizon merging verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeVerdict {
    /// Final running mean below `epsilon`.
    pub weak: bool,
    /// Every value in the trailing window below `epsilon`.
    pub strong: bool,
}

/// Weak verdict: final Cesàro mean `< epsilon`. Strong verdict: the maximum
/// over the last `ceil(tail_fraction · N)` values is `< epsilon`.
pub fn full_density_limit_test(
    trace: &CesaroTrace,
    epsilon: f64,
    tail_fraction: f64,
) -> Result<MergeVerdict> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail_fraction must lie in (0, 1), got {tail_fraction}"
        )));
    }
    let final_mean = trace.final_mean().ok_or(Error::EmptyTrace)?;
    let n = trace.len();
    let window = ((tail_fraction * n as f64).ceil() as usize).clamp(1, n);
    let tail_max = trace.values[n - window..].iter().copied().fold(0.0, f64::max);
    Ok(MergeVerdict { weak: final_mean < epsilon, strong: tail_max < epsilon })
}
