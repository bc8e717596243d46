//! Simulation and exact Bayesian prediction for stationary processes and
//! their ergodic decompositions.
//!
//! The crate pairs each ergodic component (Bernoulli, two-state hidden Markov,
//! the war process, finite Markov chains) with an exact Bayesian predictor
//! for a prior over components, and scores the two against each other:
//!
//! - [`process_core`]: distributions, sup-norm distance, Cesàro diagnostics.
//! - [`components`]: component laws, samplers and oracle predictors.
//! - [`bayes_predictors`]: posterior updating and mixture predictives.
//! - [`merging_lab`]: truth-vs-Bayes races, record times, calibration.
//! - [`empirical`]: sliding-window block frequencies and component identification.
//! - [`decisions`]: average payoffs of greedy strategies and optimality gaps.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes_predictors;
pub mod components;
pub mod decisions;
pub mod empirical;
pub mod error;
pub mod merging_lab;
pub mod predictor;
pub mod process_core;
pub mod rng;

pub use error::{Error, Result};
pub use process_core::{Alphabet, CesaroTrace, Distribution, History, MergeVerdict, Symbol};

/// Version stamped into every report.
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");
