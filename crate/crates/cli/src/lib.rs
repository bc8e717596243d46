//! Batch harness for `ergolearn`: JSON experiment configs in, CSV traces and
//! JSON summaries out.

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod runner;

pub use config::{load_config, parse_config, parse_seed_list, ExperimentConfig, ExperimentKind};
pub use error::{FieldViolation, HarnessError, Result};
pub use runner::{run_experiment, simulate, RunOutcome, Summary};
