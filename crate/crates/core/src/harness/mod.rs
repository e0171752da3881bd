//! Seeded Monte Carlo experiments and their output formats.

pub mod config;
pub mod experiments;
pub mod records;
pub mod stats;

pub use config::{ConcentrationMode, ExperimentConfig, ExperimentKind, Format, KappaCap, Probability, Settings};
pub use experiments::*;
pub use records::{records_to_string, write_records, Record};
pub use stats::{splitmix64, trial_seed, wilson, Z95};
