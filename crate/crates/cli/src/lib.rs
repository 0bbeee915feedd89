//! Experiment runner for the `interval-probe` command.

pub mod config;
pub mod forms;
pub mod preset;
pub mod run;

pub use config::ExperimentConfig;
pub use run::{run_case, Failure};
