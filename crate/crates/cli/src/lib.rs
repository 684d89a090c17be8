//! Experiment harness around `qkacz_core`: configuration, instance
//! generation and ingestion, trial orchestration, and report files.

pub mod config;
pub mod error;
pub mod experiment;
pub mod instance;
pub mod matrix_io;
pub mod report;

pub use config::{Experiment, ExperimentConfig, InstanceKind, InstanceSpec, Method, Mode};
pub use error::CliError;
pub use experiment::{run_experiment, Report};
pub use report::write_report;
