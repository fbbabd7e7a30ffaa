//! Experiment drivers behind the `polariton` command.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{Command, ExperimentConfig};
pub use error::CliError;
