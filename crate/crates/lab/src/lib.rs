//! Config-driven experiment runner over `rmt-core`: JSON in, CSV tables and
//! a JSON summary out.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod presets;

pub use config::ExperimentConfig;
pub use error::LabError;
pub use experiments::{run, RunOutput, Table};
