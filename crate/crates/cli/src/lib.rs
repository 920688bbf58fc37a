//! Batch front end for the `pseudopower-core` pipelines.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use commands::{run_command, Command, Outcome};
pub use config::{load_config, parse_config, RunConfig};
pub use error::CliError;
