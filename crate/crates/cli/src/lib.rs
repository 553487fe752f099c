//! Command-line front end for `spintree`: build networks from JSON configs,
//! run pulse/measurement schedules to CSV, and self-verify.

pub mod commands;
pub mod config;
mod error;
pub mod verify;

pub use commands::{cmd_evolve, cmd_generate};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use verify::{run_checks, Summary, VerifyOptions};
