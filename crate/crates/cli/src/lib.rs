//! Configuration, orchestration and output for the `nlsbvp` command.

pub mod config;
pub mod data;
pub mod error;
pub mod output;
pub mod run;

pub use config::{emit, parse_config, RunConfig};
pub use error::CliError;
pub use run::{execute, run};
