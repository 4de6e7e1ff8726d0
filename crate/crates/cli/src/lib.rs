//! Library side of the `blochosc` command: scenario configuration, batch
//! runs, CSV output, comparison reports and the algebra check.

pub mod algebra_check;
pub mod config;
pub mod error;
pub mod report;
pub mod runner;
pub mod verify;

pub use error::{CliError, CliResult};
