//! JSON configs, reports and the `haag` command line over `haag-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use cli::run;
pub use error::{CliError, CliResult};
pub use report::Report;
