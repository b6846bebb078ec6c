//! Batch front end: sectioned input files in, JSON reports out.

pub mod error;
pub mod input;
pub mod report;
pub mod run;

pub use error::CliError;
pub use run::{report, Bounds, Cli, Command};
