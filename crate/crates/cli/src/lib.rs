//! Command-line front end: census ingestion, report rendering and the
//! `apportion` subcommands.

pub mod census;
pub mod commands;
pub mod error;
pub mod report;

pub use commands::run;
pub use error::{CliError, Result};
