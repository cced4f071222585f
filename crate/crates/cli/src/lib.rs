//! Command-line front end for `bianchi-core`: single runs, parameter sweeps
//! and the verification suite.

pub mod config;
pub mod error;
pub mod io;
pub mod report;
pub mod run;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result};
