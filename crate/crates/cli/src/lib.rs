//! Command implementations behind the `spectral-sketch` binary.

pub mod commands;
pub mod error;
pub mod plot;

pub use error::{CliError, Result};
