//! Library side of the `qwalk` binary: configuration, file formats and the
//! subcommands, exposed so the integration tests can drive them directly.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sampling;

pub use error::CliError;
