//! Command-line front end for the coated-layer models.
//!
//! Subcommands read a [`config::RunConfig`], compute, and write their
//! outputs together with a `manifest.toml` that records the resolved
//! configuration so the run can be repeated from it.

// negated comparisons are used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod plot;

/// Failure classes, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid or incomplete configuration (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// A computation failed (exit code 3).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Output could not be written (exit code 1).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
