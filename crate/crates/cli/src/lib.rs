//! Library side of the `uptilt` command: settings resolution, CSV sweeps and
//! single-point reports. `main.rs` only parses arguments and maps errors to
//! exit codes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod format;
pub mod report;
pub mod settings;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag or config value, or an infeasible single-point request.
    #[error("{0}")]
    Invalid(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<uptilt_core::Error> for CliError {
    fn from(err: uptilt_core::Error) -> Self {
        match err {
            uptilt_core::Error::Quadrature { .. } => CliError::Numerical(err.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
