//! CLI error type with the exit-code contract: 1 usage/configuration,
//! 2 numerical or I/O failure, 3 validation failure.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Numerical(#[from] corioband_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("validation failed: {failed} of {total} checks")]
    ValidationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
            CliError::ValidationFailed { .. } => 3,
        }
    }
}

/// Result alias for CLI operations.
pub type CliResult<T> = std::result::Result<T, CliError>;
