use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error("{op} failed: {source}")]
    Numerical { op: &'static str, source: tailpath::Error },

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

/// Attaches the name of the failing operation to a library error.
pub trait OpContext<T> {
    fn op(self, op: &'static str) -> Result<T, CliError>;
}

impl<T> OpContext<T> for tailpath::Result<T> {
    fn op(self, op: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numerical { op, source })
    }
}
