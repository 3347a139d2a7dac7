use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, grouped by exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[source] sta_core::Error),
}

impl From<sta_core::Error> for LabError {
    /// Bad input reported by the core is a configuration error; everything
    /// else is numerical.
    fn from(e: sta_core::Error) -> Self {
        if e.is_numerical() {
            LabError::Numerical(e)
        } else {
            LabError::Config(e.to_string())
        }
    }
}

impl LabError {
    /// Process exit code: 1 for configuration and output problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::Io { .. } => 1,
            LabError::Numerical(_) => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}
