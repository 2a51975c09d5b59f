use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Param(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: seba_core::Error,
    },

    #[error(transparent)]
    Core(#[from] seba_core::Error),

    #[error("root on gap {gap_index} has bracket width {width}, above the tolerance {tol}")]
    Tolerance {
        gap_index: usize,
        width: f64,
        tol: f64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("thread pool: {0}")]
    Threads(String),
}

impl CliError {
    /// 2 for bad parameters or input, 3 for numerical failures, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Tolerance { .. } => 3,
            CliError::Io { .. } | CliError::Threads(_) => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
