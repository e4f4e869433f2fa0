use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    /// The problem could not be built from an otherwise well-formed config.
    #[error("problem setup: {0}")]
    Setup(#[source] saddle_core::Error),

    /// The solver itself failed.
    #[error("solver: {0}")]
    Solver(#[from] saddle_core::Error),

    #[error("sweep needs at least {needed} successful runs, got {got}{}", first_error.as_ref().map(|e| format!(" (first failure: {e})")).unwrap_or_default())]
    InsufficientSweep {
        needed: usize,
        got: usize,
        first_error: Option<String>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Process exit code: 2 when the solver ran but failed, 1 for everything
    /// that prevented it from running.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Solver(_) => 2,
            _ => 1,
        }
    }
}
