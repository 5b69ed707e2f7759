use idm_core::IdmError;
use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

/// Every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Idm(#[from] IdmError),
    #[error("cannot access `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed model file: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}
