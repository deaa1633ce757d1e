use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("validation error: {0}")]
    Validation(#[from] nlva_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse { location: location.into(), message: message.into() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
