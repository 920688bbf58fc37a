use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] pseudopower_core::Error),
}

impl CliError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        Self::Validation {
            field: field.to_owned(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Self::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Parse { .. } => "ParseError",
            Self::Validation { .. } => "ValidationError",
            Self::Io { .. } => "IoError",
            Self::Core(_) => "CoreError",
        }
    }

    /// JSON record written to stderr when a command aborts.
    pub fn record(&self) -> ErrorRecord {
        let (line, field) = match self {
            Self::Parse { line, .. } => (*line, None),
            Self::Validation { field, .. } => (None, Some(field.clone())),
            _ => (None, None),
        };
        ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
            line,
            field,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}
