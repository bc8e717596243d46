use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

/// One rejected config field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldViolation {
    pub field: String,
    pub message: String,
}

impl FieldViolation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {}", join(.0))]
    Validation(Vec<FieldViolation>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Experiment(#[from] ergolearn::Error),

    #[error("{0}")]
    Usage(String),
}

fn join(v: &[FieldViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::Io { .. } => "io",
            Self::Schema(_) => "schema",
            Self::Experiment(_) => "experiment",
            Self::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Experiment(_) => 1,
            Self::Validation(_) | Self::Usage(_) => 2,
            Self::Io { .. } => 3,
            Self::Schema(_) => 4,
        }
    }

    /// Names of the rejected fields, for validation errors.
    pub fn fields(&self) -> Vec<&str> {
        match self {
            Self::Validation(v) => v.iter().map(|f| f.field.as_str()).collect(),
            _ => Vec::new(),
        }
    }

    /// Machine-readable form written to stderr on failure.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        if let Self::Validation(v) = self {
            body["violations"] = json!(v);
        }
        if let Self::Io { path, .. } = self {
            body["path"] = json!(path.display().to_string());
        }
        json!({ "error": body })
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
