//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum EcgError {
    #[error("header parse error at line {line}: {msg}")]
    HeaderParse { line: usize, msg: String },

    #[error("unsupported storage format {format} (supported: 212, 16)")]
    UnsupportedFormat { format: i32 },

    #[error("truncated signal payload: expected {expected} bytes, got {actual}")]
    TruncatedSignal { expected: usize, actual: usize },

    #[error("annotation stream error: {0}")]
    AnnotationParse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("signal too short: need at least {need} samples, got {got}")]
    SignalTooShort { need: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("stratification impossible: class {class} has {count} samples, need >= {need}")]
    Stratification {
        class: String,
        count: usize,
        need: usize,
    },

    #[error("pipeline stage '{stage}' failed{}: {source}", record.as_ref().map(|r| format!(" on record {r}")).unwrap_or_default())]
    Stage {
        stage: String,
        record: Option<String>,
        #[source]
        source: Box<EcgError>,
    },

    #[error("model deserialization error: {0}")]
    ModelFormat(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, EcgError>;

impl EcgError {
    /// Wrap an error with pipeline stage context.
    pub fn in_stage(self, stage: &str, record: Option<&str>) -> EcgError {
        EcgError::Stage {
            stage: stage.to_string(),
            record: record.map(|r| r.to_string()),
            source: Box::new(self),
        }
    }
}
