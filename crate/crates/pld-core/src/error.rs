use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or matcher parameter violates its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Malformed caller input (out-of-range vertex ids and the like).
    #[error("invalid input: {0}")]
    Input(String),

    /// A text input file failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A parameter estimator had nothing to work with.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// Accuracy scoring was asked for without usable ground truth.
    #[error("scoring error: {0}")]
    Scoring(String),

    /// A benchmark configuration is inconsistent.
    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
