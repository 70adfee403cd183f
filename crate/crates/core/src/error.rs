use thiserror::Error;

/// Errors surfaced by parsing, validation, and the resource-guarded oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A value is syntactically fine but outside the accepted range.
    #[error("value error: {0}")]
    Value(String),

    /// An argument refers to something that does not exist or combines
    /// options that cannot be combined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A guarded computation exceeded its configured limit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
