//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation too close to a pole; carries the offending denominator.
    #[error("pole proximity: |denominator| = {denom:e}")]
    Pole { denom: f64 },

    /// A series failed to reach the requested tolerance within the term cap.
    #[error("series did not reach tolerance {tol:e} within {max_terms} terms")]
    Convergence { tol: f64, max_terms: usize },

    /// Two quantities that must agree by construction did not.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    /// Expression syntax error with a byte offset into the source text.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A sum spec that cannot be rewritten as a q-digamma combination.
    #[error("unsupported sum shape for q-digamma bridge: {0}")]
    Bridge(String),

    /// Corpus file format error with a 1-based line number.
    #[error("corpus format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
