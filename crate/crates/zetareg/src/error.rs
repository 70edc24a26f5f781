//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation was requested at a pole of the function.
    #[error("pole: {0}")]
    Pole(String),

    /// An index or size argument is out of range.
    #[error("range error: {0}")]
    Range(String),

    /// The request exceeds the configured memory or work budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A caller-facing precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An intermediate value exceeds the representable exponent range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A bracketed root search found no sign change.
    #[error("no root in bracket: {0}")]
    NoRoot(String),

    /// Results computed at two precision levels disagree.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// A full-segment integral used as a denominator vanished.
    #[error("zero segment integral in {0}")]
    ZeroSegment(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
