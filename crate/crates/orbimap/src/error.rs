use thiserror::Error;

/// Errors surfaced by the counting engine and its front ends.
#[derive(Debug, Error)]
pub enum OrbimapError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division of {numerator} by {denominator} is not exact")]
    NonIntegral { numerator: String, denominator: u64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
