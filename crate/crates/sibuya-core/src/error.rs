use alloc::string::String;
use thiserror::Error;

/// Errors reported by model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A set of parameters violates a model invariant.
    #[error("configuration error: {0}")]
    Config(String),

    /// An entity index does not address any component of the model.
    #[error("entity index {index} out of range for dimension {dimension}")]
    EntityIndex { index: usize, dimension: usize },

    /// A vector argument does not match the model dimension.
    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The requested value exceeds the supremum of an integrated rate.
    /// Callers sampling occurrence times treat this as "no further
    /// occurrences", not as a failure.
    #[error("integrated rate range exhausted")]
    RangeExhausted,

    /// The dimension exceeds what the operation can evaluate reliably.
    #[error("{what}: dimension {got} exceeds supported maximum {limit}")]
    DimensionLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// A closed form exists only under stricter model assumptions.
    #[error("not available: {0}")]
    NotAvailable(String),

    /// A numeric procedure failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = core::result::Result<T, Error>;
