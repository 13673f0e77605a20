use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched dimensions between inputs (vector/point length, nvars).
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    /// Input violates a documented precondition or encoding rule.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Geometric degeneracy (degenerate plane, singular restriction).
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    /// A rejection sampler ran out of attempts.
    #[error("sampling exhausted: {0}")]
    Sampling(String),
    /// A numerical kernel failed to converge or produced non-finite data.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// An invariant the library guarantees internally was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
