use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A result could not be certified at the working precision.
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("gcd({d}, {h}) != 1")]
    NotCoprime { d: i64, h: i64 },
    #[error("isocrystal is not effective (has a negative slope)")]
    NotEffective,
    #[error("filtration has negative degree {0}")]
    NegativeFiltration(i64),
    #[error("subspace is not stable under Frobenius")]
    NotStable,
    /// Exact subobject enumeration is not available for this object.
    #[error("exact enumeration unavailable: {0}")]
    EnumerationUnavailable(String),
    #[error("operation undefined on the zero object")]
    ZeroObject,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
