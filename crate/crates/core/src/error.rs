use thiserror::Error;

/// Errors produced by the series, enumeration and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("q-order {order} outside stored range 0..={trunc}")]
    OrderOutOfRange { order: usize, trunc: usize },

    #[error("factor q-exponent must be at least 1")]
    ZeroStep,

    /// An exact division left a remainder.
    #[error("coefficient at q^{order} is not divisible by {divisor}")]
    NotDivisible { order: usize, divisor: &'static str },

    #[error("usage: {0}")]
    Usage(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("unsupported Bessel order: {0}")]
    UnsupportedOrder(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
