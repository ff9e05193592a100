//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the construction and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A partition or permutation is malformed.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Two inputs that must describe the same `n` (or the same symmetry) do not.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// The transpositions do not generate the full symmetric group.
    #[error("generating set does not generate S_{n}: swap graph has {components} components")]
    NotGenerating { n: usize, components: usize },

    /// The requested combination is outside the supported scope.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A dense computation would exceed its size budget.
    #[error("dimension budget exceeded: {what} needs {needed}, limit {limit}")]
    Budget { what: String, needed: usize, limit: usize },

    /// A matrix that must be a stochastic / reversible transition matrix is not.
    #[error("not a valid Markov chain: {0}")]
    NotStochastic(String),

    /// A spectral gap is non-positive where a positive gap is required.
    #[error("no convergence: spectral gap {0} is not positive")]
    NoGap(f64),

    /// An internal consistency check failed; this signals a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    /// Filesystem or serialization failure with path context.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
