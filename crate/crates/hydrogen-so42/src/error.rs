//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, verification, and quadrature routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation before any computation started.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two matrices built over different truncated bases were combined.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// A resolvent evaluation hit (or came numerically too close to) an
    /// eigenvalue of the operator being inverted.
    #[error("singular resolvent: {0}")]
    SingularResolvent(String),

    /// An adaptive quadrature failed to meet its tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    /// I/O or serialization failure at the CLI boundary.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
