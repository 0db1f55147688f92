//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum QworkError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The dilation unitary does not commute with the total Hamiltonian, so
    /// the induced map is not a thermal channel.
    #[error("not a thermal channel: {0}")]
    NotThermal(String),

    /// Raised when a finite maximization is requested for a channel whose
    /// distillable work grows without bound.
    #[error(
        "unbounded channel: work grows without bound along the witness direction \
         (max eigenvalue of X^T G X - G is {witness_eigenvalue:.6e})"
    )]
    Unbounded {
        witness_eigenvalue: f64,
        witness: Vec<f64>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, QworkError>;
