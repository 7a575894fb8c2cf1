//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A precondition of an operation was violated (degenerate or
    /// out-of-contract input that is not a config-file problem per se).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A dynamic run produced a non-finite value.
    #[error("solution blow-up at step {step}, node {node}: value {value}")]
    BlowUp { step: usize, node: usize, value: f64 },

    #[error("matrix dimension {dim} exceeds dense eigensolver guard {guard}")]
    DimensionGuard { dim: usize, guard: usize },

    #[error("root bracketing failed: {0}")]
    RootFind(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
