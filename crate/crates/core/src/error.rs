use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {n}")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrices live on different graphs")]
    GraphMismatch,

    #[error("geodesic-width {width} exceeds communication range {range}")]
    RangeViolation { width: usize, range: usize },

    #[error("message from {from} to {to} crosses hop distance beyond range {range}")]
    Undeliverable { from: usize, to: usize, range: usize },

    #[error("invalid preconditioner: entry {index} is {value}")]
    InvalidPreconditioner { index: usize, value: f64 },

    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
