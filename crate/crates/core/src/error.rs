use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("representation error: {0}")]
    Representation(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("the graph of the set-valued map is empty")]
    EmptyGraph,

    #[error("no optimizers exist: the natural ordering cone K differs from G(0)")]
    NoOptimizers,

    #[error("point {point:?} lies outside the current options (distance {distance:.6e})")]
    OutsideOptions {
        point: Vec<f64>,
        nearest: Option<Vec<f64>>,
        distance: f64,
    },

    #[error("unknown selection id {0}")]
    UnknownSelection(u64),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
