use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid link index {index} for uniformity {r}")]
    InvalidLink { index: usize, r: usize },

    #[error("expected {expected} distinct points, got {got}")]
    WrongCardinality { expected: usize, got: usize },

    #[error("coordinate {value} outside [1, {n}]")]
    CoordinateRange { value: u8, n: usize },

    #[error("point set too small: got {got}, the guarantee requires at least {required}")]
    GuaranteeNotApplicable { got: usize, required: usize },

    #[error("malformed order tuple: {0}")]
    MalformedTuple(String),

    #[error("malformed signed lexicographic order: {0}")]
    MalformedOrder(String),

    #[error("uniformity mismatch: tree is {tree_r}-uniform, host spec is {spec_r}-uniform")]
    UniformityMismatch { tree_r: usize, spec_r: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("unknown spec id `{0}` (expected h3, h4, sym4 or general:<r>:<orders>)")]
    UnknownSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
