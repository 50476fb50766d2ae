use thiserror::Error;

pub type Result<T> = std::result::Result<T, SksError>;

#[derive(Debug, Error)]
pub enum SksError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("target size {k} out of range {lo}..={hi}")]
    SizeOutOfRange { k: usize, lo: usize, hi: usize },

    #[error("penalty parameter mu must be positive, got {0}")]
    NonPositiveMu(f64),

    #[error("dimension mismatch: model has {expected} variables, assignment has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{dim} variables exceeds the exhaustive limit of {limit}")]
    ExhaustiveLimit { dim: usize, limit: usize },

    #[error("more than {0} minimizers; enumeration aborted")]
    MinimizerCap(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("boundary window hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
