use thiserror::Error;

/// Errors produced by the transform, basis and reconstruction routines.
#[derive(Debug, Error)]
pub enum TomoError {
    #[error("length mismatch: expected {expected} components, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("field is not real-valued: A_k != conj(A_(m-k)) (deviation {deviation:e})")]
    NotRealValued { deviation: f64 },

    #[error("invalid basis index: {0}")]
    InvalidIndex(String),

    #[error("basis index {0} denotes the zero field")]
    DegenerateIndex(String),

    #[error("point {0} is not on the unit circle")]
    OffCircle(String),

    #[error("quadrature under-resolved: {0}")]
    UnderResolved(String),

    #[error("unsupported scan geometry: {0}")]
    Geometry(String),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds the sampling limit {limit}")]
    DegreeTooLarge { degree: usize, limit: usize },

    #[error("least-squares system is rank deficient (condition estimate {condition:e}); pass a ridge > 0")]
    RankDeficient { condition: f64 },

    #[error("noise level must be non-negative, got {0}")]
    NegativeLevel(f64),

    #[error("reference field has zero norm")]
    ZeroReference,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown phantom `{0}`")]
    UnknownPhantom(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, TomoError>;
