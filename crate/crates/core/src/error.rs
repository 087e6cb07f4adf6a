use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("unknown model id `{0}`")]
    UnknownModel(String),
    #[error("unknown charge label `{label}` for model {model}")]
    UnknownLabel { model: String, label: String },
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("not available for model {model}: {what}")]
    Unsupported { model: String, what: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("braid word parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("orbit exceeded {limit} states")]
    OrbitTooLarge { limit: usize },
    #[error("unknown case `{0}`")]
    UnknownCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
