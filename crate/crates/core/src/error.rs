use thiserror::Error;

pub type Result<T> = std::result::Result<T, HxError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HxError {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("spectrum is not one-sided: bin {bin} has magnitude {magnitude:e}")]
    NotOneSided { bin: usize, magnitude: f64 },

    #[error("log image is singular at zero frequency")]
    SingularFrequency,

    #[error("degenerate fit: signal norm {norm:e} is effectively zero")]
    DegenerateFit { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient decay: endpoint magnitude {endpoint:e} exceeds {limit:e}")]
    InsufficientDecay { endpoint: f64, limit: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error(
        "argument increment {increment} at node {index} is ambiguous; increase the node count"
    )]
    Density { index: usize, increment: f64 },

    #[error("insufficient data: need at least 2 samples, got {0}")]
    InsufficientData(usize),

    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}
