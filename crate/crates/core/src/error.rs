use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid monotone map: {0}")]
    InvalidMonotone(String),

    #[error("composition error: {0}")]
    Composition(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("group context mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid simplicial object: {0}")]
    InvalidSimplicial(String),

    #[error("index outside truncation: {0}")]
    OutOfTruncation(String),

    #[error("precondition violated at level {level}: {reason}")]
    Precondition { level: usize, reason: String },

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("boundary does not square to zero: {0}")]
    BoundaryNonzero(String),

    #[error("degree {degree} lies outside the validity window (certified through {window:?})")]
    OutsideWindow { degree: usize, window: Option<usize> },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("size budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid blow-up square: {0}")]
    InvalidBlowup(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
