use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("coordinate x{coord} out of range for level {level}")]
    CoordinateOutOfRange { coord: usize, level: usize },

    #[error("index out of bounds: {0}")]
    Bounds(String),

    #[error("resource cap exceeded: {what} would exceed {cap}")]
    Resource { what: &'static str, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),

    #[error("family mismatch: {0} vs {1}")]
    FamilyMismatch(String, String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("malformed descriptor: {0}")]
    Malformed(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
