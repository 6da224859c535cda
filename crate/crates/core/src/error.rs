use thiserror::Error;

/// Errors raised by the library. Matrix positions are reported 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("entry ({row},{col}) is {value}, expected 0 or 1")]
    NotBinary { row: usize, col: usize, value: u8 },

    #[error("diagonal entry ({0},{0}) is not 1")]
    BadDiagonal(usize),

    #[error("entry ({row},{col}) below the diagonal is nonzero")]
    LowerTriangleNonzero { row: usize, col: usize },

    #[error("size {size} is out of range {min}..={max}")]
    SizeOutOfRange { size: usize, min: usize, max: usize },

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("index {index} is out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NotBinary { .. } => "NotBinary",
            Error::BadDiagonal(_) => "BadDiagonal",
            Error::LowerTriangleNonzero { .. } => "LowerTriangleNonzero",
            Error::SizeOutOfRange { .. } => "SizeOutOfRange",
            Error::MalformedLine { .. } => "MalformedLine",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::InternalInconsistency(_) => "InternalInconsistency",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInconsistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
