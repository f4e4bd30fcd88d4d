use thiserror::Error;

/// Errors raised by constructors and by operations with size limits.
///
/// Positions and directions carried by variants are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate {0} is empty")]
    EmptyCoordinate(usize),
    #[error("coordinate {0} contains {1}, which is outside the ground set")]
    OutOfRange(usize, usize),
    #[error("expected {expected} coordinates, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("parameter {name}={value} is outside the supported range 1..={max}")]
    ParameterOutOfRange {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error("parameters ({found_n},{found_d}) do not match ({n},{d})")]
    ParameterMismatch {
        n: usize,
        d: usize,
        found_n: usize,
        found_d: usize,
    },
    #[error("index {index} is outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("search space of {size} candidates exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("left vertex {0} has no incident edge")]
    EmptyLeftVertex(usize),
    #[error("collection is not a triangulation: {0}")]
    NotATriangulation(String),
    #[error("{0} is not a fine cell of a d=3 mixed subdivision")]
    NotAFineCell(String),
    #[error("embedding is inconsistent: {0}")]
    EmbeddingInconsistent(String),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
