use thiserror::Error;

/// Errors raised by the exact lattice routines.
///
/// `Parse` and `Usage` are input problems (CLI exit status 2); everything
/// else is a domain error naming the violated precondition (exit status 1).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a W-matrix: violated clause(s) {0}")]
    NotWMatrix(String),

    #[error("not an F-matrix: violated clause(s) {0}")]
    NotFMatrix(String),

    #[error("matrix is not W-positive")]
    NotWPositive,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("ray count {rays} exceeds the enumeration cap {cap}")]
    CapExceeded { rays: usize, cap: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
