use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid entries: {0}")]
    InvalidEntries(String),

    #[error("not a tournament: {0}")]
    NotTournament(String),

    #[error("matrix is not in bordered normal form: {0}")]
    NotNormalized(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("search infeasible: {0}")]
    Infeasible(String),

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
}
