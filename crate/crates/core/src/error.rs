use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no primitive direction: zero vector")]
    ZeroVector,
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("not a basis fragment: {0}")]
    NotBasisFragment(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("rank-deficient quotient matrix: rank {rank}, rows {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("unknown cone: {0}")]
    UnknownCone(String),
    #[error("malformed cone key {0:?}")]
    MalformedKey(String),
    #[error("element is not in the algebra: entry ({{{row}}}, {{{col}}}) fails divisibility")]
    NotMember { row: String, col: String },
    #[error("fan mismatch")]
    FanMismatch,
    #[error("support violation: {0}")]
    Support(String),
    #[error("lattice map does not carry the fan onto the target fan: {0}")]
    FanMap(String),
    #[error("malformed module data: {0}")]
    Shape(String),
    #[error("module fails validation: {0}")]
    InvalidModule(String),
    #[error("descent datum rejected: {0}")]
    Descent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer {0} does not fit the file format")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
