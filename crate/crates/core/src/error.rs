use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),
    #[error("zero input: {0}")]
    Zero(&'static str),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("non-unimodular pair in P1: ({0}, {1})")]
    Degenerate(String, String),
    #[error("matrix determinant is not a unit modulo the level")]
    NonUnitDeterminant,
    #[error("algebra config: {0}")]
    Config(String),
    #[error("wrong ramification: {0}")]
    Ramification(String),
    #[error("order is not maximal: reduced discriminant norm {found}, expected {expected}")]
    NotMaximal { found: String, expected: String },
    #[error("basis is not integral: {0}")]
    NotIntegral(String),
    #[error("algebra is not totally definite")]
    Indefinite,
    #[error("level and discriminant are not coprime")]
    LevelCollision,
    #[error("residue splitting failed: {0}")]
    Splitting(String),
    #[error("enumeration mismatch: {0}")]
    Enumeration(String),
    #[error("linear algebra: {0}")]
    Linalg(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
