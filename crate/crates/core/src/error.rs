use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series inversion needs a unit lowest term: {0}")]
    NotAUnit(String),
    #[error("matrix is singular")]
    Singular,
    #[error("group too large or not finite: closure exceeded {cap} elements")]
    TooLarge { cap: usize },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("unknown group: {0}")]
    UnknownGroup(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("cap too small: {0}")]
    CapTooSmall(String),
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
