use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("inconsistent radical: {0}")]
    InconsistentRadical(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("budget exceeded after {0} nodes")]
    BudgetExceeded(usize),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
