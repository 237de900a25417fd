use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable mismatch: {0}")]
    VarMismatch(String),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("substitute for `{0}` has a nonzero constant term")]
    ConstantTerm(String),
    #[error("series is not a unit")]
    NotUnit,
    #[error("Jacobian block at the origin is singular")]
    SingularJacobian,
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("truncation order exhausted: {0}")]
    OrderExhausted(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("reality violation: {0}")]
    Reality(String),
    #[error("coordinates are not normal")]
    NotNormal,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
