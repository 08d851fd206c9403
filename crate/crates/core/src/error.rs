use crate::poly::VarId;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate variable label `{0}`")]
    DuplicateLabel(String),

    #[error("assignment has no value for variable {0}")]
    MissingVariable(VarId),

    #[error("unknown variable {0}")]
    UnknownVariable(VarId),

    #[error("width mismatch: {left} bits vs {right} bits")]
    WidthMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{free} free variables exceed the exhaustive limit of {limit}; clamp more variables or use simulated annealing")]
    Capacity { free: usize, limit: usize },

    #[error("inconsistent state: {0}")]
    Inconsistent(String),

    #[error("numeric range: {0}")]
    Numeric(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
