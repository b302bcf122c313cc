use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("bag sizes sum to {actual}, expected {expected}")]
    ScaleMismatch { expected: String, actual: String },

    #[error("instance exceeds exact-search limits: {0}")]
    SizeLimit(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("ratio undefined: optimal makespan is zero")]
    DivisionUndefined,

    #[error("internal failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
