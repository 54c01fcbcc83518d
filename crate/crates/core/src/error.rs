use thiserror::Error;

use crate::signal::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown cell id {0:?}")]
    UnknownCell(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("state spaces differ: {left:?} vs {right:?}")]
    StateSpaceMismatch { left: Vec<String>, right: Vec<String> },

    #[error("horizon mismatch: {left} periods vs {right} periods")]
    HorizonMismatch { left: usize, right: usize },

    #[error("invalid object: {0}")]
    Invalid(Violation),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("strategy enumeration needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v)
    }
}
