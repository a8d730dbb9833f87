use thiserror::Error;

use crate::solvers::SolverResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("graph is disconnected ({} components); reduce each component separately: {components:?}", components.len())]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("invalid witness: {0}")]
    WitnessInvalid(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("time budget exceeded after exploring {} subsets", partial.explored)]
    TimeBudgetExceeded { partial: Box<SolverResult> },

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
