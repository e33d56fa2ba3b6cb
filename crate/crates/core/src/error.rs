use thiserror::Error;

use crate::solver::Outcome;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value at vertex index {0}")]
    NonFinite(usize),

    #[error("incompatible right-hand side: integral {integral:e} exceeds tolerance {tolerance:e}")]
    Incompatible { integral: f64, tolerance: f64 },

    #[error("linear solver failure: {0}")]
    SolverFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input is not a converged solution (outcome {0})")]
    NotConverged(Outcome),

    #[error("invalid bracket: {0}")]
    Bracket(String),

    #[error("critical bound violated: bracket top {hi} lies below 16πN/|V| = {bound}")]
    CriticalBound { hi: f64, bound: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
