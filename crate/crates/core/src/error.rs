use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph has {0} vertices, at most 128 are supported")]
    Capacity(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {0} is not alive in this position")]
    DeadVertex(usize),

    #[error("search budget of {0} node expansions exhausted")]
    BudgetExhausted(u64),

    #[error("game is outside Milnor's universe: {0}")]
    NotMilnor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
