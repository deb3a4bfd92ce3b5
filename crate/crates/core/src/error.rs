use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph too large for exhaustive enumeration ({n} > {limit} vertices)")]
    TooLarge { n: usize, limit: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("broken witness: {0}")]
    Witness(String),
    #[error("cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
