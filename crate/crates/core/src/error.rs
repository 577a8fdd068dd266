use thiserror::Error;

pub type Result<T> = std::result::Result<T, ChromaError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChromaError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pattern too large: {0}")]
    PatternTooLarge(String),

    #[error("state space too large: {states} colorings exceed the limit of {limit}")]
    StateSpaceTooLarge { states: String, limit: u64 },

    #[error("copy list would hold {copies} copies, above the cap of {cap}")]
    CopyCapExceeded { copies: String, cap: usize },

    #[error("internal counting error: {0}")]
    Internal(String),
}

impl ChromaError {
    /// True for errors raised by a size guard rather than by bad input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            ChromaError::PatternTooLarge(_)
                | ChromaError::StateSpaceTooLarge { .. }
                | ChromaError::CopyCapExceeded { .. }
        )
    }
}
