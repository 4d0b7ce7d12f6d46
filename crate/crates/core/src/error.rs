use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("anchor is not on the cycle or path")]
    AnchorNotOnCycle,
    #[error("not a valid {kind}: {reason}")]
    InvalidStructure { kind: &'static str, reason: String },
    #[error("infeasible witness forest: {0}")]
    InfeasibleForest(String),
    #[error("no root in bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error("non-special 4-cycle count {count} at vertex {vertex} exceeds bound {bound}")]
    BoundViolated {
        vertex: usize,
        count: usize,
        bound: f64,
    },
    #[error("refusing brute force over {elements} elements (limit {limit})")]
    RefuseTooLarge { elements: usize, limit: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
