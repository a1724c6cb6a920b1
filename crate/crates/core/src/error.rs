use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("quiver has an oriented cycle")]
    CyclicQuiver,

    #[error("graph has a loop at vertex {0}")]
    LoopInGraph(usize),

    #[error("weight does not sum to zero on the component containing `{0}`")]
    Unbalanced(String),

    #[error("no reducible valency-2 sink pattern present")]
    PatternAbsent,

    #[error("vector is not a circulation (imbalance at vertex `{0}`)")]
    NotACirculation(String),

    #[error("centering precondition violated: {0}")]
    Centering(String),

    #[error("empty polytope")]
    EmptyPolytope,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("polytope is not compressed")]
    NotCompressed,

    #[error("grobner order needs at most one singular vertex, found {0}")]
    TooManySingular(usize),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
