use thiserror::Error;

/// Errors raised by graph construction, the linear algebra layers and the
/// certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("loop on vertex {0}")]
    LoopEdge(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge {{{0},{1}}} is already present")]
    EdgeAlreadyPresent(usize, usize),
    #[error("unknown catalog graph `{0}`")]
    UnknownGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("liberation set must be nonempty")]
    EmptyBeta,
    #[error("edge {{{0},{1}}} of beta is an edge of the graph")]
    BetaIntersectsEdges(usize, usize),
    #[error("E(G) is not contained in E(H)")]
    NotSpanningSubgraph,
    #[error("liberation criteria disagree: {0}")]
    CriteriaDisagreement(String),
    #[error("solver did not converge: {0}")]
    NonConvergence(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("vertex bound exceeded: {n} > {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("ambiguous eigenvalue clustering near tolerance {0}")]
    AmbiguousClustering(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
