use thiserror::Error;

/// Errors raised by graph construction, the estimators and the evaluation
/// routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    OutOfRangeNode { node: i64, node_count: usize },
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("node {0} is isolated")]
    IsolatedNode(usize),
    #[error("too many edges: {edges} requested but a simple graph on {nodes} nodes has at most {max}")]
    TooManyEdges { nodes: usize, edges: usize, max: usize },
    #[error("no connected graph found after {0} attempts")]
    ConnectivityRetryExhausted(usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("rank too large: requested {requested}, at most {max} possible")]
    RankTooLarge { requested: usize, max: usize },
    #[error("graph too large: {nodes} nodes exceeds the limit of {limit}")]
    GraphTooLarge { nodes: usize, limit: usize },
    #[error("membership does not cover node {0}")]
    IncompleteMembership(usize),
    #[error("feature map does not cover node {0}")]
    IncompleteFeatureMap(usize),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("model is not fitted")]
    NotFitted,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("class {0} has no positive or no negative samples")]
    SingleClassTest(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for violations of the graph contract (connectivity), as opposed
    /// to malformed input or parameters.
    pub fn is_graph_contract(&self) -> bool {
        matches!(self, Error::DisconnectedGraph | Error::IsolatedNode(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
