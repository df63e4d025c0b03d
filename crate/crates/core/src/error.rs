use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {from} -> {to} has an undeclared endpoint")]
    DanglingEdge { from: String, to: String },
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex `{0}` does not lie on a cycle")]
    VertexNotOnCycle(String),
    #[error("graph has {count} vertices; subset search is capped at {cap}")]
    TooManyVertices { count: usize, cap: usize },
    #[error("malformed graph file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("the relation is not defined on the zero element")]
    ZeroElement,
    #[error("unknown vertex `{0}` in element")]
    UnknownVertex(String),
    #[error("cannot parse term `{term}`: {reason}")]
    Syntax { term: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("the empty graph has no Leavitt path algebra to classify")]
    EmptyGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Serre holds on a graph that is not a rose, yet the purely infinite
    /// simple conditions or the (Z/nZ, 1) shape of K0 fail. Either the
    /// engine is wrong or the graph is a counterexample.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}
