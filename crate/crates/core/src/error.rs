use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex not in graph: {0}")]
    UnknownVertex(Vertex),

    #[error("pivot requires an edge, but ({0}, {1}) is not one")]
    NotAnEdge(Vertex, Vertex),

    #[error("duplicate vertex label {0}")]
    DuplicateVertex(Vertex),

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),

    #[error("graphs are limited to {max} vertices, got {got}")]
    TooManyVertices { got: usize, max: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what}: size {actual} exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("vertex sets differ")]
    VertexSetMismatch,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("invalid rank-decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("variable `{name}` is used as a {found} variable where a {expected} variable is required")]
    KindMismatch {
        name: String,
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("not a tripartition of the vertex set")]
    NotAPartition,

    #[error("not an Eulerian vector of the graph")]
    NotEulerian,

    #[error("internal consistency violation: {0}")]
    Inconsistent(String),

    #[error("state dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit {0} is not in a computational basis state")]
    NotFactorizable(Vertex),

    #[error("singular values are too close to the rank threshold: {0:e}")]
    AmbiguousSpectrum(f64),

    #[error("missing measurement outcome for vertex {0}")]
    MissingOutcome(Vertex),

    #[error("malformed plan: {0}")]
    MalformedPlan(String),
}

impl Error {
    /// True for errors that report a configured size cap rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. } | Error::TooManyVertices { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
