use thiserror::Error;

use crate::hypergraph::Edge;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex-count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a dyadic rational: {0}")]
    NonDyadic(String),

    #[error("cannot parse weight {0:?}")]
    ParseWeight(String),

    #[error("edge {edge} containing qubit {qubit} has weight {weight}, expected 1")]
    FractionalIncidentEdge { qubit: usize, edge: Edge, weight: String },

    #[error("X^{alpha} on qubit {qubit} leaves the class of weighted hypergraph states")]
    LeavesHypergraphClass { qubit: usize, alpha: String },

    #[error("state is not a graph state")]
    NotAGraphState,

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{n} qubits exceeds the oracle limit of {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("operator entry {index} is {value}, expected +1 or -1")]
    NotInvolution { index: usize, value: i8 },

    #[error("matrix is not unitary (deviation {0})")]
    NotUnitary(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("adjacency matrix is invalid: {0}")]
    InvalidAdjacency(String),

    #[error("invalid bipartite split: {0}")]
    InvalidSplit(String),

    #[error("lemma precondition violated: {0}")]
    LemmaPrecondition(String),

    #[error("construction too large: {0}")]
    ConstructionTooLarge(String),

    #[error("local gates do not cancel to a graph state; surviving edges: {surviving}")]
    CancellationFailed { surviving: String },

    #[error("solver and parity argument disagree: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
