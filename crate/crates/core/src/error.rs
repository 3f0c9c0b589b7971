use alloc::string::String;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex id {id} out of range for a graph with {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weight must be a positive integer")]
    NonPositiveWeight,
    #[error("eigensolver did not converge within {0} matrix-vector products")]
    NoConvergence(usize),
    #[error("no sweep threshold yields an admissible bisection")]
    NoAdmissibleSweep,
    #[error("invalid bisection: {0}")]
    InvalidBisection(String),
    #[error("partitioner failed: {0}")]
    Partitioner(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("node {node} has {children} children; a binary tree is required")]
    NonBinary { node: usize, children: usize },
    #[error("no selection of at most {0} labels is feasible at this threshold")]
    InfeasibleBudget(usize),
    #[error("scaled integer arithmetic would overflow")]
    Overflow,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("rational reconstruction failed at {0}")]
    Reconstruction(String),
    #[error("vertex {0} is not an eligible label")]
    NotEligible(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
