use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("invalid tree decomposition: {0}")]
    Invalid(String),
    #[error("graph is disconnected; decomposition length is undefined")]
    Disconnected,
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
    #[error("exact treelength search is limited to {limit} vertices (got {n})")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("hidden graph must be connected")]
    Disconnected,
    #[error("vertex {vertex} out of range for oracle on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("query budget of {budget} distinct pairs exhausted")]
    BudgetExhausted { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what} overflows for delta={delta}, k={k}; pass an explicit override")]
    ParameterOverflow { what: &'static str, delta: u32, k: u32 },
    #[error("betweenness estimation needs at least two vertices in the component")]
    ComponentTooSmall,
    #[error("vertex universe of size {universe} does not match oracle of size {oracle}")]
    UniverseMismatch { universe: usize, oracle: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error("betweenness needs |A| >= 2 (got {0})")]
    SetTooSmall(usize),
    #[error("vertex set does not induce a connected subgraph")]
    NotConnected,
    #[error("witness rejected: {0}")]
    BadWitness(String),
    #[error("unknown property suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Recon(#[from] ReconError),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Recon(#[from] ReconError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
