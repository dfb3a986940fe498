//! Reconstruction of hidden graphs from shortest-path distance queries.
//!
//! The hidden graph is only reachable through a [`CountingOracle`], which
//! answers exact hop distances and counts every distinct pair asked.
//! [`reconstruct`] recovers the edge set of a connected graph of maximum
//! degree `Δ` and treelength `k` with `O(n log² n)` queries in expectation
//! for fixed `Δ` and `k`.
//!
//! ```
//! use distrecon::{reconstruct, CountingOracle, ReconstructionConfig};
//! use distrecon::witness::gen_random_tree;
//!
//! let inst = gen_random_tree(100, 3, 1).unwrap();
//! let mut oracle = CountingOracle::new(inst.graph.clone()).unwrap();
//! let report = reconstruct(&mut oracle, 100, &ReconstructionConfig::new(1, 3, 42)).unwrap();
//! assert_eq!(report.edges, inst.graph.edge_set());
//! ```

pub mod bench;
mod dsu;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod properties;
pub mod reconstruct;
pub mod witness;

pub use dsu::DisjointSets;
pub use error::{BenchError, GraphError, OracleError, PropertyError, ReconError, WitnessError};
pub use graph::{Edge, Graph, Vertex};
pub use oracle::{CountingOracle, DistanceQueries, DistanceTable, OracleStats};
pub use reconstruct::{reconstruct, reconstruct_observed, ReconstructionConfig, ReconstructionReport};
