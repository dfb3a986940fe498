//! Randomised divide-and-conquer reconstruction of a bounded-degree,
//! bounded-treelength graph from distance queries.
//!
//! Each recursion node holds a connected component `A` together with its
//! exact boundary layers `R^1..R^{3k}`. It finds a balanced separator `S`
//! (the `⌊3k/2⌋`-ball of a sampled high-betweenness vertex), splits `A ∖ S`
//! into components, recomputes boundary layers for each component from one
//! batch `Query(S ∪ R^{≤3k}, A)`, recurses, and glues the pieces back with
//! the distance-1 pairs of that batch. Components of at most
//! `max(2, ⌊log2 n⌋)` vertices are solved by asking every pair.

mod config;
mod separator;
mod state;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use config::{alpha, base_threshold, sample_constant, ReconstructionConfig};
pub use separator::{
    compute_separator, estimate_high_betweenness_vertex, find_balanced_separator, is_alpha_balanced,
    partition_components, sample_count, SeparatorSearch,
};
pub use state::{child_state, child_state_with_boundary_batch, RecursionState};

use crate::error::{OracleError, ReconError};
use crate::graph::{Edge, Vertex};
use crate::oracle::{CountingOracle, DistanceQueries, DistanceTable, OracleStats};

/// Resolved parameters of a run, echoed in its report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub k: u32,
    pub delta: u32,
    pub sample_constant: f64,
    pub base_threshold: usize,
    pub alpha: f64,
    pub max_retries_per_node: u32,
    pub seed: u64,
    pub boundary_batch: bool,
}

/// Output of [`reconstruct`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    /// Canonical edge list of the recovered graph.
    pub edges: Vec<Edge>,
    pub stats: OracleStats,
    /// Deepest recursion level reached (root is 0, brute-forced leaves count).
    pub depth: u32,
    /// Failed separator attempts, keyed by internal node (pre-order id).
    pub retries: BTreeMap<u64, u32>,
    /// Internal nodes whose retry allowance ran out and were brute-forced.
    pub fallbacks: u32,
    /// Distinct pairs first charged by the optional boundary batches.
    pub extra_batch_pairs: u64,
    pub config_echo: ConfigEcho,
}

impl ReconstructionReport {
    pub fn internal_nodes(&self) -> usize {
        self.retries.len()
    }

    pub fn total_retries(&self) -> u64 {
        self.retries.values().map(|&r| r as u64).sum()
    }

    pub fn mean_retries(&self) -> f64 {
        if self.retries.is_empty() {
            0.0
        } else {
            self.total_retries() as f64 / self.retries.len() as f64
        }
    }
}

/// Snapshot of one internal node after its separator was accepted.
#[derive(Debug)]
pub struct NodeEvent<'a> {
    pub node: u64,
    pub depth: u32,
    pub state: &'a RecursionState,
    pub pivot: Vertex,
    pub separator: &'a [Vertex],
    pub partition: &'a [Vec<Vertex>],
    /// States handed to recursive calls (blocks above the leaf size).
    pub children: &'a [RecursionState],
    pub retries: u32,
    /// Every vertex passed to the oracle at this node, sorted.
    pub queried: &'a [Vertex],
}

/// Instrumentation hook, called once per internal node.
pub trait NodeObserver {
    fn on_node(&mut self, event: &NodeEvent<'_>);
}

/// Oracle wrapper that records which vertices a node passes to the oracle.
struct Traced<'o> {
    oracle: &'o mut CountingOracle,
    log: Option<Vec<Vertex>>,
}

impl DistanceQueries for Traced<'_> {
    fn query_batch(&mut self, rows: &[Vertex], cols: &[Vertex]) -> Result<DistanceTable, OracleError> {
        if let Some(log) = &mut self.log {
            log.extend_from_slice(rows);
            log.extend_from_slice(cols);
        }
        self.oracle.query_batch(rows, cols)
    }
}

/// Recovers the edge set of the oracle's hidden graph on vertices `0..n`.
pub fn reconstruct(
    oracle: &mut CountingOracle,
    n: usize,
    config: &ReconstructionConfig,
) -> Result<ReconstructionReport, ReconError> {
    Reconstructor::new(oracle, n, config, None)?.run()
}

/// [`reconstruct`] with a per-node instrumentation callback.
pub fn reconstruct_observed(
    oracle: &mut CountingOracle,
    n: usize,
    config: &ReconstructionConfig,
    observer: &mut dyn NodeObserver,
) -> Result<ReconstructionReport, ReconError> {
    Reconstructor::new(oracle, n, config, Some(observer))?.run()
}

/// Asks every pair of `component` and keeps the pairs at distance 1.
pub fn brute_force_component<O>(oracle: &mut O, component: &[Vertex]) -> Result<Vec<Edge>, OracleError>
where
    O: DistanceQueries + ?Sized,
{
    let table = oracle.query_batch(component, component)?;
    let mut edges = Vec::new();
    for (i, &u) in component.iter().enumerate() {
        let row = table.row(u).unwrap();
        for (&v, &d) in component[i + 1..].iter().zip(&row[i + 1..]) {
            if d == 1 {
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

/// Edges of `G[A]`: the children's edges plus every pair `(s, a)` with
/// `s ∈ S ∩ A`, `a ∈ A` at distance 1 in the node batch. Distinct blocks of
/// `A ∖ S` are never adjacent, so nothing else is missing.
pub fn glue(state: &RecursionState, separator: &[Vertex], child_edges: Vec<Vec<Edge>>, node_batch: &DistanceTable) -> Vec<Edge> {
    let a = state.component();
    let mut edges: Vec<Edge> = child_edges.into_iter().flatten().collect();
    for &s in separator.iter().filter(|s| a.binary_search(s).is_ok()) {
        let row = node_batch.row(s).expect("separator vertices are batch rows");
        for (&v, &d) in node_batch.cols().iter().zip(row) {
            if d == 1 {
                edges.push((s.min(v), s.max(v)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

struct Reconstructor<'a> {
    oracle: Traced<'a>,
    observer: Option<&'a mut dyn NodeObserver>,
    config: &'a ReconstructionConfig,
    n: usize,
    threshold: usize,
    rng: ChaCha8Rng,
    next_node: u64,
    depth: u32,
    retries: BTreeMap<u64, u32>,
    fallbacks: u32,
    extra_batch_pairs: u64,
}

impl<'a> Reconstructor<'a> {
    fn new(
        oracle: &'a mut CountingOracle,
        n: usize,
        config: &'a ReconstructionConfig,
        observer: Option<&'a mut dyn NodeObserver>,
    ) -> Result<Self, ReconError> {
        config.validate()?;
        config.effective_sample_constant()?;
        config.effective_alpha()?;
        if oracle.n() != n {
            return Err(ReconError::UniverseMismatch {
                universe: n,
                oracle: oracle.n(),
            });
        }
        let log = observer.as_ref().map(|_| Vec::new());
        Ok(Reconstructor {
            oracle: Traced { oracle, log },
            observer,
            config,
            n,
            threshold: base_threshold(n, config.base_threshold),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            next_node: 0,
            depth: 0,
            retries: BTreeMap::new(),
            fallbacks: 0,
            extra_batch_pairs: 0,
        })
    }

    fn run(mut self) -> Result<ReconstructionReport, ReconError> {
        let root = RecursionState::root(self.n, self.config.layer_count());
        let edges = if self.n == 0 {
            Vec::new()
        } else if self.n <= self.threshold {
            self.leaf(root.component(), 0)?
        } else {
            self.solve(root, 0)?
        };
        Ok(ReconstructionReport {
            edges,
            stats: self.oracle.oracle.stats(),
            depth: self.depth,
            retries: self.retries,
            fallbacks: self.fallbacks,
            extra_batch_pairs: self.extra_batch_pairs,
            config_echo: ConfigEcho {
                k: self.config.k,
                delta: self.config.delta,
                sample_constant: self.config.effective_sample_constant()?,
                base_threshold: self.threshold,
                alpha: self.config.effective_alpha()?,
                max_retries_per_node: self.config.max_retries_per_node,
                seed: self.config.seed,
                boundary_batch: self.config.boundary_batch,
            },
        })
    }

    fn enter(&mut self, depth: u32) {
        self.depth = self.depth.max(depth);
        self.oracle.oracle.set_depth(depth);
    }

    fn leaf(&mut self, component: &[Vertex], depth: u32) -> Result<Vec<Edge>, ReconError> {
        self.enter(depth);
        Ok(brute_force_component(&mut self.oracle, component)?)
    }

    fn solve(&mut self, state: RecursionState, depth: u32) -> Result<Vec<Edge>, ReconError> {
        self.enter(depth);
        let node = self.next_node;
        self.next_node += 1;
        if let Some(log) = &mut self.oracle.log {
            log.clear();
        }

        let search = find_balanced_separator(&mut self.oracle, &state, self.config, &mut self.rng)?;
        let (pivot, separator, partition, retries) = match search {
            SeparatorSearch::Found {
                pivot,
                separator,
                partition,
                retries,
            } => (pivot, separator, partition, retries),
            SeparatorSearch::Exhausted { attempts } => {
                self.retries.insert(node, attempts);
                self.fallbacks += 1;
                return Ok(brute_force_component(&mut self.oracle, state.component())?);
            }
        };
        self.retries.insert(node, retries);

        let layer_count = self.config.layer_count();
        let mut rows: Vec<Vertex> = separator.iter().copied().chain(state.boundary(layer_count)).collect();
        rows.sort_unstable();
        rows.dedup();
        let node_batch = self.oracle.query_batch(&rows, state.component())?;

        let boundary_batch = if self.config.boundary_batch && partition.iter().any(|b| b.len() > self.threshold) {
            let before = self.oracle.oracle.stats().distinct_pairs;
            let exits = state::exit_set(&state, &separator);
            let table = self.oracle.query_batch(&exits, &state.boundary(layer_count))?;
            self.extra_batch_pairs += self.oracle.oracle.stats().distinct_pairs - before;
            Some(table)
        } else {
            None
        };

        let mut children = Vec::new();
        for block in partition.iter().filter(|b| b.len() > self.threshold) {
            let child = match &boundary_batch {
                Some(extra) => child_state_with_boundary_batch(&state, &separator, block, &node_batch, extra, layer_count),
                None => child_state(&state, &separator, block, &node_batch, layer_count),
            };
            children.push(child);
        }

        if let Some(observer) = self.observer.as_mut() {
            let mut queried = self.oracle.log.clone().unwrap_or_default();
            queried.sort_unstable();
            queried.dedup();
            observer.on_node(&NodeEvent {
                node,
                depth,
                state: &state,
                pivot,
                separator: &separator,
                partition: &partition,
                children: &children,
                retries,
                queried: &queried,
            });
        }

        let mut child_edges = Vec::with_capacity(partition.len());
        let mut pending = children.into_iter();
        for block in &partition {
            if block.len() > self.threshold {
                let child = pending.next().expect("one state per large block");
                child_edges.push(self.solve(child, depth + 1)?);
            } else {
                child_edges.push(self.leaf(block, depth + 1)?);
            }
        }
        self.oracle.oracle.set_depth(depth);
        Ok(glue(&state, &separator, child_edges, &node_batch))
    }
}
