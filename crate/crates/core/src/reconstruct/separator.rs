//! Finding a balanced separator of the current component using distance
//! queries only: sample a high-betweenness vertex, take its ball, and check
//! the balance by computing the components the ball leaves behind.

use rand::Rng;

use super::config::ReconstructionConfig;
use super::state::{exit_set, RecursionState};
use crate::dsu::DisjointSets;
use crate::error::ReconError;
use crate::graph::{canonical_partition, Vertex};
use crate::oracle::DistanceQueries;

/// Number of sampled pairs for a component of size `n_a` with `r` boundary
/// vertices: `ceil(C * log2(n_a + r))`, at least one.
pub fn sample_count(constant: f64, n_a: usize, r: usize) -> usize {
    let m = (constant * ((n_a + r) as f64).log2()).ceil();
    (m as usize).max(1)
}

/// Vertex of `A ∪ R^{≤⌊3k/2⌋}` lying on the most sampled shortest paths
/// between random pairs of distinct vertices of `A`. Ties go to the
/// smallest id.
pub fn estimate_high_betweenness_vertex<O, R>(
    oracle: &mut O,
    state: &RecursionState,
    config: &ReconstructionConfig,
    rng: &mut R,
) -> Result<Vertex, ReconError>
where
    O: DistanceQueries + ?Sized,
    R: Rng + ?Sized,
{
    let a = state.component();
    if a.len() < 2 {
        return Err(ReconError::ComponentTooSmall);
    }
    let domain = state.universe(config.separator_radius() as usize);
    let samples = sample_count(config.effective_sample_constant()?, a.len(), state.boundary_size());
    let mut hits = vec![0u32; domain.len()];
    for _ in 0..samples {
        let i = rng.gen_range(0..a.len());
        let mut j = rng.gen_range(0..a.len() - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (a[i], a[j]);
        let from_u = oracle.query_batch(&[u], &domain)?;
        let from_v = oracle.query_batch(&[v], &domain)?;
        let du = from_u.row(u).unwrap();
        let dv = from_v.row(v).unwrap();
        let duv = from_u.get(u, v).expect("v lies in the domain");
        for (slot, (x, y)) in hits.iter_mut().zip(du.iter().zip(dv)) {
            if x + y == duv {
                *slot += 1;
            }
        }
    }
    // Domain is sorted, so the first maximum has the smallest id.
    let best = hits
        .iter()
        .enumerate()
        .fold(0, |best, (i, &h)| if h > hits[best] { i } else { best });
    Ok(domain[best])
}

/// Ball of radius `⌊3k/2⌋` around `pivot`, searched inside `A ∪ R^{≤3k}`.
pub fn compute_separator<O>(
    oracle: &mut O,
    state: &RecursionState,
    pivot: Vertex,
    config: &ReconstructionConfig,
) -> Result<Vec<Vertex>, ReconError>
where
    O: DistanceQueries + ?Sized,
{
    let universe = state.universe(config.layer_count());
    let table = oracle.query_batch(&[pivot], &universe)?;
    let radius = config.separator_radius();
    let row = table.row(pivot).unwrap();
    Ok(universe
        .iter()
        .zip(row)
        .filter(|&(_, &d)| d <= radius)
        .map(|(&v, _)| v)
        .collect())
}

/// Components of `G[A ∖ S]` from distances alone.
///
/// With `X = S ∪ R^1` and `B` the vertices of `A ∖ X` adjacent to `X`, each
/// `b` collects `D_b = {v ∈ A ∖ X : d(v, b) <= d(v, X)}`: the vertices with a
/// shortest path to `b` avoiding `X`. Overlapping `D_b` are merged.
pub fn partition_components<O>(
    oracle: &mut O,
    state: &RecursionState,
    separator: &[Vertex],
) -> Result<Vec<Vec<Vertex>>, ReconError>
where
    O: DistanceQueries + ?Sized,
{
    let a = state.component();
    let exits = exit_set(state, separator);
    let rest: Vec<Vertex> = a.iter().copied().filter(|v| exits.binary_search(v).is_err()).collect();
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    if exits.is_empty() {
        // Nothing removed from a connected A.
        return Ok(vec![rest]);
    }

    let to_exits = oracle.query_batch(&rest, &exits)?;
    let exit_dist: Vec<u32> = rest
        .iter()
        .map(|&v| *to_exits.row(v).unwrap().iter().min().unwrap())
        .collect();
    let frontier: Vec<Vertex> = rest
        .iter()
        .zip(&exit_dist)
        .filter(|&(_, &d)| d == 1)
        .map(|(&v, _)| v)
        .collect();
    if frontier.is_empty() {
        return Ok(vec![rest]);
    }
    let to_frontier = oracle.query_batch(&rest, &frontier)?;

    let mut sets = DisjointSets::new(rest.len());
    let frontier_idx: Vec<usize> = frontier
        .iter()
        .map(|b| rest.binary_search(b).unwrap())
        .collect();
    for (i, &v) in rest.iter().enumerate() {
        let row = to_frontier.row(v).unwrap();
        for (&d, &bi) in row.iter().zip(&frontier_idx) {
            if d <= exit_dist[i] {
                sets.union(i, bi);
            }
        }
    }

    let mut blocks: Vec<Vec<Vertex>> = vec![Vec::new(); rest.len()];
    for (i, &v) in rest.iter().enumerate() {
        let root = sets.find(i);
        blocks[root].push(v);
    }
    Ok(canonical_partition(blocks))
}

/// Every block has at most `alpha * n_a` vertices.
pub fn is_alpha_balanced(partition: &[Vec<Vertex>], alpha: f64, n_a: usize) -> bool {
    partition.iter().all(|b| b.len() as f64 <= alpha * n_a as f64)
}

/// Result of the retry loop at one recursion node.
#[derive(Clone, Debug, PartialEq)]
pub enum SeparatorSearch {
    Found {
        pivot: Vertex,
        separator: Vec<Vertex>,
        partition: Vec<Vec<Vertex>>,
        /// Failed attempts before the accepted one.
        retries: u32,
    },
    /// Every attempt produced an unbalanced split.
    Exhausted { attempts: u32 },
}

/// Repeats {sample pivot, take its ball, partition, check balance} until
/// the split is `alpha`-balanced or the retry allowance runs out.
pub fn find_balanced_separator<O, R>(
    oracle: &mut O,
    state: &RecursionState,
    config: &ReconstructionConfig,
    rng: &mut R,
) -> Result<SeparatorSearch, ReconError>
where
    O: DistanceQueries + ?Sized,
    R: Rng + ?Sized,
{
    let alpha = config.effective_alpha()?;
    let n_a = state.component().len();
    for attempt in 0..config.max_retries_per_node {
        let pivot = estimate_high_betweenness_vertex(oracle, state, config, rng)?;
        let separator = compute_separator(oracle, state, pivot, config)?;
        let partition = partition_components(oracle, state, &separator)?;
        if is_alpha_balanced(&partition, alpha, n_a) {
            return Ok(SeparatorSearch::Found {
                pivot,
                separator,
                partition,
                retries: attempt,
            });
        }
    }
    Ok(SeparatorSearch::Exhausted {
        attempts: config.max_retries_per_node,
    })
}
