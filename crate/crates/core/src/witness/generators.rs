//! Random instance families. Every generator that can certify a treelength
//! bound returns the certificate as a [`TreeDecomposition`] witness.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::decomposition::TreeDecomposition;
use crate::error::WitnessError;
use crate::graph::{Graph, Vertex};

/// Attempts at drawing a usable random bag before falling back to a scan.
const PICK_ATTEMPTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tree,
    Chordal,
    Treelength,
    Cycle,
    Grid,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Tree,
        Family::Chordal,
        Family::Treelength,
        Family::Cycle,
        Family::Grid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tree => "tree",
            Family::Chordal => "chordal",
            Family::Treelength => "treelength",
            Family::Cycle => "cycle",
            Family::Grid => "grid",
        }
    }

    /// Families whose generator issues a treelength witness.
    pub fn has_witness(self) -> bool {
        matches!(self, Family::Tree | Family::Chordal | Family::Treelength)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?} (expected tree, chordal, treelength, cycle or grid)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub family: Family,
    pub n: usize,
    pub delta: u32,
    pub k: u32,
    pub seed: u64,
    /// Grid only: number of columns (`n` is the number of rows).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
}

impl InstanceParams {
    pub fn new(family: Family, n: usize, delta: u32, k: u32, seed: u64) -> Self {
        InstanceParams {
            family,
            n,
            delta,
            k,
            seed,
            cols: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedInstance {
    pub graph: Graph,
    pub witness: Option<TreeDecomposition>,
    pub params: InstanceParams,
}

/// Dispatches on `params.family`. Cycles and grids carry no witness.
pub fn generate(params: &InstanceParams) -> Result<GeneratedInstance, WitnessError> {
    match params.family {
        Family::Tree => gen_random_tree(params.n, params.delta, params.seed),
        Family::Chordal => gen_chordal(params.n, params.delta, params.seed),
        Family::Treelength => gen_bounded_treelength(params.n, params.delta, params.k, params.seed),
        Family::Cycle => Ok(GeneratedInstance {
            graph: gen_cycle(params.n)?,
            witness: None,
            params: params.clone(),
        }),
        Family::Grid => {
            let cols = params.cols.unwrap_or(params.n);
            Ok(GeneratedInstance {
                graph: gen_grid(params.n, cols)?,
                witness: None,
                params: InstanceParams {
                    cols: Some(cols),
                    ..params.clone()
                },
            })
        }
    }
}

fn check_common(n: usize, delta: u32) -> Result<(), WitnessError> {
    if n == 0 {
        return Err(WitnessError::Infeasible("n must be at least 1".into()));
    }
    if delta < 2 {
        return Err(WitnessError::Infeasible(format!(
            "delta must be at least 2 (got {delta}); connected graphs with delta < 2 have at most 2 vertices"
        )));
    }
    Ok(())
}

/// Applies a random relabelling so vertex ids carry no construction order.
fn shuffle_labels(
    graph: &Graph,
    witness: &TreeDecomposition,
    rng: &mut ChaCha8Rng,
) -> Result<(Graph, TreeDecomposition), WitnessError> {
    let mut perm: Vec<Vertex> = (0..graph.n()).collect();
    perm.shuffle(rng);
    let relabelled = Graph::from_edges(graph.n(), graph.edge_set().into_iter().map(|(u, v)| (perm[u], perm[v])))?;
    Ok((relabelled, witness.relabel(&perm)))
}

/// Random tree grown by attaching each new vertex to a uniformly chosen
/// earlier vertex that still has degree below `delta`. Witness: one bag per
/// edge.
pub fn gen_random_tree(n: usize, delta: u32, seed: u64) -> Result<GeneratedInstance, WitnessError> {
    check_common(n, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = delta as usize;
    let mut g = Graph::new(n);
    let mut open: Vec<Vertex> = vec![0];
    // edge_bag[v] = decomposition node of the edge (parent(v), v)
    let mut edge_bag = vec![usize::MAX; n];
    let mut bags = Vec::new();
    let mut tree_edges = Vec::new();
    for v in 1..n {
        let slot = rng.gen_range(0..open.len());
        let parent = open[slot];
        g.add_edge(parent, v)?;
        if g.degree(parent) >= delta {
            open.swap_remove(slot);
        }
        open.push(v);

        let node = bags.len();
        bags.push(vec![parent, v]);
        edge_bag[v] = node;
        if node > 0 {
            let anchor = if parent == 0 { 0 } else { edge_bag[parent] };
            tree_edges.push((anchor, node));
        }
    }
    if n == 1 {
        bags.push(vec![0]);
    }
    let td = TreeDecomposition::new(tree_edges, bags)?;
    let (graph, witness) = shuffle_labels(&g, &td, &mut rng)?;
    Ok(GeneratedInstance {
        graph,
        witness: Some(witness),
        params: InstanceParams {
            family: Family::Tree,
            n,
            delta: delta as u32,
            k: 1,
            seed,
            cols: None,
        },
    })
}

/// Connected chordal graph built from a random clique tree, with clique
/// sizes capped at `min(delta + 1, 4)`.
pub fn gen_chordal(n: usize, delta: u32, seed: u64) -> Result<GeneratedInstance, WitnessError> {
    gen_chordal_capped(n, delta, (delta as usize + 1).min(4), seed)
}

/// [`gen_chordal`] with an explicit clique-size cap (at least 2).
pub fn gen_chordal_capped(n: usize, delta: u32, clique_cap: usize, seed: u64) -> Result<GeneratedInstance, WitnessError> {
    check_common(n, delta)?;
    if clique_cap < 2 {
        return Err(WitnessError::Infeasible("clique cap must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = delta as usize;
    let mut g = Graph::new(n);
    let mut bags: Vec<Vec<Vertex>> = vec![vec![0]];
    let mut tree_edges = Vec::new();
    let mut unsaturated = 1usize;

    for v in 1..n {
        let host = pick_bag(&bags, &mut rng, |u| g.degree(u) < delta)
            .expect("some vertex always keeps spare degree");
        let mut candidates: Vec<Vertex> = bags[host].iter().copied().filter(|&u| g.degree(u) < delta).collect();
        candidates.shuffle(&mut rng);
        let mut size = rng.gen_range(1..=(clique_cap - 1).min(candidates.len()));
        if size >= delta && v + 1 < n {
            // v would be saturated; keep at least one vertex with spare degree.
            let newly_full = candidates[..size].iter().filter(|&&u| g.degree(u) + 1 >= delta).count();
            if unsaturated - newly_full == 0 {
                size -= 1;
            }
        }
        let clique = &candidates[..size];
        for &u in clique {
            g.add_edge(u, v)?;
            if g.degree(u) >= delta {
                unsaturated -= 1;
            }
        }
        if g.degree(v) < delta {
            unsaturated += 1;
        }
        let mut bag = clique.to_vec();
        bag.push(v);
        tree_edges.push((host, bags.len()));
        bags.push(bag);
    }

    let td = TreeDecomposition::new(tree_edges, bags)?;
    let (graph, witness) = shuffle_labels(&g, &td, &mut rng)?;
    Ok(GeneratedInstance {
        graph,
        witness: Some(witness),
        params: InstanceParams {
            family: Family::Chordal,
            n,
            delta: delta as u32,
            k: 1,
            seed,
            cols: None,
        },
    })
}

/// Draws a random bag with at least one member satisfying `usable`, falling
/// back to the first such bag in order.
fn pick_bag<F>(bags: &[Vec<Vertex>], rng: &mut ChaCha8Rng, usable: F) -> Option<usize>
where
    F: Fn(Vertex) -> bool,
{
    for _ in 0..PICK_ATTEMPTS {
        let b = rng.gen_range(0..bags.len());
        if bags[b].iter().any(|&u| usable(u)) {
            return Some(b);
        }
    }
    bags.iter().position(|bag| bag.iter().any(|&u| usable(u)))
}

/// Graph with a witness of length at most `k`: a random tree of bags where
/// each new bag overlaps its parent in one or two adjacent vertices and
/// induces a cycle of length at most `2k + 1` (plus random chords), so every
/// bag has induced diameter at most `k`.
pub fn gen_bounded_treelength(n: usize, delta: u32, k: u32, seed: u64) -> Result<GeneratedInstance, WitnessError> {
    check_common(n, delta)?;
    if k == 0 {
        return Err(WitnessError::Infeasible("k must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dmax = delta as usize;
    let max_bag = 2 * k as usize + 1;
    let mut g = Graph::new(n);
    let mut bags: Vec<Vec<Vertex>> = vec![vec![0]];
    let mut tree_edges = Vec::new();
    let mut next = 1;

    while next < n {
        let host = pick_bag(&bags, &mut rng, |u| g.degree(u) < dmax)
            .expect("some vertex always keeps spare degree");
        let spare = |g: &Graph, u: Vertex| dmax - g.degree(u);
        let mut anchors: Vec<Vertex> = bags[host].iter().copied().filter(|&u| spare(&g, u) > 0).collect();
        anchors.shuffle(&mut rng);
        let a = anchors[0];

        // Optional second overlap vertex: a neighbour of `a` inside the host bag.
        let mut overlap = vec![a];
        if max_bag >= 3 && rng.gen_bool(0.5) {
            if let Some(&b) = anchors[1..].iter().find(|&&b| g.has_edge(a, b)) {
                overlap.push(b);
            }
        }

        let remaining = n - next;
        let mut fresh = rng.gen_range(1..=(max_bag - overlap.len()).min(remaining));
        if overlap.len() == 1 && fresh >= 2 && spare(&g, a) < 2 {
            fresh = 1;
        }
        let mut chord_rolls: Vec<f64> = (0..max_bag * max_bag).map(|_| rng.gen::<f64>()).collect();

        // Shrink until the bag leaves spare degree somewhere for later vertices.
        let edges = loop {
            let cycle_len = overlap.len() + fresh;
            let ring: Vec<Vertex> = overlap.iter().copied().chain(next..next + fresh).collect();
            let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
            for i in 0..cycle_len {
                let (x, y) = (ring[i], ring[(i + 1) % cycle_len]);
                if cycle_len == 2 && i == 1 {
                    break;
                }
                if !(x < next && y < next) {
                    edges.push((x, y));
                }
            }
            let mut degree_gain = vec![0usize; next + fresh];
            for &(x, y) in &edges {
                degree_gain[x] += 1;
                degree_gain[y] += 1;
            }
            // Chords between non-consecutive ring positions, at least one fresh end.
            for i in 0..cycle_len {
                for j in i + 2..cycle_len {
                    if i == 0 && j == cycle_len - 1 {
                        continue;
                    }
                    let (x, y) = (ring[i], ring[j]);
                    if x < next && y < next {
                        continue;
                    }
                    if chord_rolls[i * max_bag + j] < 0.25
                        && g.degree(x) + degree_gain[x] < dmax
                        && g.degree(y) + degree_gain[y] < dmax
                    {
                        edges.push((x, y));
                        degree_gain[x] += 1;
                        degree_gain[y] += 1;
                    }
                }
            }
            let fits = (0..next + fresh).all(|u| {
                let base = if u < next { g.degree(u) } else { 0 };
                base + degree_gain[u] <= dmax
            });
            let leaves_room = next + fresh == n
                || (0..next + fresh).any(|u| {
                    let base = if u < next { g.degree(u) } else { 0 };
                    base + degree_gain[u] < dmax
                });
            if fits && leaves_room {
                break edges;
            }
            if chord_rolls.iter().any(|&r| r < 0.25) {
                chord_rolls.iter_mut().for_each(|r| *r = 1.0);
            } else if fresh > 1 {
                fresh -= 1;
            } else {
                overlap.truncate(1);
            }
        };

        for &(x, y) in &edges {
            g.add_edge(x, y)?;
        }
        let mut bag = overlap.clone();
        bag.extend(next..next + fresh);
        debug_assert!(induced_diameter(&g, &bag) <= k);
        tree_edges.push((host, bags.len()));
        bags.push(bag);
        next += fresh;
    }

    let td = TreeDecomposition::new(tree_edges, bags)?;
    let (graph, witness) = shuffle_labels(&g, &td, &mut rng)?;
    Ok(GeneratedInstance {
        graph,
        witness: Some(witness),
        params: InstanceParams {
            family: Family::Treelength,
            n,
            delta,
            k,
            seed,
            cols: None,
        },
    })
}

/// Largest hop distance inside `g[bag]` (`u32::MAX` when disconnected).
fn induced_diameter(g: &Graph, bag: &[Vertex]) -> u32 {
    let mut worst = 0;
    for &s in bag {
        let mut dist: Vec<Option<u32>> = vec![None; bag.len()];
        let pos = |v: Vertex| bag.iter().position(|&b| b == v);
        dist[pos(s).unwrap()] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[pos(u).unwrap()].unwrap();
            for &w in g.neighbors(u) {
                if let Some(p) = pos(w) {
                    if dist[p].is_none() {
                        dist[p] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        for d in dist {
            worst = worst.max(d.unwrap_or(u32::MAX));
        }
    }
    worst
}

pub fn gen_cycle(n: usize) -> Result<Graph, WitnessError> {
    if n < 3 {
        return Err(WitnessError::Infeasible(format!("a cycle needs at least 3 vertices (got {n})")));
    }
    Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?)
}

/// `rows x cols` grid; vertex `(r, c)` has id `r * cols + c`.
pub fn gen_grid(rows: usize, cols: usize) -> Result<Graph, WitnessError> {
    if rows == 0 || cols == 0 {
        return Err(WitnessError::Infeasible("grid dimensions must be positive".into()));
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Ok(Graph::from_edges(rows * cols, edges)?)
}
