use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::WitnessError;
use crate::graph::{Graph, Vertex};
use crate::properties::separator_balanced_check;

/// Tree decomposition: a tree over `bags.len()` nodes and one vertex bag
/// per node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionJson", into = "DecompositionJson")]
pub struct TreeDecomposition {
    tree_edges: Vec<(usize, usize)>,
    bags: Vec<Vec<Vertex>>,
}

/// On-disk form: `{"nodes": N, "tree_edges": [[s, t], ..], "bags": [[v, ..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub nodes: usize,
    pub tree_edges: Vec<[usize; 2]>,
    pub bags: Vec<Vec<Vertex>>,
}

impl TryFrom<DecompositionJson> for TreeDecomposition {
    type Error = WitnessError;

    fn try_from(json: DecompositionJson) -> Result<Self, Self::Error> {
        if json.nodes != json.bags.len() {
            return Err(WitnessError::Invalid(format!(
                "\"nodes\" is {} but {} bags were given",
                json.nodes,
                json.bags.len()
            )));
        }
        TreeDecomposition::new(json.tree_edges.iter().map(|e| (e[0], e[1])).collect(), json.bags)
    }
}

impl From<TreeDecomposition> for DecompositionJson {
    fn from(td: TreeDecomposition) -> Self {
        DecompositionJson {
            nodes: td.bags.len(),
            tree_edges: td.tree_edges.iter().map(|&(s, t)| [s, t]).collect(),
            bags: td.bags,
        }
    }
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; tree edges must reference existing
    /// nodes. Everything else is left to [`validate_decomposition`].
    pub fn new(tree_edges: Vec<(usize, usize)>, mut bags: Vec<Vec<Vertex>>) -> Result<Self, WitnessError> {
        for &(s, t) in &tree_edges {
            if s >= bags.len() || t >= bags.len() {
                return Err(WitnessError::Invalid(format!(
                    "tree edge ({s}, {t}) references a node outside 0..{}",
                    bags.len()
                )));
            }
        }
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
        }
        Ok(TreeDecomposition { tree_edges, bags })
    }

    /// One node holding every vertex of `g`.
    pub fn single_bag(n: usize) -> Self {
        TreeDecomposition {
            tree_edges: Vec::new(),
            bags: vec![(0..n).collect()],
        }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &[Vertex] {
        &self.bags[node]
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    fn node_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(s, t) in &self.tree_edges {
            adj[s].push(t);
            adj[t].push(s);
        }
        adj
    }

    pub(crate) fn relabel(&self, perm: &[Vertex]) -> TreeDecomposition {
        let bags = self
            .bags
            .iter()
            .map(|b| {
                let mut nb: Vec<Vertex> = b.iter().map(|&v| perm[v]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        TreeDecomposition {
            tree_edges: self.tree_edges.clone(),
            bags,
        }
    }
}

/// A single broken decomposition condition, with the offending element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    BagVertexOutOfRange { node: usize, vertex: Vertex },
    TreeCycle { edge: (usize, usize) },
    TreeDisconnected { components: usize },
    VertexUncovered { vertex: Vertex },
    EdgeUncovered { edge: (Vertex, Vertex) },
    SubtreeDisconnected { vertex: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BagVertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} contains out-of-range vertex {vertex}")
            }
            Violation::TreeCycle { edge } => write!(f, "tree edge {edge:?} closes a cycle"),
            Violation::TreeDisconnected { components } => {
                write!(f, "decomposition tree has {components} components")
            }
            Violation::VertexUncovered { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::EdgeUncovered { edge } => write!(f, "edge {edge:?} is in no bag"),
            Violation::SubtreeDisconnected { vertex } => {
                write!(f, "bags containing vertex {vertex} do not form a subtree")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), WitnessError> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(WitnessError::Invalid(format!(
                "{v} ({} violation(s) total)",
                self.violations.len()
            ))),
        }
    }
}

/// Checks tree shape, vertex coverage, edge coverage and the subtree
/// condition, reporting every violation found.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> ValidityReport {
    let mut violations = Vec::new();
    let nodes = td.node_count();

    for (node, bag) in td.bags.iter().enumerate() {
        for &v in bag.iter().filter(|&&v| v >= g.n()) {
            violations.push(Violation::BagVertexOutOfRange { node, vertex: v });
        }
    }
    if !violations.is_empty() {
        return ValidityReport { violations };
    }

    let mut sets = DisjointSets::new(nodes);
    for &(s, t) in &td.tree_edges {
        if !sets.union(s, t) {
            violations.push(Violation::TreeCycle { edge: (s, t) });
        }
    }
    let components = sets.count_sets();
    if components > 1 {
        violations.push(Violation::TreeDisconnected { components });
    }

    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (node, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders[v].push(node);
        }
    }
    let node_adj = td.node_adjacency();
    let mut mark = vec![usize::MAX; nodes];
    for (v, nodes_of_v) in holders.iter().enumerate() {
        if nodes_of_v.is_empty() {
            violations.push(Violation::VertexUncovered { vertex: v });
            continue;
        }
        for &t in nodes_of_v {
            mark[t] = v;
        }
        // BFS restricted to nodes whose bag holds v.
        let mut reached = 1;
        let mut queue = VecDeque::from([nodes_of_v[0]]);
        mark[nodes_of_v[0]] = usize::MAX - 1;
        while let Some(t) = queue.pop_front() {
            for &s in &node_adj[t] {
                if mark[s] == v {
                    mark[s] = usize::MAX - 1;
                    reached += 1;
                    queue.push_back(s);
                }
            }
        }
        if reached != nodes_of_v.len() {
            violations.push(Violation::SubtreeDisconnected { vertex: v });
        }
        for &t in nodes_of_v {
            mark[t] = usize::MAX;
        }
    }

    for (u, v) in g.edge_set() {
        let covered = holders[u]
            .iter()
            .any(|&t| td.bags[t].binary_search(&v).is_ok());
        if !covered {
            violations.push(Violation::EdgeUncovered { edge: (u, v) });
        }
    }

    ValidityReport { violations }
}

/// Largest whole-graph distance between two vertices sharing a bag.
pub fn decomposition_length(g: &Graph, td: &TreeDecomposition) -> Result<u32, WitnessError> {
    validate_decomposition(g, td).into_result()?;
    if !g.is_connected() {
        return Err(WitnessError::Disconnected);
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (node, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders[v].push(node);
        }
    }
    let mut length = 0;
    for (v, held) in holders.iter().enumerate() {
        let dist = g.distance_vector(v);
        for &t in held {
            for &w in &td.bags[t] {
                length = length.max(dist[w].expect("connected graph"));
            }
        }
    }
    Ok(length)
}

/// Finds a node whose bag is a 1/2-balanced separator of `set`. Such a
/// node always exists for a valid decomposition, so failure is an error.
pub fn bag_half_separator(g: &Graph, td: &TreeDecomposition, set: &[Vertex]) -> Result<usize, WitnessError> {
    validate_decomposition(g, td).into_result()?;
    for (node, bag) in td.bags.iter().enumerate() {
        if separator_balanced_check(g, set, bag, (1, 2))? {
            return Ok(node);
        }
    }
    Err(WitnessError::Invalid(
        "no bag is a 1/2-balanced separator; decomposition is inconsistent with the graph".into(),
    ))
}

/// Largest input size accepted by [`exact_treelength`].
pub const EXACT_TREELENGTH_MAX_N: usize = 9;

/// Exact treelength by exhaustive search, for tiny connected graphs only.
///
/// Minimises, over elimination orderings, the largest distance inside an
/// elimination bag. Runs as a DP over the set of already-eliminated
/// vertices, since a vertex's bag only depends on that set.
pub fn exact_treelength(g: &Graph) -> Result<u32, WitnessError> {
    let n = g.n();
    if n > EXACT_TREELENGTH_MAX_N {
        return Err(WitnessError::TooLarge {
            n,
            limit: EXACT_TREELENGTH_MAX_N,
        });
    }
    if !g.is_connected() {
        return Err(WitnessError::Disconnected);
    }
    let dist: Vec<Vec<u32>> = (0..n)
        .map(|v| g.distance_vector(v).into_iter().map(Option::unwrap).collect())
        .collect();

    let bag_length = |eliminated: u32, v: usize| -> u32 {
        // Vertices outside `eliminated ∪ {v}` reachable from v through eliminated ones.
        let mut bag = vec![v];
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if seen & (1 << w) != 0 {
                    continue;
                }
                seen |= 1 << w;
                if eliminated & (1 << w) != 0 {
                    stack.push(w);
                } else {
                    bag.push(w);
                }
            }
        }
        let mut worst = 0;
        for (i, &a) in bag.iter().enumerate() {
            for &b in &bag[i + 1..] {
                worst = worst.max(dist[a][b]);
            }
        }
        worst
    };

    let full = (1u32 << n) - 1;
    let mut best = vec![u32::MAX; 1 << n];
    best[0] = 0;
    for set in 1..=full {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let before = set & !(1 << v);
            let cost = best[before as usize].max(bag_length(before, v));
            if cost < best[set as usize] {
                best[set as usize] = cost;
            }
        }
    }
    Ok(if n == 0 { 0 } else { best[full as usize] })
}
