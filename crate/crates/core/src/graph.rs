//! Simple undirected graphs over dense vertex ids, plus the distance,
//! neighbourhood and component primitives the rest of the crate builds on.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Vertex ids are dense: a graph on `n` vertices uses `0..n`.
pub type Vertex = usize;

/// Unordered edge in canonical `(min, max)` form.
pub type Edge = (Vertex, Vertex);

/// Simple undirected graph with sorted adjacency lists.
///
/// Connectedness is not an invariant of the type; callers that need it
/// check [`Graph::is_connected`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

/// On-disk form: `{"n": .., "edges": [[u, v], ..]}` with `u < v`, sorted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(json: GraphJson) -> Result<Self, Self::Error> {
        Graph::from_edges(json.n, json.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edge_set().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and bad ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u.min(v), u.max(v))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Canonical edge list: `(min, max)` pairs in lexicographic order.
    pub fn edge_set(&self) -> Vec<Edge> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            edges.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        edges
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.distance_vector(0).iter().all(Option::is_some)
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    ///
    /// Panics if `source` is out of range; see [`Graph::bfs_distances`] for
    /// the checked form.
    pub fn distance_vector(&self, source: Vertex) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Hop distances from `source` as a map; unreachable vertices are absent.
    pub fn bfs_distances(&self, source: Vertex) -> Result<BTreeMap<Vertex, u32>, GraphError> {
        self.check_vertex(source)?;
        Ok(self
            .distance_vector(source)
            .into_iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (v, d)))
            .collect())
    }

    /// `N^{<=radius}[set]`: every vertex within `radius` hops of some member
    /// of `set`, returned sorted.
    pub fn neighborhood_closed(&self, set: &[Vertex], radius: u32) -> Result<Vec<Vertex>, GraphError> {
        let dist = self.multi_source_distances(set, Some(radius))?;
        Ok(dist
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|_| v))
            .collect())
    }

    /// Distance from each vertex to the nearest member of `set`, explored up
    /// to `limit` hops when given.
    pub fn multi_source_distances(
        &self,
        set: &[Vertex],
        limit: Option<u32>,
    ) -> Result<Vec<Option<u32>>, GraphError> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for &s in set {
            self.check_vertex(s)?;
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if limit.is_some_and(|l| du >= l) {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Components of the induced subgraph `g[subset]`, each block sorted and
    /// blocks ordered by their smallest vertex.
    pub fn connected_components(&self, subset: &[Vertex]) -> Result<Vec<Vec<Vertex>>, GraphError> {
        let mut inside = vec![false; self.n()];
        for &v in subset {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut order: Vec<Vertex> = subset.to_vec();
        order.sort_unstable();
        order.dedup();
        let mut blocks = Vec::new();
        for &start in &order {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut block = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        block.push(w);
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        Ok(blocks)
    }

    /// Induced subgraph on `subset` together with the table mapping new ids
    /// back to the original ones (`table[new] = old`, ascending).
    pub fn induced_subgraph(&self, subset: &[Vertex]) -> Result<(Graph, Vec<Vertex>), GraphError> {
        let mut table: Vec<Vertex> = subset.to_vec();
        table.sort_unstable();
        table.dedup();
        let mut index = vec![usize::MAX; self.n()];
        for (new, &old) in table.iter().enumerate() {
            self.check_vertex(old)?;
            index[old] = new;
        }
        let mut sub = Graph::new(table.len());
        for (new, &old) in table.iter().enumerate() {
            for &w in &self.adj[old] {
                let nw = index[w];
                if nw != usize::MAX && nw > new {
                    sub.add_edge(new, nw)?;
                }
            }
        }
        Ok((sub, table))
    }
}

/// Sorts blocks internally and orders them by smallest member.
pub fn canonical_partition(mut blocks: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.retain(|b| !b.is_empty());
    blocks.sort();
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn bfs_on_three_path() {
        let d = path(3).bfs_distances(0).unwrap();
        assert_eq!(d, BTreeMap::from([(0, 0), (1, 1), (2, 2)]));
    }

    #[test]
    fn bfs_on_six_cycle_matches_simple_path_enumeration() {
        // Oracle: shortest over all simple paths, found by DFS.
        fn shortest_simple(g: &Graph, cur: Vertex, target: Vertex, seen: &mut Vec<bool>, len: u32, best: &mut u32) {
            if cur == target {
                *best = (*best).min(len);
                return;
            }
            for &w in g.neighbors(cur) {
                if !seen[w] {
                    seen[w] = true;
                    shortest_simple(g, w, target, seen, len + 1, best);
                    seen[w] = false;
                }
            }
        }
        let g = cycle(6);
        let d = g.bfs_distances(0).unwrap();
        for t in 0..6 {
            let mut best = u32::MAX;
            let mut seen = vec![false; 6];
            seen[0] = true;
            shortest_simple(&g, 0, t, &mut seen, 0, &mut best);
            assert_eq!(d[&t], best);
        }
        assert_eq!(d, BTreeMap::from([(0, 0), (1, 1), (2, 2), (3, 3), (4, 2), (5, 1)]));
    }

    #[test]
    fn bfs_rejects_out_of_range_and_omits_unreachable() {
        let g = Graph::new(2);
        assert!(matches!(g.bfs_distances(5), Err(GraphError::VertexOutOfRange { .. })));
        assert_eq!(g.bfs_distances(1).unwrap(), BTreeMap::from([(1, 0)]));
    }

    #[test]
    fn neighborhoods() {
        let c = cycle(6);
        assert_eq!(c.neighborhood_closed(&[0], 0).unwrap(), vec![0]);
        assert_eq!(c.neighborhood_closed(&[0], 1).unwrap(), vec![0, 1, 5]);
        assert_eq!(path(5).neighborhood_closed(&[0, 4], 1).unwrap(), vec![0, 1, 3, 4]);
    }

    #[test]
    fn components_of_punctured_path() {
        let g = path(5);
        assert_eq!(g.connected_components(&[0, 1, 3, 4]).unwrap(), vec![vec![0, 1], vec![3, 4]]);
        assert!(g.connected_components(&[]).unwrap().is_empty());
    }

    #[test]
    fn induced_subgraphs() {
        let tri = cycle(3);
        let (sub, table) = tri.induced_subgraph(&[2, 0]).unwrap();
        assert_eq!(table, vec![0, 2]);
        assert_eq!(sub.edge_set(), vec![(0, 1)]);
        let (copy, _) = tri.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(copy, tri);
    }

    #[test]
    fn degree_connectivity_and_edges() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.max_degree(), 3);
        assert!(!Graph::new(2).is_connected());
        assert_eq!(cycle(7).edge_set().len(), 7);
        assert_eq!(cycle(4).edge_set(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        let json = r#"{"n": 3, "edges": [[0, 1], [0, 1]]}"#;
        assert!(serde_json::from_str::<Graph>(json).is_err());
        let json = r#"{"n": 3, "edges": [[2, 2]]}"#;
        assert!(serde_json::from_str::<Graph>(json).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let g = Graph::from_edges(4, [(3, 2), (1, 0), (2, 0)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":4,"edges":[[0,1],[0,2],[2,3]]}"#);
        assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);
    }
}
