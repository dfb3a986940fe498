use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::Vertex;
use crate::oracle::DistanceTable;

/// Current component `A` and its boundary layers `R^1..R^{3k}`, where `R^i`
/// holds the vertices at distance exactly `i` from `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionState {
    component: Vec<Vertex>,
    layers: Vec<Vec<Vertex>>,
}

impl RecursionState {
    /// Whole vertex set with empty boundary layers.
    pub fn root(n: usize, layer_count: usize) -> Self {
        RecursionState {
            component: (0..n).collect(),
            layers: vec![Vec::new(); layer_count],
        }
    }

    pub fn new(mut component: Vec<Vertex>, mut layers: Vec<Vec<Vertex>>) -> Self {
        component.sort_unstable();
        for layer in &mut layers {
            layer.sort_unstable();
        }
        RecursionState { component, layers }
    }

    /// `A`, sorted.
    pub fn component(&self) -> &[Vertex] {
        &self.component
    }

    pub fn layers(&self) -> &[Vec<Vertex>] {
        &self.layers
    }

    /// `R^i` for `i >= 1`; empty past the last kept layer.
    pub fn layer(&self, i: usize) -> &[Vertex] {
        match i.checked_sub(1).and_then(|j| self.layers.get(j)) {
            Some(layer) => layer,
            None => &[],
        }
    }

    /// `r = |R^{≤3k}|`.
    pub fn boundary_size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// `A ∪ R^{≤radius}`, sorted.
    pub fn universe(&self, radius: usize) -> Vec<Vertex> {
        let mut all = self.component.clone();
        for layer in self.layers.iter().take(radius) {
            all.extend_from_slice(layer);
        }
        all.sort_unstable();
        all
    }

    /// `R^{≤radius}`, sorted.
    pub fn boundary(&self, radius: usize) -> Vec<Vertex> {
        let mut all: Vec<Vertex> = self.layers.iter().take(radius).flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

/// `S ∪ R^1`, sorted: every path leaving a component of `A ∖ S` crosses it.
pub(crate) fn exit_set(state: &RecursionState, separator: &[Vertex]) -> Vec<Vertex> {
    let mut x: Vec<Vertex> = separator.iter().chain(state.layer(1)).copied().collect();
    x.sort_unstable();
    x.dedup();
    x
}

fn group_layers(dist: &HashMap<Vertex, u32>, layer_count: usize) -> Vec<Vec<Vertex>> {
    let mut layers = vec![Vec::new(); layer_count];
    for (&v, &d) in dist {
        if d >= 1 && (d as usize) <= layer_count {
            layers[d as usize - 1].push(v);
        }
    }
    layers
}

/// Distances from `component` to the rows of the node batch (`S ∪ R^{≤3k}`
/// against `A`): the minimum over the component's columns.
fn direct_distances(parent: &RecursionState, component: &[Vertex], node_batch: &DistanceTable) -> HashMap<Vertex, u32> {
    assert_eq!(node_batch.cols(), parent.component(), "node batch columns must be A");
    let a = parent.component();
    let idx: Vec<usize> = component
        .iter()
        .map(|v| a.binary_search(v).expect("component lies inside A"))
        .collect();
    node_batch
        .rows()
        .iter()
        .map(|&y| {
            let row = node_batch.row(y).unwrap();
            (y, idx.iter().map(|&i| row[i]).min().expect("component is nonempty"))
        })
        .collect()
}

/// Boundary layers of `component` (a block of the partition of `A ∖ S`),
/// read off the node batch `Query(S ∪ R^{≤3k}, A)`.
///
/// Rows of the batch get `d(Ã, y) = min_a d(a, y)` directly; vertices of the
/// other blocks get `min_{x ∈ S ∪ R^1} d(Ã, x) + d(x, v)`, since `S ∪ R^1`
/// separates `Ã` from everything else.
pub fn child_state(
    parent: &RecursionState,
    separator: &[Vertex],
    component: &[Vertex],
    node_batch: &DistanceTable,
    layer_count: usize,
) -> RecursionState {
    let mut dist = direct_distances(parent, component, node_batch);
    let exits = exit_set(parent, separator);
    let in_component = |v: &Vertex| component.binary_search(v).is_ok();
    let exit_rows: Vec<(u32, &[u32])> = exits
        .iter()
        .map(|x| (dist[x], node_batch.row(*x).expect("exit vertices are batch rows")))
        .collect();
    for (i, v) in parent.component().iter().enumerate() {
        if in_component(v) || dist.contains_key(v) {
            continue;
        }
        let d = exit_rows.iter().map(|&(dx, row)| dx + row[i]).min();
        if let Some(d) = d {
            dist.insert(*v, d);
        }
    }
    RecursionState::new(component.to_vec(), group_layers(&dist, layer_count))
}

/// [`child_state`] variant that routes every vertex outside `A ∪ S ∪ R^1`
/// through the exit set, using an extra batch `Query(S ∪ R^1, R^{≤3k})` for
/// the `d(x, v)` terms with `v` in the boundary.
pub fn child_state_with_boundary_batch(
    parent: &RecursionState,
    separator: &[Vertex],
    component: &[Vertex],
    node_batch: &DistanceTable,
    boundary_batch: &DistanceTable,
    layer_count: usize,
) -> RecursionState {
    let direct = direct_distances(parent, component, node_batch);
    let exits = exit_set(parent, separator);
    let exit_dist: Vec<(Vertex, u32)> = exits.iter().map(|&x| (x, direct[&x])).collect();
    let mut dist: HashMap<Vertex, u32> = exit_dist.iter().copied().collect();

    let a = parent.component();
    for (i, v) in a.iter().enumerate() {
        if component.binary_search(v).is_ok() || dist.contains_key(v) {
            continue;
        }
        let d = exit_dist
            .iter()
            .map(|&(x, dx)| dx + node_batch.row(x).unwrap()[i])
            .min();
        if let Some(d) = d {
            dist.insert(*v, d);
        }
    }
    for &v in boundary_batch.cols() {
        if dist.contains_key(&v) {
            continue;
        }
        let d = exit_dist
            .iter()
            .map(|&(x, dx)| dx + boundary_batch.get(x, v).expect("boundary batch covers exits x R"))
            .min();
        if let Some(d) = d {
            dist.insert(v, d);
        }
    }
    RecursionState::new(component.to_vec(), group_layers(&dist, layer_count))
}
