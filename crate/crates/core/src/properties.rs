//! Brute-force checkers for the structural facts the reconstruction relies
//! on, computed on the true graph with exact arithmetic, plus seeded sweeps
//! over generated instances.

use std::fmt::Write as _;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, PropertyError, ReconError};
use crate::graph::{canonical_partition, Graph, Vertex};
use crate::oracle::CountingOracle;
use crate::reconstruct::{compute_separator, partition_components, RecursionState, ReconstructionConfig};
use crate::witness::{
    bag_half_separator, decomposition_length, generate, validate_decomposition, Family, GeneratedInstance,
    InstanceParams, TreeDecomposition,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: String,
    pub counterexample: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub instances_checked: usize,
    pub failures: Vec<Failure>,
}

impl PropertyReport {
    pub fn new(property: &str) -> Self {
        PropertyReport {
            property: property.to_string(),
            instances_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, counterexample: String) {
        self.failures.push(Failure {
            instance: "input".into(),
            counterexample,
        });
    }

    /// Folds `other` in, tagging its failures with `instance`.
    pub fn absorb(&mut self, other: PropertyReport, instance: &str) {
        self.instances_checked += other.instances_checked;
        self.failures.extend(other.failures.into_iter().map(|f| Failure {
            instance: instance.to_string(),
            ..f
        }));
    }

    /// One-line summary, e.g. `lemma2: PASS (2000 instances)`.
    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!("{}: {verdict} ({} instances", self.property, self.instances_checked);
        if !self.passed() {
            let _ = write!(line, ", {} failures", self.failures.len());
        }
        line.push(')');
        line
    }
}

fn distance_matrix(g: &Graph) -> Result<Vec<Vec<u32>>, PropertyError> {
    if !g.is_connected() {
        return Err(PropertyError::Witness(crate::error::WitnessError::Disconnected));
    }
    Ok((0..g.n())
        .map(|s| g.distance_vector(s).into_iter().map(|d| d.unwrap()).collect())
        .collect())
}

/// Number of two-element subsets `{a, b}` of `set` with `v` on a shortest
/// `a`-`b` path.
fn betweenness_count(dist: &[Vec<u32>], set: &[Vertex], v: Vertex) -> u64 {
    let dv = &dist[v];
    let mut count = 0;
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if dv[a] + dv[b] == dist[a][b] {
                count += 1;
            }
        }
    }
    count
}

fn pair_count(size: usize) -> u64 {
    let s = size as u64;
    s * s.saturating_sub(1) / 2
}

fn sorted_set(set: &[Vertex]) -> Vec<Vertex> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Fraction of two-element subsets of `set` having `v` on some shortest
/// path between them; endpoints count.
pub fn exact_betweenness(g: &Graph, set: &[Vertex], v: Vertex) -> Result<Ratio<u64>, PropertyError> {
    let set = sorted_set(set);
    if set.len() < 2 {
        return Err(PropertyError::SetTooSmall(set.len()));
    }
    for &x in set.iter().chain([&v]) {
        if x >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: x, n: g.n() }.into());
        }
    }
    let dist = distance_matrix(g)?;
    Ok(Ratio::new(betweenness_count(&dist, &set, v), pair_count(set.len())))
}

/// `Δ^k + 1`, exactly.
fn ball_bound(delta: u32, k: u32) -> Result<u128, PropertyError> {
    (delta as u128)
        .checked_pow(k)
        .and_then(|p| p.checked_add(1))
        .ok_or(PropertyError::Recon(ReconError::ParameterOverflow {
            what: "delta^k",
            delta,
            k,
        }))
}

fn check_witness(g: &Graph, witness: &TreeDecomposition, k: u32) -> Result<(), PropertyError> {
    let report = validate_decomposition(g, witness);
    if let Some(v) = report.violations.first() {
        return Err(PropertyError::BadWitness(v.to_string()));
    }
    let length = decomposition_length(g, witness)?;
    if length > k {
        return Err(PropertyError::BadWitness(format!("decomposition length {length} exceeds k = {k}")));
    }
    Ok(())
}

fn check_connected_set(g: &Graph, set: &[Vertex]) -> Result<(), PropertyError> {
    if set.is_empty() || g.connected_components(set)?.len() != 1 {
        return Err(PropertyError::NotConnected);
    }
    Ok(())
}

/// With `A = V`: some vertex has betweenness at least `1 / (2(Δ^k + 1))`.
pub fn check_claim1(g: &Graph, witness: &TreeDecomposition, k: u32, delta: u32) -> Result<PropertyReport, PropertyError> {
    check_witness(g, witness, k)?;
    let bound = ball_bound(delta, k)?;
    let mut report = PropertyReport::new("claim1");
    report.instances_checked = 1;
    let n = g.n();
    if n < 2 {
        return Ok(report);
    }
    let dist = distance_matrix(g)?;
    let all: Vec<Vertex> = (0..n).collect();
    let (best, count) = all
        .iter()
        .map(|&v| (v, betweenness_count(&dist, &all, v)))
        .max_by_key(|&(v, c)| (c, std::cmp::Reverse(v)))
        .unwrap();
    let pairs = pair_count(n);
    // count / pairs >= 1 / (2 bound)
    if (count as u128) * 2 * bound < pairs as u128 {
        report.fail(format!(
            "max betweenness {count}/{pairs} at vertex {best} is below 1/{}",
            2 * bound
        ));
    }
    Ok(report)
}

/// No vertex farther than `⌊3k/2⌋` from `A` lies on a shortest path between
/// two vertices of `A`.
pub fn check_lemma2(g: &Graph, k: u32, set: &[Vertex]) -> Result<PropertyReport, PropertyError> {
    let set = sorted_set(set);
    check_connected_set(g, &set)?;
    let dist = distance_matrix(g)?;
    let to_set = g.multi_source_distances(&set, None)?;
    let radius = 3 * k / 2;
    let mut report = PropertyReport::new("lemma2");
    report.instances_checked = 1;
    for z in 0..g.n() {
        if to_set[z].unwrap() <= radius {
            continue;
        }
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i..] {
                if dist[a][z] + dist[z][b] <= dist[a][b] {
                    report.fail(format!("z = {z} at distance {} from A lies between {a} and {b}", to_set[z].unwrap()));
                }
            }
        }
    }
    Ok(report)
}

/// `A ∖ S` splits into components of at most `num/den · |A|` vertices.
/// Exact integer comparison.
pub fn separator_balanced_check(g: &Graph, set: &[Vertex], separator: &[Vertex], beta: (u64, u64)) -> Result<bool, GraphError> {
    let set = sorted_set(set);
    let separator = sorted_set(separator);
    let rest: Vec<Vertex> = set.iter().copied().filter(|v| separator.binary_search(v).is_err()).collect();
    let (num, den) = beta;
    let limit = num as u128 * set.len() as u128;
    Ok(g.connected_components(&rest)?
        .iter()
        .all(|c| c.len() as u128 * den as u128 <= limit))
}

/// Every high-betweenness `z` near `A` yields an `α`-balanced ball separator.
///
/// `p` is the largest betweenness over `N^{≤k}[A]`; every
/// `z ∈ N^{≤⌊3k/2⌋}[A]` with `p_z ≥ p/2` must leave components of size at
/// most `α|A|` once `N^{≤⌊3k/2⌋}[z]` is removed.
pub fn check_claim3(
    g: &Graph,
    witness: &TreeDecomposition,
    k: u32,
    delta: u32,
    set: &[Vertex],
) -> Result<PropertyReport, PropertyError> {
    check_witness(g, witness, k)?;
    let set = sorted_set(set);
    check_connected_set(g, &set)?;
    let bound = ball_bound(delta, k)?;
    let mut report = PropertyReport::new("claim3");
    report.instances_checked = 1;
    if set.len() < 2 {
        return Ok(report);
    }
    let dist = distance_matrix(g)?;
    let radius = 3 * k / 2;
    let near = g.neighborhood_closed(&set, k)?;
    let domain = g.neighborhood_closed(&set, radius)?;
    let counts: Vec<u64> = domain.iter().map(|&z| betweenness_count(&dist, &set, z)).collect();
    let p = domain
        .iter()
        .zip(&counts)
        .filter(|(z, _)| near.binary_search(z).is_ok())
        .map(|(_, &c)| c)
        .max()
        .unwrap();
    // size <= α|A|  <=>  size² · 4(Δ^k+1) <= (4(Δ^k+1) - 1) · |A|²
    let scale = 4 * bound;
    let a2 = (set.len() as u128).pow(2);
    for (&z, &c) in domain.iter().zip(&counts) {
        if 2 * c < p {
            continue;
        }
        let ball = g.neighborhood_closed(&[z], radius)?;
        let rest: Vec<Vertex> = set.iter().copied().filter(|v| ball.binary_search(v).is_err()).collect();
        for comp in g.connected_components(&rest)? {
            if (comp.len() as u128).pow(2) * scale > (scale - 1) * a2 {
                report.fail(format!(
                    "z = {z} (count {c}, max {p}) leaves a component of {} out of |A| = {}",
                    comp.len(),
                    set.len()
                ));
            }
        }
    }
    Ok(report)
}

/// Some bag of the witness is a 1/2-balanced separator of `A`.
pub fn check_lemma1(g: &Graph, witness: &TreeDecomposition, set: &[Vertex]) -> Result<PropertyReport, PropertyError> {
    if let Some(v) = validate_decomposition(g, witness).violations.first() {
        return Err(PropertyError::BadWitness(v.to_string()));
    }
    let mut report = PropertyReport::new("lemma1");
    report.instances_checked = 1;
    match bag_half_separator(g, witness, set) {
        Ok(node) => {
            if !separator_balanced_check(g, set, witness.bag(node), (1, 2))? {
                report.fail(format!("bag {node} returned but is not 1/2-balanced"));
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    Ok(report)
}

/// Boundary layers `R^1..R^{layers}` of `set`, by BFS on the true graph.
pub fn exact_state(g: &Graph, set: &[Vertex], layer_count: usize) -> Result<RecursionState, PropertyError> {
    let to_set = g.multi_source_distances(set, Some(layer_count as u32))?;
    let mut layers = vec![Vec::new(); layer_count];
    for (v, d) in to_set.iter().enumerate() {
        if let Some(d) = *d {
            if d >= 1 {
                layers[d as usize - 1].push(v);
            }
        }
    }
    Ok(RecursionState::new(sorted_set(set), layers))
}

/// Oracle-side partition of `A ∖ S` against true connected components, for
/// `S` the separator ball around `pivot`.
pub fn check_claim4(g: &Graph, k: u32, set: &[Vertex], pivot: Vertex) -> Result<PropertyReport, PropertyError> {
    check_connected_set(g, set)?;
    let config = ReconstructionConfig::new(k, 2, 0);
    let state = exact_state(g, set, config.layer_count())?;
    let mut oracle = CountingOracle::new(g.clone()).map_err(ReconError::from)?;
    let separator = compute_separator(&mut oracle, &state, pivot, &config)?;
    let from_oracle = partition_components(&mut oracle, &state, &separator)?;
    let rest: Vec<Vertex> = state
        .component()
        .iter()
        .copied()
        .filter(|v| separator.binary_search(v).is_err())
        .collect();
    let truth = canonical_partition(g.connected_components(&rest)?);
    let mut report = PropertyReport::new("claim4");
    report.instances_checked = 1;
    if from_oracle != truth {
        report.fail(format!(
            "pivot {pivot}, S = {separator:?}: oracle partition {from_oracle:?} != true components {truth:?}"
        ));
    }
    Ok(report)
}

/// Connected vertex set of `size` vertices (or the whole component if
/// smaller) grown from a random start by random frontier expansion.
pub fn random_connected_subset<R: Rng + ?Sized>(g: &Graph, size: usize, rng: &mut R) -> Vec<Vertex> {
    if g.n() == 0 || size == 0 {
        return Vec::new();
    }
    let start = rng.gen_range(0..g.n());
    let mut inside = vec![false; g.n()];
    inside[start] = true;
    let mut chosen = vec![start];
    let mut frontier: Vec<Vertex> = g.neighbors(start).to_vec();
    while chosen.len() < size && !frontier.is_empty() {
        let v = frontier.swap_remove(rng.gen_range(0..frontier.len()));
        if inside[v] {
            continue;
        }
        inside[v] = true;
        chosen.push(v);
        frontier.extend(g.neighbors(v).iter().filter(|&&w| !inside[w]));
    }
    chosen.sort_unstable();
    chosen
}

/// Seeded witnessed instances with `n ≤ 60`, cycling through trees,
/// chordal graphs and treelength 1..3 constructions at several degrees.
pub fn sweep_instances(count: usize, seed: u64) -> Result<Vec<GeneratedInstance>, PropertyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n = rng.gen_range(8..=60);
        let params = match i % 5 {
            0 => InstanceParams::new(Family::Tree, n, rng.gen_range(2..=4), 1, rng.gen()),
            1 => InstanceParams::new(Family::Chordal, n, rng.gen_range(3..=6), 1, rng.gen()),
            j => InstanceParams::new(Family::Treelength, n, rng.gen_range(3..=4), (j - 1) as u32, rng.gen()),
        };
        out.push(generate(&params)?);
    }
    Ok(out)
}

fn describe(inst: &GeneratedInstance) -> String {
    let p = &inst.params;
    format!("{} n={} delta={} k={} seed={}", p.family, p.n, p.delta, p.k, p.seed)
}

fn witness_of(inst: &GeneratedInstance) -> Result<&TreeDecomposition, PropertyError> {
    inst.witness
        .as_ref()
        .ok_or_else(|| PropertyError::BadWitness(format!("{} has no witness", describe(inst))))
}

type Check<'a> = dyn Fn(&GeneratedInstance, &mut ChaCha8Rng) -> Result<PropertyReport, PropertyError> + Sync + 'a;

fn sweep(name: &str, instances: &[GeneratedInstance], seed: u64, check: &Check<'_>) -> Result<PropertyReport, PropertyError> {
    let parts: Vec<(String, PropertyReport)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            check(inst, &mut rng).map(|r| (describe(inst), r))
        })
        .collect::<Result<_, _>>()?;
    let mut report = PropertyReport::new(name);
    for (label, part) in parts {
        report.absorb(part, &label);
    }
    Ok(report)
}

fn subset_reports(
    name: &str,
    inst: &GeneratedInstance,
    rng: &mut ChaCha8Rng,
    subsets: usize,
    check: impl Fn(&[Vertex]) -> Result<PropertyReport, PropertyError>,
) -> Result<PropertyReport, PropertyError> {
    let mut report = PropertyReport::new(name);
    for _ in 0..subsets {
        let size = rng.gen_range(1..=inst.graph.n());
        let set = random_connected_subset(&inst.graph, size, rng);
        let mut part = check(&set)?;
        for f in &mut part.failures {
            f.counterexample = format!("A = {set:?}: {}", f.counterexample);
        }
        report.absorb(part, "input");
    }
    Ok(report)
}

pub fn sweep_claim1(instances: &[GeneratedInstance], seed: u64) -> Result<PropertyReport, PropertyError> {
    sweep("claim1", instances, seed, &|inst, _| {
        check_claim1(&inst.graph, witness_of(inst)?, inst.params.k, inst.params.delta)
    })
}

pub fn sweep_lemma1(instances: &[GeneratedInstance], subsets: usize, seed: u64) -> Result<PropertyReport, PropertyError> {
    sweep("lemma1", instances, seed, &|inst, rng| {
        let w = witness_of(inst)?;
        subset_reports("lemma1", inst, rng, subsets, |set| check_lemma1(&inst.graph, w, set))
    })
}

pub fn sweep_lemma2(instances: &[GeneratedInstance], subsets: usize, seed: u64) -> Result<PropertyReport, PropertyError> {
    sweep("lemma2", instances, seed, &|inst, rng| {
        subset_reports("lemma2", inst, rng, subsets, |set| check_lemma2(&inst.graph, inst.params.k, set))
    })
}

pub fn sweep_claim3(instances: &[GeneratedInstance], subsets: usize, seed: u64) -> Result<PropertyReport, PropertyError> {
    sweep("claim3", instances, seed, &|inst, rng| {
        let w = witness_of(inst)?;
        let (k, delta) = (inst.params.k, inst.params.delta);
        subset_reports("claim3", inst, rng, subsets, |set| check_claim3(&inst.graph, w, k, delta, set))
    })
}

/// `per_instance` random (A, pivot) choices per instance; pivots are drawn
/// from `N^{≤⌊3k/2⌋}[A]`, the domain the sampler uses.
pub fn sweep_claim4(instances: &[GeneratedInstance], per_instance: usize, seed: u64) -> Result<PropertyReport, PropertyError> {
    sweep("claim4", instances, seed, &|inst, rng| {
        let g = &inst.graph;
        let k = inst.params.k;
        let mut report = PropertyReport::new("claim4");
        for _ in 0..per_instance {
            let size = rng.gen_range(2.min(g.n())..=g.n());
            let set = random_connected_subset(g, size, rng);
            let domain = g.neighborhood_closed(&set, 3 * k / 2)?;
            let pivot = *domain.choose(rng).unwrap();
            report.absorb(check_claim4(g, k, &set, pivot)?, "input");
        }
        Ok(report)
    })
}

/// Generator outputs validate, stay within `Δ`, are connected and have
/// decomposition length at most `k`.
pub fn sweep_witness(seeds: u64, seed: u64) -> Result<PropertyReport, PropertyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::new();
    for family in [Family::Tree, Family::Chordal, Family::Treelength] {
        for _ in 0..seeds {
            let n = rng.gen_range(1..=60);
            let delta = rng.gen_range(2..=5);
            let k = if family == Family::Treelength { rng.gen_range(1..=3) } else { 1 };
            instances.push(generate(&InstanceParams::new(family, n, delta, k, rng.gen()))?);
        }
    }
    sweep("witness", &instances, seed, &|inst, _| check_witness_integrity(inst))
}

/// The instance's witness validates, has length at most `k`, and the graph is
/// connected with maximum degree at most `Δ`.
pub fn check_witness_integrity(inst: &GeneratedInstance) -> Result<PropertyReport, PropertyError> {
    let mut report = PropertyReport::new("witness");
    report.instances_checked = 1;
    let (g, p) = (&inst.graph, &inst.params);
    let w = witness_of(inst)?;
    let validity = validate_decomposition(g, w);
    for v in &validity.violations {
        report.fail(v.to_string());
    }
    if !g.is_connected() {
        report.fail("graph is disconnected".into());
    } else if validity.is_ok() {
        let length = decomposition_length(g, w)?;
        if length > p.k {
            report.fail(format!("length {length} exceeds k = {}", p.k));
        }
    }
    if g.max_degree() > p.delta as usize {
        report.fail(format!("max degree {} exceeds delta = {}", g.max_degree(), p.delta));
    }
    Ok(report)
}

pub const SUITES: [&str; 7] = ["claim1", "lemma1", "lemma2", "claim3", "claim4", "witness", "all"];

/// Sweep sizes used by [`run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub instances: usize,
    pub subsets: usize,
    pub claim4_per_instance: usize,
    pub witness_seeds: u64,
    pub seed: u64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            instances: 100,
            subsets: 20,
            claim4_per_instance: 5,
            witness_seeds: 100,
            seed: 0,
        }
    }
}

/// Runs a named suite (`"all"` runs every one) on freshly generated
/// instances.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Vec<PropertyReport>, PropertyError> {
    let names: Vec<&str> = match name {
        "all" => SUITES[..SUITES.len() - 1].to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => return Err(PropertyError::UnknownSuite(other.to_string())),
    };
    let instances = sweep_instances(params.instances, params.seed)?;
    names
        .into_iter()
        .map(|suite| match suite {
            "claim1" => sweep_claim1(&instances, params.seed),
            "lemma1" => sweep_lemma1(&instances, params.subsets, params.seed),
            "lemma2" => sweep_lemma2(&instances, params.subsets, params.seed),
            "claim3" => sweep_claim3(&instances, params.subsets, params.seed),
            "claim4" => sweep_claim4(&instances, params.claim4_per_instance, params.seed),
            "witness" => sweep_witness(params.witness_seeds, params.seed),
            _ => unreachable!(),
        })
        .collect()
}

/// Checks that only need one graph and its witness, for user-supplied
/// inputs. Subsets are drawn as in the sweeps.
pub fn check_instance(inst: &GeneratedInstance, params: &SuiteParams) -> Result<Vec<PropertyReport>, PropertyError> {
    let witness = check_witness_integrity(inst)?;
    if !witness.passed() {
        // The remaining checks assume a valid witness.
        return Ok(vec![witness]);
    }
    let one = std::slice::from_ref(inst);
    Ok(vec![
        witness,
        sweep_claim1(one, params.seed)?,
        sweep_lemma1(one, params.subsets, params.seed)?,
        sweep_lemma2(one, params.subsets, params.seed)?,
        sweep_claim3(one, params.subsets, params.seed)?,
        sweep_claim4(one, params.claim4_per_instance, params.seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::gen_random_tree;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn path_witness(n: usize) -> TreeDecomposition {
        TreeDecomposition::new((1..n - 1).map(|i| (i - 1, i)).collect(), (1..n).map(|i| vec![i - 1, i]).collect()).unwrap()
    }

    /// Betweenness by listing every simple path and keeping the shortest.
    fn betweenness_by_paths(g: &Graph, set: &[Vertex], v: Vertex) -> Ratio<u64> {
        fn walk(g: &Graph, at: Vertex, to: Vertex, seen: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
            if at == to {
                out.push(seen.clone());
                return;
            }
            for &w in g.neighbors(at) {
                if !seen.contains(&w) {
                    seen.push(w);
                    walk(g, w, to, seen, out);
                    seen.pop();
                }
            }
        }
        let mut hits = 0;
        let mut pairs = 0;
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                let mut paths = Vec::new();
                walk(g, a, b, &mut vec![a], &mut paths);
                let best = paths.iter().map(Vec::len).min().unwrap();
                pairs += 1;
                if paths.iter().any(|p| p.len() == best && p.contains(&v)) {
                    hits += 1;
                }
            }
        }
        Ratio::new(hits, pairs)
    }

    #[test]
    fn path_betweenness() {
        let g = path(5);
        let all: Vec<Vertex> = (0..5).collect();
        assert_eq!(exact_betweenness(&g, &all, 2).unwrap(), Ratio::new(8, 10));
        assert_eq!(exact_betweenness(&g, &all, 2).unwrap(), betweenness_by_paths(&g, &all, 2));
        assert_eq!(exact_betweenness(&g, &[1, 2, 3, 4], 0).unwrap(), Ratio::from_integer(0));
        assert_eq!(exact_betweenness(&g, &[3], 0), Err(PropertyError::SetTooSmall(1)));
    }

    #[test]
    fn betweenness_matches_path_enumeration() {
        let cycle = crate::witness::gen_cycle(7).unwrap();
        let grid = crate::witness::gen_grid(3, 3).unwrap();
        for g in [cycle, grid] {
            let all: Vec<Vertex> = (0..g.n()).collect();
            for v in 0..g.n() {
                let exact = exact_betweenness(&g, &all, v).unwrap();
                assert_eq!(exact, betweenness_by_paths(&g, &all, v));
                // Endpoint pairs alone give (|A| - 1) / C(|A|, 2).
                assert!(exact >= Ratio::new(g.n() as u64 - 1, pair_count(g.n())));
            }
        }
    }

    #[test]
    fn claim1_examples() {
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(check_claim1(&edge, &TreeDecomposition::single_bag(2), 1, 2).unwrap().passed());
        assert!(check_claim1(&path(5), &path_witness(5), 1, 2).unwrap().passed());
        let err = check_claim1(&path(5), &TreeDecomposition::single_bag(5), 1, 2).unwrap_err();
        assert!(matches!(err, PropertyError::BadWitness(_)));
    }

    #[test]
    fn lemma2_examples() {
        let g = path(7);
        assert!(check_lemma2(&g, 1, &(0..7).collect::<Vec<_>>()).unwrap().passed());
        assert!(check_lemma2(&g, 1, &[0, 1, 2]).unwrap().passed());
        assert_eq!(check_lemma2(&g, 1, &[0, 2]), Err(PropertyError::NotConnected));
    }

    #[test]
    fn lemma2_detects_a_far_vertex_on_a_geodesic() {
        // C_8 has treelength 3; with k = 1 the lemma's radius is too small.
        let g = crate::witness::gen_cycle(8).unwrap();
        assert!(!check_lemma2(&g, 1, &[0, 1, 2, 3, 4]).unwrap().passed());
    }

    #[test]
    fn balanced_checks() {
        let g = path(5);
        let all: Vec<Vertex> = (0..5).collect();
        assert!(separator_balanced_check(&g, &all, &all, (1, 2)).unwrap());
        assert!(!separator_balanced_check(&g, &all, &[], (9, 10)).unwrap());
        assert!(separator_balanced_check(&g, &all, &[2], (1, 2)).unwrap());
        assert!(!separator_balanced_check(&g, &all, &[1], (1, 2)).unwrap());
    }

    #[test]
    fn lemma1_examples() {
        let g = path(5);
        let all: Vec<Vertex> = (0..5).collect();
        let node = bag_half_separator(&g, &path_witness(5), &all).unwrap();
        assert!([1, 2].contains(&node));
        assert!(check_lemma1(&g, &path_witness(5), &all).unwrap().passed());
        assert!(check_lemma1(&g, &TreeDecomposition::single_bag(5), &all).unwrap().passed());

        let star = Graph::from_edges(5, (1..5).map(|l| (0, l))).unwrap();
        let td = TreeDecomposition::new(vec![(0, 1), (0, 2), (0, 3)], (1..5).map(|l| vec![0, l]).collect()).unwrap();
        assert!(td.bag(bag_half_separator(&star, &td, &all).unwrap()).contains(&0));
    }

    #[test]
    fn claim3_on_a_path() {
        // Path 0..8, k = 1: only the middle vertices reach half the maximum.
        let g = path(9);
        let all: Vec<Vertex> = (0..9).collect();
        assert!(check_claim3(&g, &path_witness(9), 1, 2, &all).unwrap().passed());
        assert!(check_claim3(&g, &path_witness(9), 1, 2, &[3, 4]).unwrap().passed());
    }

    #[test]
    fn claim4_examples() {
        let g = path(5);
        assert!(check_claim4(&g, 1, &[0, 1, 2, 3, 4], 2).unwrap().passed());
        let tree = gen_random_tree(40, 3, 9).unwrap().graph;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let set = random_connected_subset(&tree, 25, &mut rng);
            let pivot = *set.choose(&mut rng).unwrap();
            assert!(check_claim4(&tree, 1, &set, pivot).unwrap().passed());
        }
    }

    #[test]
    fn random_subsets_are_connected() {
        let g = gen_random_tree(30, 3, 2).unwrap().graph;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for size in [1, 5, 30, 100] {
            let s = random_connected_subset(&g, size, &mut rng);
            assert_eq!(s.len(), size.min(30));
            assert_eq!(g.connected_components(&s).unwrap().len(), 1);
        }
    }

    #[test]
    fn small_sweeps_pass() {
        let params = SuiteParams {
            instances: 10,
            subsets: 3,
            claim4_per_instance: 2,
            witness_seeds: 5,
            seed: 11,
        };
        for report in run_suite("all", &params).unwrap() {
            assert!(report.passed(), "{}: {:?}", report.summary(), report.failures);
            assert!(report.instances_checked > 0);
        }
        assert_eq!(run_suite("nope", &params), Err(PropertyError::UnknownSuite("nope".into())));
    }

    #[test]
    fn report_summary() {
        let mut r = PropertyReport::new("lemma2");
        r.instances_checked = 3;
        assert_eq!(r.summary(), "lemma2: PASS (3 instances)");
        r.fail("x".into());
        assert_eq!(r.summary(), "lemma2: FAIL (3 instances, 1 failures)");
    }
}
