//! The only gateway to the hidden graph. Answers exact hop distances,
//! memoises per-source BFS results and accounts for every request.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::graph::{Graph, Vertex};

/// Above this many vertices the charged-pair set switches from a dense
/// triangular bitmap to a hash set.
const DENSE_PAIR_LIMIT: usize = 20_000;

#[derive(Clone, Debug)]
enum PairSet {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl PairSet {
    fn new(n: usize) -> Self {
        if n <= DENSE_PAIR_LIMIT {
            let bits = n * (n + 1) / 2;
            PairSet::Dense(vec![0; bits.div_ceil(64)])
        } else {
            PairSet::Sparse(HashSet::new())
        }
    }

    fn key(u: Vertex, v: Vertex) -> u64 {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        (hi as u64) * (hi as u64 + 1) / 2 + lo as u64
    }

    fn contains(&self, u: Vertex, v: Vertex) -> bool {
        let key = Self::key(u, v);
        match self {
            PairSet::Dense(bits) => bits[(key / 64) as usize] & (1 << (key % 64)) != 0,
            PairSet::Sparse(set) => set.contains(&key),
        }
    }

    fn insert(&mut self, u: Vertex, v: Vertex) {
        let key = Self::key(u, v);
        match self {
            PairSet::Dense(bits) => bits[(key / 64) as usize] |= 1 << (key % 64),
            PairSet::Sparse(set) => {
                set.insert(key);
            }
        }
    }

    fn clear(&mut self) {
        match self {
            PairSet::Dense(bits) => bits.iter_mut().for_each(|w| *w = 0),
            PairSet::Sparse(set) => set.clear(),
        }
    }
}

/// Query accounting, as embedded in run reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    pub distinct_pairs: u64,
    pub total_calls: u64,
    /// Distinct pairs by the recursion depth at which they were first charged.
    pub per_depth: BTreeMap<u32, u64>,
}

/// Opaque counter checkpoint; see [`CountingOracle::snapshot`].
#[derive(Clone, Debug)]
pub struct CounterSnapshot {
    stats: OracleStats,
    charged: PairSet,
}

/// Distances between every row and column vertex of one batch request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    rows: Vec<Vertex>,
    cols: Vec<Vertex>,
    row_pos: HashMap<Vertex, usize>,
    col_pos: HashMap<Vertex, usize>,
    data: Vec<u32>,
}

impl DistanceTable {
    pub fn rows(&self) -> &[Vertex] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vertex] {
        &self.cols
    }

    /// `d(u, v)` if the table holds the pair in either orientation.
    pub fn get(&self, u: Vertex, v: Vertex) -> Option<u32> {
        if let (Some(&r), Some(&c)) = (self.row_pos.get(&u), self.col_pos.get(&v)) {
            return Some(self.data[r * self.cols.len() + c]);
        }
        if let (Some(&r), Some(&c)) = (self.row_pos.get(&v), self.col_pos.get(&u)) {
            return Some(self.data[r * self.cols.len() + c]);
        }
        None
    }

    /// Distances from row vertex `u` to every column, in column order.
    pub fn row(&self, u: Vertex) -> Option<&[u32]> {
        let r = *self.row_pos.get(&u)?;
        let w = self.cols.len();
        Some(&self.data[r * w..(r + 1) * w])
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Anything that answers batches of distance queries. The reconstruction
/// routines only see the hidden graph through this interface.
pub trait DistanceQueries {
    fn query_batch(&mut self, rows: &[Vertex], cols: &[Vertex]) -> Result<DistanceTable, OracleError>;
}

impl DistanceQueries for CountingOracle {
    fn query_batch(&mut self, rows: &[Vertex], cols: &[Vertex]) -> Result<DistanceTable, OracleError> {
        CountingOracle::query_batch(self, rows, cols)
    }
}

/// Distance oracle over a private connected graph.
///
/// `{u, v}` and `{v, u}` are the same pair; `{u, u}` counts as a pair of its
/// own. `distinct_pairs` is charged once per pair, `total_calls` on every
/// request, batches included element-wise.
#[derive(Clone, Debug)]
pub struct CountingOracle {
    graph: Graph,
    bfs: Vec<Option<Box<[u32]>>>,
    charged: PairSet,
    stats: OracleStats,
    depth: u32,
    budget: u64,
}

impl CountingOracle {
    /// Oracle with the default budget of `n(n+1)/2` distinct pairs, i.e.
    /// every pair the graph has.
    pub fn new(graph: Graph) -> Result<Self, OracleError> {
        let n = graph.n() as u64;
        Self::with_budget(graph, n * (n + 1) / 2)
    }

    pub fn with_budget(graph: Graph, budget: u64) -> Result<Self, OracleError> {
        if !graph.is_connected() {
            return Err(OracleError::Disconnected);
        }
        let n = graph.n();
        Ok(CountingOracle {
            bfs: vec![None; n],
            charged: PairSet::new(n),
            graph,
            stats: OracleStats::default(),
            depth: 0,
            budget,
        })
    }

    /// Number of vertices of the hidden graph.
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Recursion depth that newly charged pairs are attributed to.
    pub fn set_depth(&mut self, depth: u32) {
        self.depth = depth;
    }

    fn check(&self, v: Vertex) -> Result<(), OracleError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(OracleError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    fn charge(&mut self, u: Vertex, v: Vertex) -> Result<(), OracleError> {
        self.stats.total_calls += 1;
        if !self.charged.contains(u, v) {
            if self.stats.distinct_pairs >= self.budget {
                return Err(OracleError::BudgetExhausted { budget: self.budget });
            }
            self.charged.insert(u, v);
            self.stats.distinct_pairs += 1;
            *self.stats.per_depth.entry(self.depth).or_insert(0) += 1;
        }
        Ok(())
    }

    fn source(&mut self, s: Vertex) -> &[u32] {
        if self.bfs[s].is_none() {
            let dist: Box<[u32]> = self
                .graph
                .distance_vector(s)
                .into_iter()
                .map(|d| d.expect("oracle graph is connected"))
                .collect();
            self.bfs[s] = Some(dist);
        }
        self.bfs[s].as_deref().unwrap()
    }

    fn distance(&mut self, u: Vertex, v: Vertex) -> u32 {
        if let Some(d) = &self.bfs[v] {
            return d[u];
        }
        self.source(u)[v]
    }

    /// Exact `d(u, v)`.
    pub fn query(&mut self, u: Vertex, v: Vertex) -> Result<u32, OracleError> {
        self.check(u)?;
        self.check(v)?;
        self.charge(u, v)?;
        Ok(self.distance(u, v))
    }

    /// All distances `d(a, b)` for `a` in `rows`, `b` in `cols`; accounted as
    /// `|rows| * |cols|` single queries.
    pub fn query_batch(&mut self, rows: &[Vertex], cols: &[Vertex]) -> Result<DistanceTable, OracleError> {
        for &v in rows.iter().chain(cols) {
            self.check(v)?;
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        // BFS from whichever side is smaller when neither end is cached.
        let rows_as_sources = rows.len() <= cols.len();
        for &r in rows {
            for &c in cols {
                self.charge(r, c)?;
                let d = match (&self.bfs[r], &self.bfs[c]) {
                    (Some(dr), _) => dr[c],
                    (None, Some(dc)) => dc[r],
                    (None, None) if rows_as_sources => self.source(r)[c],
                    (None, None) => self.source(c)[r],
                };
                data.push(d);
            }
        }
        let index = |vs: &[Vertex]| vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ok(DistanceTable {
            row_pos: index(rows),
            col_pos: index(cols),
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            data,
        })
    }

    pub fn stats(&self) -> OracleStats {
        self.stats.clone()
    }

    /// Zeroes the counters and forgets which pairs were charged. Cached
    /// answers are kept.
    pub fn reset_counters(&mut self) {
        self.stats = OracleStats::default();
        self.charged.clear();
    }

    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            stats: self.stats.clone(),
            charged: self.charged.clone(),
        }
    }

    pub fn restore(&mut self, snapshot: CounterSnapshot) {
        self.stats = snapshot.stats;
        self.charged = snapshot.charged;
    }

    /// Whether `{u, v}` has been charged since the last reset.
    pub fn was_asked(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.charged.contains(u, v)
    }
}
