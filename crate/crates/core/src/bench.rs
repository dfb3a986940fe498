//! Benchmark harness: independent reconstruction trials fanned out over a
//! thread pool, reported as CSV rows plus per-`n` medians.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::oracle::CountingOracle;
use crate::reconstruct::{reconstruct, ConfigEcho, ReconstructionConfig};
use crate::witness::{generate, Family, InstanceParams};

/// Column order of [`write_csv`].
pub const CSV_HEADER: [&str; 9] = [
    "row",
    "n",
    "seed",
    "distinct_pairs",
    "total_calls",
    "pairs_per_nlog2n",
    "depth",
    "retries",
    "wall_ms",
];

/// Outcome of one generated-instance reconstruction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub params: InstanceParams,
    /// Vertex count of the generated graph (differs from `params.n` for grids).
    pub vertices: usize,
    pub config_echo: ConfigEcho,
    pub distinct_pairs: u64,
    pub total_calls: u64,
    pub extra_batch_pairs: u64,
    pub depth: u32,
    pub retries: u64,
    pub internal_nodes: usize,
    pub fallbacks: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    /// Recovered edge set equals the generated one.
    pub correct: bool,
}

impl RunRecord {
    /// `distinct_pairs / (n log2² n)`; zero for `n < 2`.
    pub fn pairs_per_nlog2n(&self) -> f64 {
        pairs_per_nlog2n(self.distinct_pairs, self.vertices)
    }
}

pub fn pairs_per_nlog2n(pairs: u64, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let l = (n as f64).log2();
    pairs as f64 / (n as f64 * l * l)
}

/// Generates the instance, reconstructs it through a fresh oracle and
/// compares edge sets. `config.seed` drives the reconstruction only.
pub fn run_trial(params: &InstanceParams, config: &ReconstructionConfig, timing: bool) -> Result<RunRecord, BenchError> {
    let instance = generate(params)?;
    let n = instance.graph.n();
    let mut oracle = CountingOracle::new(instance.graph.clone()).map_err(crate::error::ReconError::from)?;
    let start = Instant::now();
    let report = reconstruct(&mut oracle, n, config)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunRecord {
        params: instance.params,
        vertices: n,
        correct: report.edges == instance.graph.edge_set(),
        distinct_pairs: report.stats.distinct_pairs,
        total_calls: report.stats.total_calls,
        extra_batch_pairs: report.extra_batch_pairs,
        depth: report.depth,
        retries: report.total_retries(),
        internal_nodes: report.internal_nodes(),
        fallbacks: report.fallbacks,
        wall_ms: timing.then_some(elapsed),
        config_echo: report.config_echo,
    })
}

/// A grid of trials: every `n` in `ns`, seeds `seed..seed + trials`.
#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub family: Family,
    pub ns: Vec<usize>,
    pub delta: u32,
    pub k: u32,
    pub trials: u64,
    pub seed: u64,
    /// Template; its seed is replaced by each trial's seed.
    pub config: ReconstructionConfig,
    pub timing: bool,
}

/// Runs every trial of `spec` in parallel. Records come back sorted by
/// `(vertices, seed)` whatever the completion order.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<RunRecord>, BenchError> {
    let jobs: Vec<(usize, u64)> = spec
        .ns
        .iter()
        .flat_map(|&n| (0..spec.trials).map(move |t| (n, spec.seed + t)))
        .collect();
    let mut records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(n, seed)| {
            let params = InstanceParams::new(spec.family, n, spec.delta, spec.k, seed);
            let config = ReconstructionConfig {
                seed,
                ..spec.config.clone()
            };
            run_trial(&params, &config, spec.timing)
        })
        .collect::<Result<_, _>>()?;
    records.sort_by_key(|r| (r.vertices, r.params.seed));
    Ok(records)
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Median of each numeric column, per `n`, in ascending `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MedianRow {
    pub n: usize,
    pub distinct_pairs: f64,
    pub total_calls: f64,
    pub pairs_per_nlog2n: f64,
    pub depth: f64,
    pub retries: f64,
    pub wall_ms: Option<f64>,
}

pub fn medians(records: &[RunRecord]) -> Vec<MedianRow> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.vertices).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let rows: Vec<&RunRecord> = records.iter().filter(|r| r.vertices == n).collect();
            let col = |f: &dyn Fn(&RunRecord) -> f64| median(&mut rows.iter().map(|r| f(r)).collect::<Vec<_>>());
            let wall: Vec<f64> = rows.iter().filter_map(|r| r.wall_ms).collect();
            MedianRow {
                n,
                distinct_pairs: col(&|r| r.distinct_pairs as f64),
                total_calls: col(&|r| r.total_calls as f64),
                pairs_per_nlog2n: col(&|r| r.pairs_per_nlog2n()),
                depth: col(&|r| r.depth as f64),
                retries: col(&|r| r.retries as f64),
                wall_ms: (wall.len() == rows.len()).then(|| median(&mut wall.clone())),
            }
        })
        .collect()
}

/// One `run` row per record, then one `median` row per `n` (empty seed).
/// `wall_ms` is left empty for untimed runs.
pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let wall = |ms: Option<f64>| ms.map(|v| format!("{v:.3}")).unwrap_or_default();
    for r in records {
        w.write_record([
            "run".to_string(),
            r.vertices.to_string(),
            r.params.seed.to_string(),
            r.distinct_pairs.to_string(),
            r.total_calls.to_string(),
            format!("{:.6}", r.pairs_per_nlog2n()),
            r.depth.to_string(),
            r.retries.to_string(),
            wall(r.wall_ms),
        ])?;
    }
    for m in medians(records) {
        w.write_record([
            "median".to_string(),
            m.n.to_string(),
            String::new(),
            format!("{}", m.distinct_pairs),
            format!("{}", m.total_calls),
            format!("{:.6}", m.pairs_per_nlog2n),
            format!("{}", m.depth),
            format!("{}", m.retries),
            wall(m.wall_ms),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
