//! `distrecon` command line: generate instances, reconstruct graphs through a
//! counting distance oracle, sweep benchmarks and run property suites.
//!
//! Exit codes: 0 success, 1 incorrect reconstruction / failed property /
//! exhausted query budget, 2 usage or I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use distrecon::bench::{run_bench, write_csv, BenchSpec};
use distrecon::properties::{check_instance, run_suite, PropertyReport, SuiteParams, SUITES};
use distrecon::witness::{generate, Family, GeneratedInstance, InstanceParams, TreeDecomposition};
use distrecon::{reconstruct, CountingOracle, Graph, OracleError, ReconError, ReconstructionConfig, ReconstructionReport};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "distrecon", version, about = "Graph reconstruction from distance queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write graph.json, witness.json and params.json.
    Generate {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Grid only: number of columns (rows come from --n).
        #[arg(long)]
        cols: Option<usize>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a graph file through a counting oracle; prints the report as JSON.
    Reconstruct {
        /// Graph JSON: {"n": N, "edges": [[u, v], ...]}.
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        recon: ReconArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of distinct pairs the oracle answers.
        #[arg(long)]
        budget: Option<u64>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct many generated instances and emit CSV.
    ///
    /// Columns: row,n,seed,distinct_pairs,total_calls,pairs_per_nlog2n,depth,retries,wall_ms.
    /// `row` is `run` for a single trial and `median` for the per-n summary rows
    /// that follow them. `pairs_per_nlog2n` is distinct_pairs / (n log2(n)^2).
    /// `wall_ms` is empty unless --timing is given.
    Bench {
        #[arg(long, default_value = "tree")]
        family: Family,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        recon: ReconArgs,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        /// First seed; trial t uses seed + t for both generation and reconstruction.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timing: bool,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run property suites on generated instances or on a given graph and witness.
    Check {
        /// One of claim1, lemma1, lemma2, claim3, claim4, witness, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Random connected subsets per instance.
        #[arg(long, default_value_t = 20)]
        subsets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check this graph instead of generated ones (needs --witness, --k, --delta).
        #[arg(long, requires = "witness")]
        graph: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        witness: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        delta: u32,
        /// Write the JSON reports to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    delta: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ReconArgs {
    /// Treelength bound of the hidden graph.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Maximum-degree bound of the hidden graph.
    #[arg(long, default_value_t = 3)]
    delta: u32,
    /// Betweenness sample constant (default delta^k + 2).
    #[arg(long)]
    sample_constant: Option<f64>,
    /// Components at most this large are brute-forced (default max(2, floor(log2 n))).
    #[arg(long)]
    base_threshold: Option<usize>,
    #[arg(long, default_value_t = ReconstructionConfig::DEFAULT_MAX_RETRIES)]
    max_retries: u32,
    /// Derive child boundary layers from an extra (S ∪ R¹) x R batch.
    #[arg(long)]
    boundary_batch: bool,
}

impl ReconArgs {
    fn config(&self, seed: u64) -> ReconstructionConfig {
        ReconstructionConfig {
            sample_constant: self.sample_constant,
            base_threshold: self.base_threshold,
            max_retries_per_node: self.max_retries,
            boundary_batch: self.boundary_batch,
            ..ReconstructionConfig::new(self.k, self.delta, seed)
        }
    }
}

/// Error tagged with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: error.into(),
    }
}

fn failed(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        error: error.into(),
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate { instance, cols, out } => cmd_generate(instance, cols, &out),
        Command::Reconstruct {
            graph,
            recon,
            seed,
            budget,
            timing,
            out,
        } => cmd_reconstruct(&graph, &recon, seed, budget, timing, out.as_deref()),
        Command::Bench {
            family,
            n,
            recon,
            trials,
            seed,
            timing,
            out,
        } => cmd_bench(family, n, &recon, trials, seed, timing, out.as_deref()),
        Command::Check {
            suite,
            instances,
            subsets,
            seed,
            graph,
            witness,
            k,
            delta,
            out,
        } => {
            let params = SuiteParams {
                instances,
                subsets,
                seed,
                ..SuiteParams::default()
            };
            let input = graph.zip(witness);
            cmd_check(&suite, &params, input, k, delta, out.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(usage)?;
    fs::write(path, text + "\n")
        .with_context(|| format!("writing {}", path.display()))
        .map_err(usage)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

fn cmd_generate(args: InstanceArgs, cols: Option<usize>, out: &Path) -> CmdResult {
    let params = InstanceParams {
        cols,
        ..InstanceParams::new(args.family, args.n, args.delta, args.k, args.seed)
    };
    let GeneratedInstance { graph, witness, params } = generate(&params).map_err(usage)?;
    fs::create_dir_all(out)
        .with_context(|| format!("creating {}", out.display()))
        .map_err(usage)?;
    write_json(&out.join("graph.json"), &graph)?;
    if let Some(w) = &witness {
        write_json(&out.join("witness.json"), w)?;
    }
    write_json(&out.join("params.json"), &params)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ReconstructOutput {
    #[serde(flatten)]
    report: ReconstructionReport,
    correct: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

fn cmd_reconstruct(graph_path: &Path, recon: &ReconArgs, seed: u64, budget: Option<u64>, timing: bool, out: Option<&Path>) -> CmdResult {
    let graph: Graph = read_json(graph_path)?;
    let n = graph.n();
    let config = recon.config(seed);
    let mut oracle = match budget {
        Some(b) => CountingOracle::with_budget(graph.clone(), b),
        None => CountingOracle::new(graph.clone()),
    }
    .map_err(|e| usage(anyhow!(e).context(format!("loading {}", graph_path.display()))))?;
    let start = Instant::now();
    let report = match reconstruct(&mut oracle, n, &config) {
        Ok(r) => r,
        Err(e @ ReconError::Oracle(OracleError::BudgetExhausted { .. })) => return Err(failed(e)),
        Err(e) => return Err(usage(e)),
    };
    let wall_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let correct = report.edges == graph.edge_set();
    let output = ReconstructOutput { report, correct, wall_ms };
    let text = serde_json::to_string(&output).map_err(usage)?;
    println!("{text}");
    if let Some(path) = out {
        write_json(path, &output)?;
    }
    Ok(if correct { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(family: Family, ns: Vec<usize>, recon: &ReconArgs, trials: u64, seed: u64, timing: bool, out: Option<&Path>) -> CmdResult {
    let spec = BenchSpec {
        family,
        ns,
        delta: recon.delta,
        k: recon.k,
        trials,
        seed,
        config: recon.config(seed),
        timing,
    };
    let records = run_bench(&spec).map_err(usage)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))
                .map_err(usage)?;
            write_csv(&records, file).map_err(usage)?;
        }
        None => write_csv(&records, io::stdout().lock()).map_err(usage)?,
    }
    let wrong = records.iter().filter(|r| !r.correct).count();
    if wrong > 0 {
        return Err(failed(anyhow!("{wrong} of {} reconstructions were incorrect", records.len())));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    suite: &str,
    params: &SuiteParams,
    input: Option<(PathBuf, PathBuf)>,
    k: u32,
    delta: u32,
    out: Option<&Path>,
) -> CmdResult {
    if !SUITES.contains(&suite) {
        return Err(usage(anyhow!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))));
    }
    let reports: Vec<PropertyReport> = match input {
        None => run_suite(suite, params).map_err(failed)?,
        Some((graph_path, witness_path)) => {
            let graph: Graph = read_json(&graph_path)?;
            let witness: TreeDecomposition = read_json(&witness_path)?;
            let inst = GeneratedInstance {
                params: InstanceParams::new(Family::Treelength, graph.n(), delta, k, params.seed),
                graph,
                witness: Some(witness),
            };
            let all = check_instance(&inst, params).map_err(failed)?;
            all.into_iter()
                .filter(|r| suite == "all" || r.property == suite || !r.passed())
                .collect()
        }
    };
    let mut stdout = io::stdout().lock();
    for r in &reports {
        let _ = writeln!(stdout, "{}", r.summary());
        for f in &r.failures {
            let _ = writeln!(stdout, "  {}: {}", f.instance, f.counterexample);
        }
    }
    if let Some(path) = out {
        write_json(path, &reports)?;
    }
    Ok(if reports.iter().all(PropertyReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
