//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Runs with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use distrecon::bench::{median, pairs_per_nlog2n, run_bench, BenchSpec};
use distrecon::properties::{
    sweep_claim1, sweep_claim3, sweep_claim4, sweep_instances, sweep_lemma2, sweep_witness, PropertyReport,
};
use distrecon::witness::{generate, Family, InstanceParams};
use distrecon::{reconstruct, CountingOracle, ReconstructionConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut params = Vec::new();
    for i in 0..90 {
        // Log-uniform sizes across 5..=2000, with both ends pinned.
        let n = match i {
            0 => 5,
            1 => 2000,
            _ => (5f64 * 400f64.powf(rng.gen::<f64>())).round() as usize,
        };
        params.push(InstanceParams::new(Family::Tree, n, 3, 1, rng.gen()));
    }
    for _ in 0..60 {
        let n = rng.gen_range(5..=1000);
        params.push(InstanceParams::new(Family::Chordal, n, rng.gen_range(2..=6), 1, rng.gen()));
    }
    for i in 0..60u32 {
        let n = rng.gen_range(5..=500);
        params.push(InstanceParams::new(Family::Treelength, n, rng.gen_range(3..=4), 1 + i % 3, rng.gen()));
    }
    let start = Instant::now();
    let wrong: Vec<String> = params
        .par_iter()
        .filter_map(|p| {
            let inst = generate(p).expect("generator");
            let mut oracle = CountingOracle::new(inst.graph.clone()).expect("connected");
            let config = ReconstructionConfig::new(p.k, p.delta, p.seed);
            let report = reconstruct(&mut oracle, inst.graph.n(), &config).expect("reconstruction");
            (report.edges != inst.graph.edge_set()).then(|| format!("{} n={} seed={}", p.family, p.n, p.seed))
        })
        .collect();
    let elapsed = start.elapsed();
    let passed = wrong.is_empty() && elapsed < Duration::from_secs(600);
    verdict(
        passed,
        format!(
            "{}/{} instances exact in {:.1}s{}",
            params.len() - wrong.len(),
            params.len(),
            elapsed.as_secs_f64(),
            if wrong.is_empty() { String::new() } else { format!("; wrong: {wrong:?}") }
        ),
    )
}

fn scaling_with(config: ReconstructionConfig) -> (bool, String) {
    let ns = vec![250, 500, 1000, 2000, 4000];
    let spec = BenchSpec {
        family: Family::Tree,
        ns: ns.clone(),
        delta: 3,
        k: 1,
        trials: 10,
        seed: 0,
        config,
        timing: false,
    };
    let records = run_bench(&spec).expect("bench");
    let ratio_median = |n: usize| {
        let mut v: Vec<f64> = records
            .iter()
            .filter(|r| r.vertices == n)
            .map(|r| pairs_per_nlog2n(r.distinct_pairs, n))
            .collect();
        median(&mut v)
    };
    let first = ratio_median(250);
    let last = ratio_median(4000);
    let growth = last / first;
    let mut over = Vec::new();
    for &n in ns.iter().filter(|&&n| n >= 500) {
        let cap = (n * (n - 1) / 4) as u64;
        let worst = records.iter().filter(|r| r.vertices == n).map(|r| r.distinct_pairs).max().unwrap();
        if worst >= cap {
            over.push(format!("n={n}: max {worst} >= {cap}"));
        }
    }
    let all_correct = records.iter().all(|r| r.correct);
    let medians: Vec<String> = ns.iter().map(|&n| format!("{n}:{:.3}", ratio_median(n))).collect();
    let passed = growth <= 1.5 && over.is_empty() && all_correct;
    (
        passed,
        format!(
            "median pairs/(n log2^2 n) {}; growth 4000 vs 250 = {growth:.3} (limit 1.5); quarter-of-pairs cap {}",
            medians.join(" "),
            if over.is_empty() { "respected".to_string() } else { format!("exceeded at {}", over.join(", ")) }
        ),
    )
}

fn scaling() -> Verdict {
    let (passed, detail) = scaling_with(ReconstructionConfig::new(1, 3, 0));
    verdict(passed, format!("default sample constant 5: {detail}"))
}

fn sweep_verdict(report: PropertyReport) -> Verdict {
    let mut detail = format!("{} checks, {} counterexamples", report.instances_checked, report.failures.len());
    for f in report.failures.iter().take(5) {
        detail.push_str(&format!("\n    {}: {}", f.instance, f.counterexample));
    }
    verdict(report.passed(), detail)
}

fn retries() -> Verdict {
    let runs: Vec<(u64, usize, u32)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let inst = generate(&InstanceParams::new(Family::Tree, 500, 3, 1, 1000 + seed)).unwrap();
            let mut oracle = CountingOracle::new(inst.graph.clone()).unwrap();
            let report = reconstruct(&mut oracle, 500, &ReconstructionConfig::new(1, 3, seed)).unwrap();
            assert_eq!(report.edges, inst.graph.edge_set());
            (report.total_retries(), report.internal_nodes(), report.fallbacks)
        })
        .collect();
    let retries: u64 = runs.iter().map(|r| r.0).sum();
    let nodes: usize = runs.iter().map(|r| r.1).sum();
    let mean = retries as f64 / nodes as f64;
    let clean = runs.iter().filter(|r| r.2 == 0).count();
    verdict(
        mean <= 3.0 && clean >= 99,
        format!("mean retries per internal node {mean:.4} over {nodes} nodes (limit 3); {clean}/100 runs without fallback (need 99)"),
    )
}

fn determinism() -> Verdict {
    let cases: Vec<InstanceParams> = (0..24u64)
        .map(|i| match i % 3 {
            0 => InstanceParams::new(Family::Tree, 150 + 20 * i as usize, 3, 1, i),
            1 => InstanceParams::new(Family::Chordal, 100 + 10 * i as usize, 5, 1, i),
            _ => InstanceParams::new(Family::Treelength, 80 + 10 * i as usize, 3, 2 + (i % 2) as u32, i),
        })
        .collect();
    let problems: Vec<String> = cases
        .par_iter()
        .flat_map_iter(|p| {
            let inst = generate(p).unwrap();
            let g = &inst.graph;
            let config = ReconstructionConfig::new(p.k, p.delta, 77 + p.seed);
            let run = || {
                let mut oracle = CountingOracle::new(g.clone()).unwrap();
                let report = reconstruct(&mut oracle, g.n(), &config).unwrap();
                (serde_json::to_vec(&report).unwrap(), report, oracle)
            };
            let (bytes_a, report, mut oracle) = run();
            let (bytes_b, _, _) = run();
            let mut issues = Vec::new();
            let tag = format!("{} n={} seed={}", p.family, p.n, p.seed);
            if bytes_a != bytes_b {
                issues.push(format!("{tag}: reports differ"));
            }
            if report.stats.distinct_pairs > report.stats.total_calls {
                issues.push(format!("{tag}: distinct_pairs > total_calls"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let before = oracle.stats().distinct_pairs;
            let mut checked = 0;
            while checked < 1000 {
                let (u, v) = (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()));
                if !oracle.was_asked(u, v) {
                    continue;
                }
                checked += 1;
                let bfs = g.bfs_distances(u).unwrap()[&v];
                if oracle.query(u, v).unwrap() != bfs {
                    issues.push(format!("{tag}: d({u},{v}) disagrees with BFS"));
                }
            }
            if oracle.stats().distinct_pairs != before {
                issues.push(format!("{tag}: re-asking answered pairs charged new pairs"));
            }
            issues
        })
        .collect();
    verdict(
        problems.is_empty(),
        format!(
            "{} runs repeated byte-identically, 1000 answered pairs each checked against BFS{}",
            cases.len(),
            if problems.is_empty() { String::new() } else { format!("; issues: {problems:?}") }
        ),
    )
}

fn main() -> ExitCode {
    let instances = sweep_instances(100, 2024).expect("instances");
    let criteria: Vec<Criterion> = vec![
        ("exactness on 210 generated instances", Box::new(exactness)),
        ("query scaling on random trees", Box::new(scaling)),
        ("betweenness lower bound sweep", Box::new(|| sweep_verdict(sweep_claim1(&instances, 3).unwrap()))),
        ("shortest paths stay near A sweep", Box::new(|| sweep_verdict(sweep_lemma2(&instances, 20, 4).unwrap()))),
        ("ball separators are balanced sweep", Box::new(|| sweep_verdict(sweep_claim3(&instances, 20, 5).unwrap()))),
        ("oracle partition equals true components", Box::new(|| sweep_verdict(sweep_claim4(&instances, 5, 6).unwrap()))),
        ("retry behaviour on 100 trees", Box::new(retries)),
        ("determinism and accounting", Box::new(determinism)),
        ("witness integrity", Box::new(|| sweep_verdict(sweep_witness(100, 7).unwrap()))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let status = if v.passed { "PASS" } else { "FAIL" };
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {}: {status} {name} [{:.1}s]: {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
