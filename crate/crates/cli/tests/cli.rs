use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn distrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distrecon")).args(args).output().expect("spawn distrecon")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn generate(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["generate", "--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    distrecon(&all)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_writes_a_valid_tree_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate(dir.path(), &["--family", "tree", "--n", "10", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let graph = read_json(&dir.path().join("graph.json"));
    assert_eq!(graph["n"], 10);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 9);
    assert_eq!(read_json(&dir.path().join("params.json"))["n"], 10);

    let check = distrecon(&[
        "check",
        "--suite",
        "witness",
        "--graph",
        dir.path().join("graph.json").to_str().unwrap(),
        "--witness",
        dir.path().join("witness.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
    assert!(stdout(&check).contains("witness: PASS"));
}

#[test]
fn generate_single_vertex_chordal() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate(dir.path(), &["--family", "chordal", "--n", "1"]);
    assert_eq!(code(&out), 0);
    let graph = read_json(&dir.path().join("graph.json"));
    assert_eq!(graph["n"], 1);
    assert!(graph["edges"].as_array().unwrap().is_empty());
}

#[test]
fn generate_rejects_degree_one_trees() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate(dir.path(), &["--family", "tree", "--n", "10", "--delta", "1"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn reconstruct_recovers_the_graph_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&generate(dir.path(), &["--family", "chordal", "--n", "80", "--delta", "4", "--seed", "5"])), 0);
    let graph = dir.path().join("graph.json");
    let report_path = dir.path().join("report.json");
    let run = |extra: &[&str]| {
        let mut args = vec!["reconstruct", "--graph", graph.to_str().unwrap(), "--delta", "4", "--seed", "11"];
        args.extend_from_slice(extra);
        distrecon(&args)
    };
    let first = run(&["--out", report_path.to_str().unwrap()]);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let second = run(&[]);
    assert_eq!(first.stdout, second.stdout);

    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["correct"], true);
    assert_eq!(report["edges"], read_json(&graph)["edges"]);
    assert!(report.get("wall_ms").is_none());
    assert_eq!(read_json(&report_path), report);
    let stats = &report["stats"];
    assert!(stats["distinct_pairs"].as_u64().unwrap() <= stats["total_calls"].as_u64().unwrap());
}

#[test]
fn reconstruct_with_tiny_budget_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["--family", "tree", "--n", "60"]);
    let out = distrecon(&["reconstruct", "--graph", dir.path().join("graph.json").to_str().unwrap(), "--budget", "10"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn reconstruct_rejects_disconnected_and_malformed_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let split = dir.path().join("split.json");
    fs::write(&split, r#"{"n": 4, "edges": [[0, 1], [2, 3]]}"#).unwrap();
    assert_eq!(code(&distrecon(&["reconstruct", "--graph", split.to_str().unwrap()])), 2);

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "not json").unwrap();
    assert_eq!(code(&distrecon(&["reconstruct", "--graph", junk.to_str().unwrap()])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&distrecon(&["reconstruct", "--graph", missing.to_str().unwrap()])), 2);
}

#[test]
fn bench_with_one_trial_prints_header_run_and_median() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = distrecon(&["bench", "--n", "64", "--trials", "1", "--seed", "4", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "row,n,seed,distinct_pairs,total_calls,pairs_per_nlog2n,depth,retries,wall_ms");
    assert!(lines[1].starts_with("run,64,4,"));
    assert!(lines[2].starts_with("median,64,,"));

    let to_stdout = distrecon(&["bench", "--n", "64", "--trials", "1", "--seed", "4"]);
    assert_eq!(stdout(&to_stdout), text);
}

#[test]
fn check_lemma2_suite_passes() {
    let out = distrecon(&["check", "--suite", "lemma2", "--instances", "10", "--subsets", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("lemma2: PASS (50 instances)"), "{text}");
}

#[test]
fn check_all_suites_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let out = distrecon(&["check", "--instances", "6", "--subsets", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let reports = read_json(&path);
    let names: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["property"].as_str().unwrap()).collect();
    assert_eq!(names, ["claim1", "lemma1", "lemma2", "claim3", "claim4", "witness"]);
    assert_eq!(stdout(&out).lines().filter(|l| l.contains(": PASS")).count(), 6);
}

#[test]
fn check_rejects_unknown_suite() {
    let out = distrecon(&["check", "--suite", "nonsense"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn check_reports_a_corrupted_witness() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["--family", "tree", "--n", "12", "--seed", "8"]);
    let witness_path = dir.path().join("witness.json");
    let mut witness = read_json(&witness_path);
    let bag = witness["bags"][0].as_array_mut().unwrap();
    assert!(bag.len() >= 2);
    bag.pop();
    fs::write(&witness_path, witness.to_string()).unwrap();

    let out = distrecon(&[
        "check",
        "--suite",
        "lemma2",
        "--graph",
        dir.path().join("graph.json").to_str().unwrap(),
        "--witness",
        witness_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("witness: FAIL"), "{text}");
}
