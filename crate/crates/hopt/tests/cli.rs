use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hopt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn hopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopt")).args(args).env_remove("HOPT_SEED").output().unwrap()
}

fn eval(name: &str, extra: &[&str]) -> Output {
    let path = program(name);
    let mut args = vec!["eval-file", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    hopt(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn violations(report: &Value, law: &str) -> usize {
    report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|s| s["violations"].as_array().unwrap())
        .filter(|v| v["law"] == law)
        .count()
}

#[test]
fn smoke_program_passes_quickly() {
    let t = Instant::now();
    let out = eval("smoke.hopt", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(t.elapsed() < Duration::from_secs(10));
    let r = json(&out);
    assert!(r["suites"].as_array().unwrap().iter().all(|s| s["status"] == "PASS" || s["status"] == "PARTIAL"));
}

#[test]
fn corrupted_seq_breaks_exactly_one_l3_instance() {
    let out = eval("corrupted.hopt", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(violations(&json(&out), "L3"), 1);
}

#[test]
fn headroom_is_exit_three_only_under_strict_bounds() {
    let out = eval("headroom.hopt", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["suites"].as_array().unwrap().iter().any(|s| s["status"] == "BOUND_EXCEEDED"));
    assert_eq!(eval("headroom.hopt", &["--strict-bounds"]).status.code(), Some(3));
}

#[test]
fn declared_combs_carry_witnesses() {
    let out = eval("combs.hopt", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let w = r["suites"][0]["witnesses"].as_array().unwrap();
    let labels: Vec<&str> = w.iter().map(|w| w["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["pre", "sandwich", "twotooth"]);
}

#[test]
fn replay_reproduces_a_saved_violation() {
    let report = scratch("corrupted.json");
    let out = eval("corrupted.hopt", &["--output", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let target = format!("{}#0", report.display());
    let again = hopt(&["check", "--replay", &target]);
    assert_eq!(again.status.code(), Some(1), "{}", String::from_utf8_lossy(&again.stderr));
    assert!(String::from_utf8_lossy(&again.stdout).contains("reproduced"));
    let missing = hopt(&["check", "--replay", &format!("{}#999999", report.display())]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two_with_a_position() {
    let path = scratch("bad.hopt");
    std::fs::write(&path, "model finset;\nobject B = ;\n").unwrap();
    let out = hopt(&["eval-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at 2:12"));
}

#[test]
fn type_errors_exit_two() {
    let path = scratch("ill_typed.hopt");
    std::fs::write(&path, "model finset;\nobject B = {0, 1};\nobject T = {a, b, c};\nmorphism f: B -> T = {0->a, 1->b};\nmorphism g: B -> T = f ; f;\n")
        .unwrap();
    let out = hopt(&["eval-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot compose"));
}

#[test]
fn empty_program_runs_no_suites() {
    let path = scratch("empty.hopt");
    std::fs::write(&path, "").unwrap();
    let out = hopt(&["eval-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suites"].as_array().unwrap().len(), 0);
}

#[test]
fn unknown_model_is_an_input_error() {
    assert_eq!(hopt(&["check", "--model", "vect"]).status.code(), Some(2));
    assert_eq!(hopt(&["check", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["check", "--model", "matq", "--suite", "enriched", "--max-size", "2", "--samples", "20", "--seed", "11"];
    let (a, b) = (hopt(&args), hopt(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hopt"))
        .args(["check", "--model", "finset", "--suite", "linked", "--max-size", "2"])
        .env("HOPT_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["seed"], 5);
}

#[test]
fn timings_are_null_unless_requested() {
    let args = ["check", "--model", "finset", "--suite", "linked", "--max-size", "2"];
    let plain = json(&hopt(&args));
    assert!(plain["suites"][0]["elapsed_ms"].is_null());
    let mut timed = args.to_vec();
    timed.push("--timings");
    assert!(json(&hopt(&timed))["suites"][0]["elapsed_ms"].is_u64());
}

#[test]
fn text_format_summarizes_suites() {
    let out = eval("corrupted.hopt", &["--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL]"));
    assert!(text.lines().last().unwrap().ends_with("failed"));
}

#[test]
fn matq_enumerating_suites_are_partial() {
    let out = hopt(&["check", "--model", "matq", "--suite", "karoubi", "--max-size", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suites"][0]["status"], "PARTIAL");
}
