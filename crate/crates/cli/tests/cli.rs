use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn crosscount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosscount")).args(args).env_remove("CROSSCOUNT_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn generate(dir: &Path, m: usize, n: usize) -> String {
    let path = dir.join(format!("pair_{m}_{n}.json")).to_str().unwrap().to_owned();
    let out = crosscount(&["generate", "--m", &m.to_string(), "--n", &n.to_string(), "--out", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn count_reports_the_extremal_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), 9, 7);
    let out = crosscount(&["count", "--in", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({ "crossings": 50 }));
}

#[test]
fn unknown_flags_and_bad_files_are_usage_errors() {
    assert_eq!(crosscount(&["count", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(crosscount(&["bogus"]).status.code(), Some(2));
    assert_eq!(crosscount(&["count", "--in", "/nonexistent/pair.json"]).status.code(), Some(2));
    assert_eq!(crosscount(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_accepts_pairs_within_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), 7, 5);
    let out = crosscount(&["verify", "--conjecture", "--in", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"]["verdict"], "within_bound");
    assert_eq!(crosscount(&["verify", "--in", &path]).status.code(), Some(0));
}

#[test]
fn inflated_claims_are_reported_as_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), 7, 5);
    let out = crosscount(&["verify", "--conjecture", "--claimed", "30", "--in", &path]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn structural_reports_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), 9, 9);
    let comp = json(&crosscount(&["components", "--in", &path]));
    assert_eq!(comp["crossings"], 9 * 9 - 18 + 3);
    assert_eq!(comp["bounds"]["weak"]["holds"], true);
    let analyze = crosscount(&["analyze", "--in", &path, "--audit", "lemma2"]);
    assert_eq!(analyze.status.code(), Some(0));
    assert_eq!(json(&analyze)["lemma2"]["violations"], serde_json::json!([]));
    let pipeline = crosscount(&["pipeline", "--in", &path]);
    assert_eq!(pipeline.status.code(), Some(0));
    assert_eq!(json(&pipeline)["stage_sizes"].as_array().unwrap().len(), 11);
    let svg = dir.path().join("fig.svg");
    let render = crosscount(&["render", "--in", &path, "--out", svg.to_str().unwrap(), "--crossings", "--highlight", "P0,Q1"]);
    assert_eq!(render.status.code(), Some(0));
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn ramsey_operations() {
    let es = json(&crosscount(&["ramsey", "--op", "es", "--r", "37", "--s", "37"]));
    assert_eq!(es["es"], "112186277816662845432");
    let cup = crosscount(&["ramsey", "--op", "cupcap", "--r", "3", "--s", "3", "--points", "0,0;1,1;2,0;3,5;4,-1"]);
    assert_eq!(cup.status.code(), Some(0));
    assert_eq!(json(&cup)["verified"], true);
    assert_eq!(crosscount(&["ramsey", "--op", "tournament", "--size", "20"]).status.code(), Some(0));
    let mono = json(&crosscount(&["ramsey", "--op", "monotone", "--seq", "5,1,4,2,3"]));
    assert_eq!(mono["guaranteed"], 3);
}

#[test]
fn search_resumes_from_its_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let s = state.to_str().unwrap();
    let first = json(&crosscount(&["search", "--m", "3", "--n", "5", "--budget", "2e2", "--resume", s]));
    assert_eq!(first["steps"], 200);
    let second = crosscount(&["search", "--m", "3", "--n", "5", "--budget", "1e5", "--resume", s]);
    assert_eq!(second.status.code(), Some(0));
    let report = json(&second);
    assert!(report["score"].as_u64().unwrap() >= first["score"].as_u64().unwrap());
    assert_eq!(report["score"], 10);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_crosscount"))
            .args(["ramsey", "--op", "monotone", "--size", "30"])
            .env("CROSSCOUNT_SEED", seed)
            .output()
            .unwrap();
        json(&out)["sequence"].clone()
    };
    assert_eq!(run("4"), run("4"));
    assert_ne!(run("4"), run("5"));
}
