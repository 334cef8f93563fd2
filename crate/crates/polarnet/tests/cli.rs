use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polarnet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarnet"))
        .args(args)
        .current_dir(cwd)
        .env_remove("POLARNET_OUT_DIR")
        .output()
        .unwrap()
}

fn synth(dir: &Path) {
    let out = polarnet(&["synth", "--n-left", "60", "--n-right", "60", "--p-in", "0.1", "--p-out", "0.005", "--seed", "4", "--out", "bundle"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn write_config(dir: &Path, extra: &str) {
    let cfg = format!(
        "edges = bundle/edges.tsv\nfollowership = bundle/followership.csv\nanchor = right_daily\nseed = 3\npermutations = 200\nout_dir = out\n{extra}"
    );
    fs::write(dir.join("run.cfg"), cfg).unwrap();
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out/manifest.json")).unwrap()).unwrap()
}

#[test]
fn report_runs_every_stage() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    write_config(dir.path(), "tweets = bundle/tweets.jsonl\n");
    let out = polarnet(&["report", "--config", "run.cfg"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(dir.path());
    let stages = m["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 8);
    assert!(stages.iter().all(|s| s["status"] == "complete"), "{stages:?}");
    assert_eq!(m["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["seed"], 3);
}

#[test]
fn missing_tweets_abort_at_text_stage() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    write_config(dir.path(), "tweets = bundle/missing.jsonl\n");
    let out = polarnet(&["report", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("`text`"), "{stderr}");
    let m = manifest(dir.path());
    let stages = m["stages"].as_array().unwrap();
    assert_eq!(stages.last().unwrap()["name"], "text");
    assert_eq!(stages.last().unwrap()["status"], "failed");
    assert!(dir.path().join("out/assortativity.json.partial").exists());
    assert!(!dir.path().join("out/assortativity.json").exists());
}

#[test]
fn parse_errors_name_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.tsv"), "a\tb\n# ok\nc\td\tmany\n").unwrap();
    let out = polarnet(&["ingest", "--edges", "e.tsv", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("e.tsv:3"), "{stderr}");
}

#[test]
fn usage_errors_exit_with_input_status() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(polarnet(&["report"], dir.path()).status.code(), Some(1));
    assert_eq!(polarnet(&["bogus"], dir.path()).status.code(), Some(1));
    assert!(polarnet(&["--help"], dir.path()).status.success());
}

#[test]
fn env_var_overrides_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.tsv"), "a\tb\nb\tc\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_polarnet"))
        .args(["ingest", "--edges", "e.tsv", "--out", "ignored"])
        .current_dir(dir.path())
        .env("POLARNET_OUT_DIR", "chosen")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("chosen/graph.json").exists());
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn single_stage_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let b = |f: &str| format!("bundle/{f}");
    let (e, f) = (b("edges.tsv"), b("followership.csv"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["score", "--followership", &f, "--anchor", "right_daily", "--out", "s"],
        vec!["centrality", "--edges", &e, "--top-k", "5", "--out", "c"],
        vec!["communities", "--edges", &e, "--gamma", "0.01,1", "--out", "m"],
        vec!["assort", "--edges", &e, "--followership", &f, "--anchor", "right_daily", "--permutations", "100", "--out", "a"],
    ];
    for args in runs {
        let out = polarnet(&args, dir.path());
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let scores = fs::read_to_string(dir.path().join("s/scores.csv")).unwrap();
    assert!(scores.starts_with("# seed=0 anchor=right_daily"));
    let a: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a/assortativity.json")).unwrap()).unwrap();
    assert!(a["r"].as_f64().unwrap() > 0.5);
    let bad_anchor = polarnet(&["score", "--followership", &f, "--anchor", "nope", "--out", "x"], dir.path());
    assert_eq!(bad_anchor.status.code(), Some(1));
}
