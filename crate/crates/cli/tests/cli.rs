//! End-to-end runs of the `entangle` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entangle"))
        .args(args)
        .env("ENTANGLE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

#[test]
fn level_six_table_row() {
    let cache = tempfile::tempdir().unwrap();
    let o = run(cache.path(), &["tables", "reproduce", "--levels", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["m,m1,m2,total,D3,D6,Dic3", "6,2,3,4,4,0,0"]);
}

#[test]
fn levels_outside_default_need_extended() {
    let cache = tempfile::tempdir().unwrap();
    let o = run(cache.path(), &["tables", "reproduce", "--levels", "14"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invariants_of_named_g10() {
    let cache = tempfile::tempdir().unwrap();
    let o = run(cache.path(), &["groups", "named", "--name", "G10"]);
    assert!(o.status.success());
    let file = cache.path().join("g10.json");
    std::fs::write(&file, &o.stdout).unwrap();
    let o = run(
        cache.path(),
        &["groups", "invariants", file.to_str().unwrap()],
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["d"], 30);
    assert_eq!(v["c2"], 0);
    assert_eq!(v["c3"], 6);
    assert_eq!(v["cinf"], 3);
    assert_eq!(v["genus"], 0);
}

#[test]
fn level18_models_verify() {
    let cache = tempfile::tempdir().unwrap();
    let o = run(cache.path(), &["verify", "models", "--which", "18"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0]["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn census_budget_exit_code() {
    let cache = tempfile::tempdir().unwrap();
    let o = run(cache.path(), &["census", "--T", "50", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let cache = tempfile::tempdir().unwrap();
    assert_eq!(run(cache.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(cache.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn output_independent_of_jobs_and_cache() {
    let cache = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 2] = [
        &["tables", "reproduce", "--levels", "6,10,12"],
        &[
            "census",
            "--T",
            "60",
            "--checkpoints",
            "20,40",
            "--out",
            "csv",
        ],
    ];
    for args in cases {
        let mut outputs = Vec::new();
        for jobs in ["1", "3"] {
            let mut a = vec!["--jobs", jobs];
            a.extend_from_slice(args);
            outputs.push(run(cache.path(), &a).stdout);
            a.insert(0, "--no-cache");
            outputs.push(run(cache.path(), &a).stdout);
        }
        assert!(!outputs[0].is_empty());
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "outputs differ for {args:?}"
        );
    }
}

#[test]
fn output_file_option() {
    let cache = tempfile::tempdir().unwrap();
    let path = cache.path().join("t.csv");
    let o = run(
        cache.path(),
        &[
            "--output",
            path.to_str().unwrap(),
            "tables",
            "reproduce",
            "--levels",
            "6",
        ],
    );
    assert!(o.status.success());
    assert!(std::fs::read_to_string(path)
        .unwrap()
        .contains("6,2,3,4,4,0,0"));
}
