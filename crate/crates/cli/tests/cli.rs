use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ilm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilm")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_edges_trace_and_lineage() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    let trace = dir.path().join("trace.csv");
    let lineage = dir.path().join("lineage.json");
    let out = ilm(&[
        "generate", "--graph", "C4", "--sequence", "(01)*", "--steps", "4",
        "--out", path(&edges), "--trace", path(&trace), "--lineage", path(&lineage),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let trace = fs::read_to_string(&trace).unwrap();
    let last = trace.lines().last().unwrap();
    assert_eq!(last, "4,1,64,656,656");
    for row in trace.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[3], f[4]);
    }

    let analyzed = ilm(&["analyze", "--in", path(&edges), "--lineage", path(&lineage), "--metrics", "--spectral"]);
    assert_eq!(code(&analyzed), 0, "{}", String::from_utf8_lossy(&analyzed.stderr));
    let v: Value = serde_json::from_slice(&analyzed.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("clustering") && text.contains("gap"));
    assert!(!text.contains("hamiltonicity"));
}

#[test]
fn generate_to_stdout_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = ilm(&["generate", "--graph", "K2", "--sequence", "1", "--steps", "1", "--dot", path(&dot)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let edges = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count();
    assert!(edges >= 5, "{text}");
    assert!(fs::read_to_string(&dot).unwrap().contains("graph"));
}

#[test]
fn verify_single_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = ilm(&["verify", "--theorems", "thm-specgap", "--out", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.trim_end().lines().last().unwrap().starts_with("PASS"), "{stdout}");
    for f in ["report.json", "report.csv", "report.txt", "corpus.json"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }

    let plots = ilm(&["export-plots", "--in", path(dir.path())]);
    assert_eq!(code(&plots), 0, "{}", String::from_utf8_lossy(&plots.stderr));
    let csvs: Vec<_> = fs::read_dir(dir.path().join("plots")).unwrap().collect();
    assert!(!csvs.is_empty());
    let first = fs::read_to_string(csvs[0].as_ref().unwrap().path()).unwrap();
    assert!(first.starts_with("t,n,edges,edges_per_vertex,density,clustering,gap"));
}

#[test]
fn json_format_is_parseable() {
    let out = ilm(&["verify", "--theorems", "lem-radius3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_array() || v.is_object());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&ilm(&["analyze", "--in", "/nonexistent/missing.txt"])), 2);
    assert_eq!(code(&ilm(&["verify", "--theorems", "no-such-check"])), 2);
    assert_eq!(code(&ilm(&["generate", "--graph", "C4", "--sequence", "01x", "--steps", "2"])), 2);
    assert_eq!(code(&ilm(&["verify", "--format", "yaml", "--theorems", "lem-radius3"])), 2);
}

#[test]
fn capacity_errors_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_ilm"))
        .env("ILM_MAX_VERTICES", "16")
        .args(["generate", "--graph", "C4", "--sequence", "(1)*", "--steps", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_is_applied_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, r#"{"seed": 7}"#).unwrap();
    let out = ilm(&["--config", path(&good), "verify", "--theorems", "lem-radius3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(code(&ilm(&["--config", path(&bad), "verify", "--theorems", "lem-radius3"])), 2);
}
