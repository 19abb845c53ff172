use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rainbow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

/// Report lines without the manifest.
fn body(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .filter(|l| !l.starts_with("{\"manifest\""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn construct(dir: &TempDir, args: &[&str], name: &str) -> (PathBuf, PathBuf) {
    let out = dir.path().join(name);
    let mut a = vec!["construct"];
    a.extend_from_slice(args);
    a.extend_from_slice(&["--out", s(&out)]);
    let o = rainbow(&a);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    (out.with_extension("hg"), out.with_extension("col"))
}

#[test]
fn verify_accepts_a_rainbow_cycle() {
    let dir = TempDir::new().unwrap();
    let (hg, col) = construct(&dir, &["prefix", "--n", "8", "--k", "3"], "pf");
    let cycle = write(&dir, "c.txt", "0 1 2 3 4 5 6 7\n");
    let o = rainbow(&["verify", "--hg", s(&hg), "--col", s(&col), "--cycle", s(&cycle)]);
    assert_eq!(code(&o), 0);
    let v = &lines(&o)[0]["verify"];
    assert_eq!(v["valid"], true);
    assert_eq!(v["rainbow"], true);
}

#[test]
fn verify_rejects_a_non_cycle() {
    let dir = TempDir::new().unwrap();
    let (hg, _) = construct(&dir, &["prefix", "--n", "8", "--k", "3"], "pf");
    let cycle = write(&dir, "c.txt", "0 1 2 3 4 5 6 6\n");
    let o = rainbow(&["verify", "--hg", s(&hg), "--cycle", s(&cycle)]);
    assert_eq!(code(&o), 1);
    assert_eq!(lines(&o)[0]["verify"]["valid"], false);
}

#[test]
fn tight_counterexample_has_no_rainbow_tight_cycle() {
    let dir = TempDir::new().unwrap();
    let (hg, col) = construct(&dir, &["tight-cx", "--n", "6"], "cx");
    let o = rainbow(&["rainbow-exists", "--hg", s(&hg), "--col", s(&col), "--tight"]);
    assert_eq!(code(&o), 1);
    assert_eq!(lines(&o)[0]["rainbow_exists"]["result"]["status"], "absent");
}

#[test]
fn malformed_hypergraph_reports_line() {
    let dir = TempDir::new().unwrap();
    let hg = write(&dir, "bad.hg", "3 6\n0 1 2\n# comment\n0 1 2\n");
    let o = rainbow(&["enumerate", "--hg", s(&hg)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn unknown_flag_is_invalid_input() {
    let o = rainbow(&["verify", "--bogus"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn exhausted_budget_exits_three() {
    let dir = TempDir::new().unwrap();
    let (hg, _) = construct(&dir, &["prefix", "--n", "8", "--k", "3"], "pf");
    let o = rainbow(&["enumerate", "--hg", s(&hg), "--count-only", "--node-limit", "5"]);
    assert_eq!(code(&o), 3);
    assert_eq!(lines(&o)[0]["enumerate"]["complete"], false);
}

#[test]
fn enumerate_counts_and_writes_witnesses() {
    let dir = TempDir::new().unwrap();
    let (hg, col) = construct(&dir, &["prefix", "--n", "6", "--k", "3"], "pf");
    let w = dir.path().join("w.txt");
    let o = rainbow(&["enumerate", "--hg", s(&hg), "--col", s(&col), "--witness", s(&w)]);
    assert_eq!(code(&o), 0);
    let out = lines(&o);
    let summary = &out[out.len() - 2]["enumerate"];
    let count = summary["count"].as_u64().unwrap();
    assert_eq!(summary["rainbow"].as_u64().unwrap(), count);
    assert_eq!(std::fs::read_to_string(&w).unwrap().lines().count() as u64, count);
    assert_eq!(out.len() as u64, count + 2);
}

#[test]
fn manifest_goes_to_file_when_asked() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.json");
    let out = dir.path().join("cx");
    let o = rainbow(&["construct", "tight-cx", "--n", "9", "--out", s(&out), "--manifest", s(&m)]);
    assert_eq!(code(&o), 0);
    assert!(body(&o).contains("\"edges\""));
    assert!(!String::from_utf8_lossy(&o.stdout).contains("manifest"));
    let v: Value = serde_json::from_str(std::fs::read_to_string(&m).unwrap().trim()).unwrap();
    assert_eq!(v["manifest"]["command"], "construct");
    assert_eq!(v["manifest"]["exit_code"], 0);
    assert!(v["manifest"]["wall_ms"].is_number());
}

#[test]
fn search_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (hg, _) = construct(&dir, &["prefix", "--n", "9", "--k", "3"], "k9");
    let text = std::fs::read_to_string(&hg).unwrap();
    let edges = text.lines().count() - 1;
    let col: String = (0..edges).map(|i| format!("{}\n", i / 3)).collect();
    let col = write(&dir, "c.col", &col);
    let (hg10, _) = construct(&dir, &["prefix", "--n", "10", "--k", "3"], "k10");
    let edges10 = std::fs::read_to_string(&hg10).unwrap().lines().count() - 1;
    let col10 = write(&dir, "c10.col", &(0..edges10).map(|i| format!("{}\n", i / 2)).collect::<String>());
    let args = ["search", "--hg", s(&hg10), "--col", s(&col10), "--seed", "11", "--max-steps", "50"];
    let a = rainbow(&args);
    let b = rainbow(&args);
    assert!([0, 3].contains(&code(&a)));
    assert_eq!(code(&a), code(&b));
    assert_eq!(body(&a), body(&b));
    assert!(!body(&a).is_empty());
    let bad = rainbow(&["search", "--hg", s(&hg), "--col", s(&col), "--seed", "1"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn mismatched_m_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (hg, col) = construct(&dir, &["prefix", "--n", "8", "--k", "3"], "pf");
    let o = rainbow(&["search", "--hg", s(&hg), "--col", s(&col), "--seed", "1", "--t", "1", "--mtilde", "1", "--m", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn switch_from_files_and_from_the_sampler() {
    let dir = TempDir::new().unwrap();
    let (hg, _) = construct(&dir, &["prefix", "--n", "12", "--k", "3"], "k12");
    let edges = std::fs::read_to_string(&hg).unwrap().lines().count() - 1;
    let col = write(&dir, "inj.col", &(0..edges).map(|i| format!("{i}\n")).collect::<String>());
    let cycle = write(&dir, "c.txt", "0 1 2 3 4 5 6 7 8 9 10 11\n");
    let sp = write(&dir, "sp.txt", "0 1 2\n4 5 6\n8 9 10\n");
    let x = write(&dir, "x.txt", "2 5 8\n1 4 10\n0 6 9\n");
    let r = write(&dir, "r.txt", "0 6\n2 8\n4 10\n");
    let base = ["switch", "--hg", s(&hg), "--col", s(&col), "--cycle", s(&cycle), "--seed", "2"];
    let mut a = base.to_vec();
    a.extend_from_slice(&["--splitting", s(&sp), "--partition", s(&x), "--rerouting", s(&r)]);
    let o = rainbow(&a);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = &lines(&o)[0]["switch"];
    assert!(v["is_feasible"]["repeated_colours"].as_array().unwrap().is_empty());
    assert_eq!(v["new_cycle"].as_array().unwrap().len(), 12);
    let mut b = base.to_vec();
    b.push("--sample");
    assert_eq!(code(&rainbow(&b)), 0);
    let o = rainbow(&base);
    assert_eq!(code(&o), 2);
}

#[test]
fn tile_reports_paths() {
    let dir = TempDir::new().unwrap();
    let (hg, _) = construct(&dir, &["prefix", "--n", "7", "--k", "3"], "k7");
    let pairs = write(&dir, "p.txt", "0 1\n");
    let o = rainbow(&["tile", "--hg", s(&hg), "--pairs", s(&pairs), "--t", "3", "--seed", "4"]);
    assert_eq!(code(&o), 0);
    let v = &lines(&o)[0]["tiling"];
    assert!(v["violations"].as_array().unwrap().is_empty());
    let path = v["paths"][0].as_array().unwrap();
    assert_eq!(path.len(), 7);
    assert_eq!(path[0], 0);
    assert_eq!(path[6], 1);
    let two = write(&dir, "p2.txt", "0 1\n2 3\n");
    let o = rainbow(&["tile", "--hg", s(&hg), "--pairs", s(&two), "--t", "2", "--seed", "4"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn sample_and_estimate_emit_records() {
    let dir = TempDir::new().unwrap();
    let (hg, _) = construct(&dir, &["prefix", "--n", "12", "--k", "3"], "k12");
    let edges = std::fs::read_to_string(&hg).unwrap().lines().count() - 1;
    let col = write(&dir, "inj.col", &(0..edges).map(|i| format!("{i}\n")).collect::<String>());
    let cycle = write(&dir, "c.txt", "0 1 2 3 4 5 6 7 8 9 10 11\n");
    let common = ["--hg", s(&hg), "--col", s(&col), "--cycle", s(&cycle), "--seed", "5", "--trials", "40", "--structural"];
    let mut a = vec!["sample"];
    a.extend_from_slice(&common);
    let o = rainbow(&a);
    assert_eq!(code(&o), 0);
    let out = lines(&o);
    assert_eq!(out.len(), 41);
    assert_eq!(out[3]["trial"]["trial"], 3);
    let mut b = vec!["estimate"];
    b.extend_from_slice(&common);
    let o = rainbow(&b);
    let e = &lines(&o)[0]["estimate"];
    assert_eq!(e["trials"], 40);
    let successes = e["successes"].as_u64().unwrap();
    let viable = out[..40].iter().filter(|r| r["trial"]["viable"] == true).count() as u64;
    assert_eq!(successes, viable);
}
