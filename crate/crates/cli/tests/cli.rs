use std::path::{Path, PathBuf};
use std::process::Command;

use ptrank_core::document::{parse_document, serialize_document};
use ptrank_core::{BipartiteMatrix, BipartiteShape, ExactMatrix};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ptrank(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ptrank"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write(dir: &TempDir, name: &str, m: &BipartiteMatrix) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serialize_document(m)).unwrap();
    path
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend(["--out", path.to_str().unwrap()]);
    let r = ptrank(dir.path(), &all);
    assert_eq!(r.code, 0, "{}", r.stderr);
    path
}

#[test]
fn analyze_full_schmidt_document() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "x.json", &["--family", "full-schmidt", "--m1", "2", "--n1", "2", "--r", "1"]);
    let r = ptrank(dir.path(), &["analyze", p.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("saturated, Sr=4, rank=1, rankΓ=4"), "{}", r.stdout);
    assert!(r.stdout.contains("witness check: OK"));
}

#[test]
fn analyze_reports_gap() {
    let dir = TempDir::new().unwrap();
    let shape = BipartiteShape::new(2, 2, 2, 2).unwrap();
    let m = BipartiteMatrix::new(shape, ExactMatrix::diag_ints(&[1, 1, 1, 2])).unwrap();
    let p = write(&dir, "d.json", &m);
    let r = ptrank(dir.path(), &["analyze", p.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("not saturated, Sr=2, rank=4, rankΓ=4, bound=8, gap=4"), "{}", r.stdout);
}

#[test]
fn analyze_json_and_system_flag() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "v.json", &["--family", "vector", "--K", "2", "--m2", "2", "--n2", "1", "--d", "1"]);
    let r = ptrank(dir.path(), &["analyze", p.to_str().unwrap(), "--json", "--system", "a"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["analyzer"], "vector");
    assert_eq!(v["report"]["saturated"], true);
    assert_eq!(v["report"]["system"], "A");
}

#[test]
fn forced_case_with_wrong_preconditions() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "x.json", &["--family", "full-schmidt", "--m1", "2", "--n1", "3", "--r", "1"]);
    let r = ptrank(dir.path(), &["analyze", p.to_str().unwrap(), "--case", "2x2"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn malformed_rational_names_the_entry() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "x.json", &["--family", "full-schmidt", "--m1", "2", "--n1", "2", "--r", "1"]);
    let text = std::fs::read_to_string(&p).unwrap().replacen("\"1\"", "\"1/0\"", 1);
    std::fs::write(&p, text).unwrap();
    let r = ptrank(dir.path(), &["analyze", p.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("block (0,0) entry (0,0)"), "{}", r.stderr);
}

#[test]
fn zero_matrix_is_a_precondition_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "z.json", &BipartiteMatrix::zeros(BipartiteShape::new(1, 2, 2, 1).unwrap()));
    assert_eq!(ptrank(dir.path(), &["analyze", p.to_str().unwrap()]).code, 2);
}

#[test]
fn generate_two_by_three_family() {
    let dir = TempDir::new().unwrap();
    let r = ptrank(dir.path(), &["generate", "--family", "full-schmidt", "--m1", "2", "--n1", "3", "--r", "1"]);
    assert_eq!(r.code, 0);
    let m = parse_document(&r.stdout).unwrap();
    let s = m.shape();
    assert_eq!((s.m1, s.n1, s.m2, s.n2), (2, 3, 3, 3));
    // block (i, j) is the unit matrix E_ij
    for i in 0..2 {
        for j in 0..3 {
            assert_eq!(m.block(i, j), ExactMatrix::unit(3, 3, i, j));
        }
    }
}

#[test]
fn infeasible_generation() {
    let dir = TempDir::new().unwrap();
    let r = ptrank(dir.path(), &["generate", "--family", "vector", "--K", "3", "--m2", "2", "--d", "1"]);
    assert_eq!(r.code, 2);
    let r = ptrank(dir.path(), &["generate", "--family", "sr2", "--m2", "2", "--n2", "2", "--d", "1"]);
    assert_eq!(r.code, 2);
}

#[test]
fn reduce_sr2_input() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "s.json", &["--family", "sr2", "--case", "i", "--m2", "2", "--n2", "2", "--d", "1"]);
    let r = ptrank(dir.path(), &["reduce", p.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("mode sr2"));
    assert!(r.stdout.trim_end().ends_with("witness check: OK"));

    let r = ptrank(dir.path(), &["reduce", p.to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["witness_verified"], true);
    let reduced = parse_document(&v["reduced"].to_string()).unwrap();
    assert_eq!(reduced.schmidt_rank(), 2);
}

#[test]
fn reduce_full_schmidt_input() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "x.json", &["--family", "full-schmidt", "--m1", "2", "--n1", "2", "--r", "2"]);
    let r = ptrank(dir.path(), &["reduce", p.to_str().unwrap(), "--mode", "full-schmidt"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("witness check: OK"));
}

#[test]
fn reduce_rejects_wrong_schmidt_rank() {
    let dir = TempDir::new().unwrap();
    // E11⊗E11 + E12⊗E12 + E21⊗E21 has Schmidt rank 3
    let e = |i, j| ExactMatrix::unit(2, 2, i, j);
    let m = BipartiteMatrix::from_terms(&[(e(0, 0), e(0, 0)), (e(0, 1), e(0, 1)), (e(1, 0), e(1, 0))]).unwrap();
    let p = write(&dir, "s3.json", &m);
    assert_eq!(ptrank(dir.path(), &["reduce", p.to_str().unwrap(), "--mode", "sr2"]).code, 2);
    assert_eq!(ptrank(dir.path(), &["reduce", p.to_str().unwrap()]).code, 2);
}

#[test]
fn oracle_exhaustive_inequality() {
    let dir = TempDir::new().unwrap();
    let r = ptrank(dir.path(), &["oracle", "--suite", "inequality", "--exhaustive", "--shape", "2,2,2,2", "--entries", "0,1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("65536 instances tested"), "{}", r.stdout);
}

#[test]
fn oracle_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["fuzz", "--suite", "sr-invariance", "--trials", "1000", "--seed", "7", "--json"];
    let a: Value = serde_json::from_str(&ptrank(dir.path(), &args).stdout).unwrap();
    let b: Value = serde_json::from_str(&ptrank(dir.path(), &args).stdout).unwrap();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(a.clone()), strip(b));
    assert_eq!(a["instances"], 1000);
    assert_eq!(a["seed"], 7);
}

#[test]
fn oracle_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ptrank(dir.path(), &["oracle", "--suite", "nope"]).code, 2);
    assert_eq!(ptrank(dir.path(), &["oracle", "--suite", "kron-rank", "--exhaustive"]).code, 2);
    assert_eq!(ptrank(dir.path(), &["oracle", "--suite", "inequality", "--entries", "1/0"]).code, 1);
    let r = Command::new(env!("CARGO_BIN_EXE_ptrank"))
        .current_dir(dir.path())
        .env("PTRANK_BUDGET", "1000")
        .args(["oracle", "--suite", "inequality", "--exhaustive"])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("budget is 1000"));
}

#[test]
fn oracle_list() {
    let dir = TempDir::new().unwrap();
    let r = ptrank(dir.path(), &["oracle", "--list"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().count() >= 18);
}
