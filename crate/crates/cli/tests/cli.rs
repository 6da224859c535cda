use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_realbott");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_five_gives_54_classes() {
    let v = json_ok(&["classify", "--dim", "5"]);
    assert_eq!(v["class_count"], 54);
    assert_eq!(v["total_matrices"], 1024);
    assert_eq!(v["verified"], true);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 54);
}

#[test]
fn classify_output_independent_of_jobs() {
    let one = run(&["classify", "--dim", "5", "--jobs", "1"]);
    let four = run(&["classify", "--dim", "5", "--jobs", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn cache_round_trip_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("n4.cache");
    let fresh = run(&["classify", "--dim", "4", "--cache", s(&cache)]);
    assert!(fresh.status.success());
    assert!(fs::read(&cache).unwrap().starts_with(b"RBOTCACH"));
    let cached = run(&["classify", "--dim", "4", "--cache", s(&cache)]);
    assert_eq!(fresh.stdout, cached.stdout);

    // a corrupt cache is recomputed and rewritten
    fs::write(&cache, b"garbage").unwrap();
    let again = run(&["classify", "--dim", "4", "--cache", s(&cache)]);
    assert_eq!(fresh.stdout, again.stdout);
    assert!(fs::read(&cache).unwrap().starts_with(b"RBOTCACH"));

    // a cache for another size is not reused
    let other = run(&["classify", "--dim", "3", "--cache", s(&cache)]);
    let v: Value = serde_json::from_slice(&other.stdout).unwrap();
    assert_eq!(v["class_count"], 4);
}

#[test]
fn equivalent_distinguishes_and_identifies() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "10010\n01100\n00110\n00011\n00001\n");
    let b = write(&dir, "b", "10100\n01001\n00110\n00011\n00001\n");
    let v = json_ok(&["equivalent", "--a", s(&a), "--b", s(&b)]);
    assert_eq!(v["equivalent"], false);
    let v = json_ok(&["equivalent", "--a", s(&a), "--b", s(&a)]);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["keys_agree"], true);
}

#[test]
fn equivalent_rejects_size_mismatch() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "10\n01\n");
    let b = write(&dir, "b", "100\n010\n001\n");
    let out = run(&["equivalent", "--a", s(&a), "--b", s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "SizeMismatch");
}

#[test]
fn normal_form_of_identity() {
    let dir = TempDir::new().unwrap();
    let i5 = write(&dir, "i5", "10000\n01000\n00100\n00010\n00001\n");
    let v = json_ok(&["normal-form", "--input", s(&i5)]);
    assert_eq!(v["k"], 5);
    assert_eq!(v["s"], 0);
    assert_eq!(v["B"], "");
}

#[test]
fn fixed_points_single_element_and_all() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a", "10110\n01010\n00110\n00011\n00001\n");
    let all = json_ok(&["fixed-points", "--input", s(&a)]);
    assert_eq!(all["s"], 2);
    assert_eq!(all["elements"].as_array().unwrap().len(), 3);
    assert!(all.get("aggregate").is_some());
    let one = json_ok(&["fixed-points", "--input", s(&a), "--element", "0b10"]);
    assert_eq!(one["elements"][0], all["elements"][1]);
    assert!(one.get("aggregate").is_none());
    let out = run(&["fixed-points", "--input", s(&a), "--element", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_small_tables() {
    for n in ["2", "3", "4"] {
        let v = json_ok(&["verify", "--dim", n]);
        assert_eq!(v["ok"], true, "size {n}");
        assert_eq!(v["covers_every_class"], true);
    }
}

#[test]
fn family_counts() {
    let v = json_ok(&["family", "--dim", "5", "--spec", "circle-over-chain:3"]);
    assert_eq!(
        v["count"].as_u64().unwrap() as usize,
        v["representatives"].as_array().unwrap().len()
    );
    let out = run(&["family", "--dim", "5", "--spec", "circle-over-chain:4"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["family", "--dim", "5", "--spec", "circle-over-nothing"]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "UnknownFamily");
}

#[test]
fn bad_input_is_reported_as_json() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad", "10\n11\n");
    let out = run(&["normal-form", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "LowerTriangleNonzero");
    assert!(out.stdout.is_empty());

    let out = run(&["normal-form", "--input", s(&dir.path().join("missing"))]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "Io");
}

#[test]
fn bad_flags_exit_one_help_exits_zero() {
    let out = run(&["classify", "--dim", "5", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"], "Usage");
    let out = run(&["classify", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
}

#[test]
fn text_format() {
    let out = run(&["--format", "text", "classify", "--dim", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classes = 4\n"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
