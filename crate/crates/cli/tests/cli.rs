use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn runmerge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_runmerge")).args(args).current_dir(dir).output().expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> Output {
    let out = runmerge(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_then_sort() {
    let d = tempfile::tempdir().unwrap();
    ok(&["gen", "--family", "random-perm", "--n", "1000", "--seed", "7", "--out", "a.txt"], d.path());
    ok(&["sort", "--algo", "powersort", "--merge", "gallop-log", "--in", "a.txt", "--report", "r.json"], d.path());
    let r = json(&d.path().join("r.json"));
    assert_eq!(r["sorted"], true);
    assert_eq!(r["stable"], true);
    assert_eq!(r["n"], 1000);
    assert!(r["comparisons"].as_u64().unwrap() > 0);
    assert!(r["H"].as_f64().unwrap() > 0.0);
    assert!(r["H_star"].as_f64().unwrap() > 0.0);
    let lengths: u64 = r["run_lengths"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(lengths, 1000);
    assert_eq!(r["bounds"]["thm45"]["applies"], true);
}

#[test]
fn sorted_input_needs_no_merges() {
    let d = tempfile::tempdir().unwrap();
    let keys: String = (0..500).map(|k| format!("{}\n", k / 3)).collect();
    fs::write(d.path().join("sorted.txt"), keys).unwrap();
    let out = ok(&["sort", "--algo", "timsort", "--merge", "naive", "--in", "sorted.txt"], d.path());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["merges"], 0);
    assert_eq!(r["comparisons"], 499);
    assert_eq!(r["rho"], 1);
}

#[test]
fn sort_writes_keys_and_trees() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("a.txt"), "# three runs\n3\n4\n1\n2\n0\n-5\n").unwrap();
    ok(
        &["sort", "--in", "a.txt", "--out", "o.txt", "--report", "r.json", "--tree", "json", "--algo", "natural"],
        d.path(),
    );
    assert_eq!(fs::read_to_string(d.path().join("o.txt")).unwrap(), "-5\n0\n1\n2\n3\n4\n");
    let r = json(&d.path().join("r.json"));
    assert_eq!(r["tree"]["len"], 6);
    assert_eq!(r["tree"]["children"].as_array().unwrap().len(), 2);

    ok(&["sort", "--in", "a.txt", "--report", "r.json", "--tree", "dot", "--tree-out", "t.dot"], d.path());
    let dot = fs::read_to_string(d.path().join("t.dot")).unwrap();
    assert!(dot.starts_with("digraph") && dot.trim_end().ends_with('}'));
}

#[test]
fn verify_growth_suite_passes() {
    let d = tempfile::tempdir().unwrap();
    let out = ok(&["verify", "--suite", "growth", "--algo", "all", "--cases", "200", "--seed", "1"], d.path());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_all_suites_pass() {
    let d = tempfile::tempdir().unwrap();
    ok(&["verify", "--cases", "60", "--seed", "9", "--max-n", "3000", "--report", "v.json"], d.path());
    let r = json(&d.path().join("v.json"));
    assert_eq!(r["suites"].as_array().unwrap().len(), 6);
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| runmerge(args, d.path()).status.code();
    assert_eq!(code(&["sort", "--in", "x", "--bogus"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["sort", "--in", "x", "--tau", "0"]), Some(2));
    assert_eq!(code(&["gen", "--family", "nope"]), Some(2));
    assert_eq!(code(&["sort", "--in", "missing.txt"]), Some(3));
    fs::write(d.path().join("bad.txt"), "1\ntwo\n").unwrap();
    assert_eq!(code(&["sort", "--in", "bad.txt"]), Some(3));
    assert_eq!(code(&["--help"]), Some(0));

    let out = runmerge(&["sort", "--in", "x", "--bogus"], d.path());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--merge"), "help text expected: {err}");
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(Result::unwrap).collect()
}

#[test]
fn bench_matrix_is_complete_and_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let args = [
        "bench", "--algo", "all", "--merge", "naive,gallop-fixed", "--family", "few-runs:6", "--n", "2000",
        "--seeds", "0..3",
    ];
    let a = ok(&[&args[..], &["--out", "a.csv"]].concat(), d.path());
    assert!(a.stdout.is_empty());
    ok(&[&args[..], &["--out", "b.csv", "--jobs", "2"]].concat(), d.path());
    let a = fs::read_to_string(d.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read_to_string(d.path().join("b.csv")).unwrap());
    let header = a.lines().next().unwrap();
    assert_eq!(
        header,
        "algo,merge_mode,param,family,n,seed,rho,sigma,H,Hstar,comparisons,moves,merges,\
         bound_thm43,bound_thm45,internal_length_sum"
    );
    assert_eq!(csv_rows(&a).len(), 48);
}

#[test]
fn bench_few_values_gallop_beats_naive() {
    let d = tempfile::tempdir().unwrap();
    let out = ok(
        &["bench", "--merge", "naive,gallop-fixed", "--family", "few-values:2", "--n", "20000", "--seeds", "4"],
        d.path(),
    );
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 16);
    for pair in rows.chunks(2) {
        let (naive, gallop) = (&pair[0], &pair[1]);
        assert_eq!((&naive[1], &gallop[1]), ("naive", "gallop-fixed"));
        let c = |r: &csv::StringRecord| r[10].parse::<f64>().unwrap();
        assert!(c(gallop) < 0.5 * c(naive), "{} {} vs {}", &naive[0], c(gallop), c(naive));
    }
}
