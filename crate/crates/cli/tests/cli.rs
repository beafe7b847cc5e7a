use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn locdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}; stderr: {}", String::from_utf8_lossy(&out.stderr)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// Order of a 2x2 matrix mod `m` by repeated multiplication.
fn brute_order(a: [u64; 4], m: u64) -> u64 {
    let mul = |x: [u64; 4], y: [u64; 4]| {
        [
            (x[0] * y[0] + x[1] * y[2]) % m,
            (x[0] * y[1] + x[1] * y[3]) % m,
            (x[2] * y[0] + x[3] * y[2]) % m,
            (x[2] * y[1] + x[3] * y[3]) % m,
        ]
    };
    let mut x = a;
    let mut k = 1;
    while x != [1, 0, 0, 1] {
        x = mul(x, a);
        k += 1;
    }
    k
}

#[test]
fn close_unipotent() {
    let v = json(&locdiv(&["close", "-p", "5", "-n", "1", "[[1,1],[0,1]]"]));
    assert_eq!(v["order"], 5);
    assert_eq!(v["invariant_lines"].as_array().unwrap().len(), 1);
    assert_eq!(v["classification"]["tag"], "OneLine-Borel");
}

#[test]
fn close_split_diagonal() {
    let v = json(&locdiv(&["close", "-p", "5", "-n", "1", "[[2,0],[0,3]]"]));
    assert_eq!(v["order"], brute_order([2, 0, 0, 3], 5));
    assert_eq!(v["order"], 4);
    assert_eq!(v["invariant_lines"].as_array().unwrap().len(), 2);
    assert_eq!(v["classification"]["tag"], "TwoLines-DiagonalCyclic");
}

#[test]
fn close_reports_kernel_dimension_mod_25() {
    let v = json(&locdiv(&[
        "close",
        "-p",
        "5",
        "-n",
        "2",
        "[[1,1],[0,1]]",
        "[[6,0],[0,1]]",
    ]));
    assert_eq!(v["modulus"], 25);
    assert_eq!(v["g1_order"], 5);
    assert_eq!(v["dim_h"], 2);
    assert_eq!(v["order"], 125);
    assert_eq!(v["det_image"], serde_json::json!([1, 6, 11, 16, 21]));
}

#[test]
fn malformed_literal_is_a_usage_error() {
    let out = locdiv(&["close", "-p", "5", "-n", "1", "[[1,q],[0,1]]"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("`q`"), "{}", stderr(&out));

    let out = locdiv(&["close", "-p", "5", "-n", "1", "[[1,7],[0,1]]"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("`7`"), "{}", stderr(&out));

    let out = locdiv(&["close", "-p", "5", "-n", "1", "[[0,0],[0,0]]"]);
    assert_eq!(out.status.code(), Some(64));

    let out = locdiv(&["close", "-p", "4", "-n", "1", "[[1,1],[0,1]]"]);
    assert_eq!(out.status.code(), Some(64));

    let out = locdiv(&["close", "--bogus"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn h1_of_unipotent_group() {
    let v = json(&locdiv(&["h1", "-p", "5", "-n", "1", "[[1,1],[0,1]]"]));
    assert_eq!(v["invariants"], serde_json::json!([5]));
    assert_eq!(v["z1_order"], 25);
    assert_eq!(v["b1_order"], 5);
}

#[test]
fn h1loc_of_cyclic_group_is_trivial() {
    let v = json(&locdiv(&["h1loc", "-p", "5", "-n", "1", "[[1,1],[0,1]]"]));
    assert_eq!(v["invariants"], serde_json::json!([]));
}

#[test]
fn h1_of_scalar_group_vanishes() {
    let v = json(&locdiv(&["h1", "-p", "5", "-n", "1", "[[2,0],[0,2]]"]));
    assert_eq!(v["invariants"], serde_json::json!([]));
}

#[test]
fn group_files() {
    let path = scratch("borel.group");
    std::fs::write(
        &path,
        "# Borel mod 5\nmod 5^1\n[[2,0],[0,1]]\n[[1,1],[0,1]]\n",
    )
    .unwrap();
    let v = json(&locdiv(&["close", "--file", path.to_str().unwrap()]));
    assert_eq!(v["order"], 20);
    assert_eq!(v["gd_order"], 4);

    let bad = scratch("bad.group");
    std::fs::write(&bad, "mod 25\n[[1,1],[0,1]]\n\n[[1,1],[0,1] mod 25\n").unwrap();
    let out = locdiv(&["h1", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn table_output_and_out_file() {
    let out = locdiv(&[
        "h1",
        "-p",
        "7",
        "-n",
        "1",
        "--output",
        "table",
        "[[1,1],[0,1]]",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[7]"), "{text}");

    let path = scratch("h1.json");
    let out = locdiv(&[
        "h1",
        "-p",
        "5",
        "-n",
        "1",
        "--out",
        path.to_str().unwrap(),
        "[[1,1],[0,1]]",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["invariants"], serde_json::json!([5]));
}

#[test]
fn unknown_check_lists_registry() {
    let out = locdiv(&["verify", "lemma-9.9", "-p", "5"]);
    assert_eq!(out.status.code(), Some(64));
    let err = stderr(&out);
    assert!(err.contains("lemma-9.9"));
    for id in ["lemma-2.3", "cor-2.4", "thm-2.2", "main-thm-search"] {
        assert!(err.contains(id), "{err}");
    }
    assert_eq!(locdiv(&["verify", "-p", "5"]).status.code(), Some(64));
}

#[test]
fn verify_single_check_passes() {
    let out = locdiv(&["verify", "lemma-3.1", "-p", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["reports"][0]["spec"]["id"], "lemma-3.1");
    assert!(v["reports"][0].get("elapsed_secs").is_none());
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let out = locdiv(&["verify", "main-thm-search", "-p", "7", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert_eq!(json(&out)["verdict"], "inconclusive-budget");
}

#[test]
fn verify_all_reports_the_documented_counterexamples() {
    let out = locdiv(&["verify", "--all", "-p", "5", "--seed", "42"]);
    // lifts mod 25 violating the group-level transcriptions of three statements
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let v = json(&out);
    let failing: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] == "fail")
        .map(|r| r["spec"]["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["lemma-2.5", "lemma-2.6", "thm-2.2"]);
}
