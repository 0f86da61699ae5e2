use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freewreath")).args(args).output().expect("spawn freewreath")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

const RECT: &str = r#"{
  "n": 4,
  "oriented": false,
  "classes": [
    {"name": "short", "pairs": [[1, 2], [3, 4]]},
    {"name": "long", "pairs": [[2, 3], [4, 1]]},
    {"name": "diagonal", "pairs": [[1, 3], [2, 4]]}
  ]
}"#;

#[test]
fn graph_aut_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rect.json");
    std::fs::write(&path, RECT).unwrap();
    let v = json_ok(&["graph", "aut", "--in", path.to_str().unwrap()]);
    assert_eq!(v["order"], 4);
    assert_eq!(v["transitive"], true);
}

#[test]
fn boxtimes_of_two_semicircle_laws() {
    let v = json_ok(&["measure", "boxtimes", "--a", "eta:4", "--b", "eta:4", "--order", "5"]);
    assert_eq!(&strings(&v["moments"])[..5], ["1", "1", "3", "12", "55"]);
}

#[test]
fn verify_all_passes() {
    let v = json_ok(&["verify", "all", "--order", "10"]);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 15);
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn verify_single_with_params() {
    let v = json_ok(&["verify", "thm42_nsv", "--param", "mu=eta:2", "--param", "n=2"]);
    assert_eq!(v["pass"], true);
    let v = json_ok(&["verify", "thm51", "--param", "s=3"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn unknown_identity_exits_2_with_json_diagnostic() {
    let out = run(&["verify", "no_such_identity"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "UnknownIdentity");
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(run(&["measure", "moments", "--a", "eta:0"]).status.code(), Some(2));
    assert_eq!(run(&["graph", "aut", "ngon:2"]).status.code(), Some(2));
    assert_eq!(run(&["graph", "witness", "edgeless:3"]).status.code(), Some(2));
    assert_eq!(run(&["density", "check", "--g", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "boxplus", "--a", "eta:2"]).status.code(), Some(2));
    // clap usage error
    assert_eq!(run(&["graph", "bogus"]).status.code(), Some(2));
}

#[test]
fn failed_density_check_exits_1() {
    let out = run(&["density", "check", "--g", "cube", "--k", "2", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["density", "check", "--g", "cube", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["graph", "measure", "two_rectangles", "--order", "6"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["density", "sample", "--g", "g3", "--samples", "50", "--format", "csv"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn density_csv_has_header_and_grid() {
    let out = run(&["density", "sample", "--g", "g4plus", "--samples", "11", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,density");
    assert_eq!(lines.len(), 12);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = run(&["measure", "moments", "--a", "eta:2", "--order", "4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(strings(&v["moments"]), ["1", "1", "2", "4", "8"]);
}

#[test]
fn classical_convolution_of_inline_atoms() {
    let v = json_ok(&["measure", "conv", "--a", r#"[["0","1/2"],["1","1/2"]]"#, "--b", r#"[["0","1/2"],["1","1/2"]]"#]);
    assert_eq!(v["atoms"], serde_json::json!([["0", "1/4"], ["1", "1/2"], ["2", "1/4"]]));
}

#[test]
fn free_power_matches_binary_convolution() {
    let p = json_ok(&["measure", "boxplus", "--a", "eta:2", "--power", "2", "--order", "6"]);
    let b = json_ok(&["measure", "boxplus", "--a", "eta:2", "--b", "eta:2", "--order", "6"]);
    assert_eq!(p["moments"], b["moments"]);
}

#[test]
fn series_s_of_group_measure() {
    let v = json_ok(&["series", "s", "--a", "uniform_group:4", "--order", "3"]);
    assert_eq!(strings(&v["transform"]["coeffs"]), ["1", "-3", "12", "-48"]);
}

#[test]
fn graph_measure_reports_unsupported_monochrome_square() {
    let v = json_ok(&["graph", "measure", "ngon:4"]);
    assert_eq!(v["quantum"]["status"], "unsupported");
    let v = json_ok(&["graph", "measure", "cube", "--order", "4"]);
    assert_eq!(v["quantum"]["status"], "proven");
    assert_eq!(strings(&v["quantum"]["moments"]), ["1", "1", "4", "20", "112"]);
}

#[test]
fn free_product_roundtrips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fp.json");
    let out = run(&["graph", "free-product", "simplex:3", "--with", "simplex:2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_ok(&["graph", "aut", path.to_str().unwrap()]);
    assert_eq!(v["order"], 72);
    let v = json_ok(&["graph", "measure", path.to_str().unwrap(), "--order", "3"]);
    assert_eq!(v["quantum"]["status"], "proven");
}
