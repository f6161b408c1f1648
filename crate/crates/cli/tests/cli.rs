use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperavoid")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let idx = reader.headers().unwrap().iter().position(|h| h == name).unwrap();
    reader.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

#[test]
fn count_golden() {
    assert_eq!(stdout(&["count", "--sigma", "2,4,1,3", "--pi", "1,2"]), "{\"count\":3}\n");
}

#[test]
fn expectation_golden() {
    let v = json(&["expect", "--n", "2", "--k", "2", "--pi", "1,2", "--alpha", "1/2"]);
    assert_eq!(v["exact_value"], "3/2");
    assert_eq!(v["exact_value_decimal"], "1.500000000000");
    assert_eq!(v["alpha_decimal"], "0.500000000000");
}

#[test]
fn lambda_star_golden() {
    let v = json(&["lambda-star", "--n", "4", "--k", "2"]);
    assert_eq!(v["edge_count"], 4);
    assert_eq!(v["expected_edge_count"], 4);
    assert_eq!(v["edges"], serde_json::json!([[1, 3], [1, 4], [2, 3], [2, 4]]));
}

#[test]
fn occurrences_are_one_based() {
    let v = json(&["occurrences", "--sigma", "2,4,1,3", "--pi", "2,1"]);
    assert_eq!(v["occurrences"], serde_json::json!([[1, 3], [2, 3], [2, 4]]));
}

#[test]
fn alpha_sweep_column_is_non_increasing() {
    let text = stdout(&["expect", "--n", "6", "--k", "2", "--pi", "2,1", "--alpha", "1/10,1/5,1/2,4/5,9/10", "--format", "csv"]);
    let values: Vec<f64> = csv_column(&text, "exact_value_decimal").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[0] >= w[1]), "{values:?}");
}

#[test]
fn ones_sweep_column_is_non_decreasing() {
    let text = stdout(&["min-copies", "--n", "4", "--a", "0..=16", "--pi", "1,2", "--format", "csv"]);
    let values: Vec<u64> = csv_column(&text, "measured").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(values.len(), 17);
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn empty_grid_is_header_only_csv() {
    let text = stdout(&["snm", "--n", "5", "--m", "", "--pi", "2,1", "--format", "csv"]);
    assert_eq!(text, "n,m,pattern,count\n");
    assert_eq!(stdout(&["snm", "--n", "5", "--m", "", "--pi", "2,1"]), "[]\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let bad = run(&["count", "--sigma", "2,4,4,1", "--pi", "1,2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position"));
    assert_eq!(run(&["expect", "--n", "2", "--k", "2", "--pi", "1,2", "--alpha", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["distribution", "--n", "9", "--pi", "1,2", "--enum-cap", "8"]).status.code(), Some(3));
    let env_cap = Command::new(env!("CARGO_BIN_EXE_hyperavoid"))
        .args(["distribution", "--n", "9", "--pi", "1,2"])
        .env("HYPERAVOID_ENUM_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(env_cap.status.code(), Some(3));
    assert_eq!(run(&["build-h", "--n", "6", "--pi", "1,2", "--edge-ceiling", "10"]).status.code(), Some(3));
}

#[test]
fn matrix_inputs_agree() {
    let text_file = scratch("m.txt", "4 4\n0100\n0001\n1000\n0010\n");
    let json_file = scratch("m.json", r#"{"rows":4,"cols":4,"data":["0100","0001","1000","0010"]}"#);
    let args = |src: &[&str]| {
        let mut a = vec!["contract", "--pi", "1,2"];
        a.extend_from_slice(src);
        json(&a)
    };
    let inline = args(&["--matrix", "0100/0001/1000/0010"]);
    assert_eq!(inline, args(&["--perm-matrix", "2,4,1,3"]));
    assert_eq!(inline, args(&["--from-file", text_file.to_str().unwrap()]));
    assert_eq!(inline, args(&["--from-file", json_file.to_str().unwrap()]));
    assert_eq!(inline["copies_before"], 3);
    assert_eq!(inline["output"]["data"], serde_json::json!(["11", "11"]));
    let broken = scratch("bad.txt", "2 2\n10\n1x\n");
    let out = run(&["preimage", "--from-file", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('3'), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn hypergraph_file_matches_named_lambda() {
    let star = json(&["lambda-star", "--n", "4", "--k", "2"]);
    let edges: String = star["edges"].as_array().unwrap().iter().map(|e| format!("{} {}\n", e[0], e[1])).collect();
    let file = scratch("star.txt", &edges);
    let from_file = json(&["avoiders", "--n", "4", "--pi", "1,2", "--lambda-file", file.to_str().unwrap()]);
    let named = json(&["avoiders", "--n", "4", "--pi", "1,2", "--lambda", "star"]);
    assert_eq!(from_file, named);
    let wrong = run(&["avoiders", "--n", "4", "--pi", "1,2,3", "--lambda-file", file.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn clique_cover_reports_witness() {
    let v = json(&["clique-cover", "--n", "4", "--k", "2", "--lambda", "star", "--cliques", "1,2,3"]);
    assert_eq!(v["valid"], false);
    assert_eq!(v["witness"], serde_json::json!([1, 2]));
    let v = json(&["clique-cover", "--n", "5", "--k", "2", "--cliques", "1,2,3,4,5"]);
    assert_eq!((v["valid"].clone(), v["L"].clone(), v["delta"].clone(), v["Delta"].clone()), (true.into(), 5.into(), 1.into(), 1.into()));
}

#[test]
fn seeded_runs_repeat() {
    let args = ["hypergraph", "--n", "8", "--k", "3", "--alpha", "1/3", "--seed", "12"];
    assert_eq!(stdout(&args), stdout(&args));
    let other = ["hypergraph", "--n", "8", "--k", "3", "--alpha", "1/3", "--seed", "13"];
    assert_ne!(stdout(&args), stdout(&other));
}

#[test]
fn independents_at_full_size_include_the_avoiders() {
    // Size-n independent sets include every independent canonical set.
    let avoiders = json(&["avoiders", "--n", "3", "--pi", "2,1", "--lambda", "random", "--lambda-seed", "2"]);
    let ind = json(&["independents", "--n", "3", "--pi", "2,1", "--lambda", "random", "--lambda-seed", "2", "--size", "3"]);
    let total: u64 = ind["count"].as_str().unwrap().parse().unwrap();
    assert!(total >= avoiders["count"].as_u64().unwrap());
}
