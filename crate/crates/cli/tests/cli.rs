use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tqc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = tqc(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    v
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tqc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn polytope_birkhoff() {
    let v = json(&["polytope", "catalog:birkhoff(3)"]);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert!(v["smooth"].as_array().unwrap().iter().all(|s| s == false));
}

#[test]
fn polytope_kronecker_segment() {
    let v = json(&["polytope", "catalog:kronecker(1)"]);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
}

#[test]
fn empty_input_exits_with_two() {
    let path = temp_file(
        "empty.json",
        r#"{"vertices":["a","b"],"arrows":[{"id":"x","tail":"a","head":"b"}],"weights":{"a":-1,"b":2}}"#,
    );
    let out = tqc(&["polytope", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty polytope"));
}

#[test]
fn budget_exceeded_exits_with_three() {
    let out = tqc(&["polytope", "catalog:birkhoff(3)", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ideal_commands() {
    let b = json(&["ideal", "catalog:birkhoff(3)"]);
    assert_eq!(b["generation_degree"], 3);
    assert_eq!(b["conclusive"], true);
    let p = json(&["ideal", "catalog:pn(3)", "--max-degree", "4"]);
    assert_eq!(p["generation_degree"], 3);
    assert_eq!(p["witnesses"][0]["degree"], 3);
    let c = json(&["ideal", "catalog:caseI"]);
    assert_eq!(c["generation_degree"], 2);
}

#[test]
fn ideal_rejects_small_max_degree() {
    let out = tqc(&["ideal", "catalog:birkhoff(3)", "--max-degree", "2"]);
    assert!(!out.status.success());
}

#[test]
fn cells_commands() {
    let k = json(&["cells", "catalog:kronecker(2)"]);
    assert_eq!(k["cells"].as_array().unwrap().len(), 2);
    let b = json(&["cells", "catalog:birkhoff(3)"]);
    let cells = b["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0]["num_points"], 6);
    assert_eq!(cells[0]["generation_degree"], 3);
    assert!(tqc(&["cells", "catalog:chain(2)"]).status.success());
}

#[test]
fn classify_commands() {
    let three = json(&["classify", "3"]);
    assert_eq!(three["distinct"].as_array().unwrap().len(), 1);
    let four = json(&["classify", "4"]);
    assert_eq!(four["distinct"].as_array().unwrap().len(), 3);
    let out = tqc(&["classify", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("below the range"));
}

#[test]
fn classify_independent_of_threads() {
    let one = tqc(&["classify", "4", "--format", "json", "--threads", "1"]);
    let four = tqc(&["classify", "4", "--format", "json", "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn compressed_commands() {
    let c = json(&["compressed", "catalog:chain(3)"]);
    assert_eq!(c["compressed"], true);
    assert_eq!(c["grobner"]["verified"], true);
    assert_eq!(c["singular_adjacency"]["singular"].as_array().unwrap().len(), 1);
    let h = json(&["compressed", "catalog:k33hub"]);
    assert!(!h["singular_adjacency"]["adjacent_pairs"].as_array().unwrap().is_empty());
    assert_eq!(h["generation"]["generation_degree"], 3);
    let p = json(&["compressed", "catalog:pn(2)"]);
    assert_eq!(p["compressed"], true);
}

#[test]
fn catalog_output_feeds_back_in() {
    let v = json(&["catalog", "caseI"]);
    let path = temp_file("case.json", &v.to_string());
    let p = json(&["polytope", path.to_str().unwrap()]);
    assert_eq!(p["num_points"], 6);
    let s = json(&["catalog", "pn(2)"]);
    let path = temp_file("pn2.json", &s.to_string());
    let p = json(&["polytope", path.to_str().unwrap()]);
    assert_eq!(p["num_points"], 4);
}

#[test]
fn text_output_is_readable() {
    let out = tqc(&["polytope", "catalog:birkhoff(3)"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dimension 4"));
    assert!(text.contains("6 singular"));
}
