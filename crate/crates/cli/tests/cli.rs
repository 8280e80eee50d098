use std::path::PathBuf;
use std::process::{Command, Output};

use polysym_cli::AnalysisReport;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn polysym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polysym")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn analyze_reports_both_groups() {
    for (name, linear, orthogonal) in [("cube", 48, 48), ("rectangle", 8, 4), ("hexagon_stretched", 12, 4)] {
        let out = polysym(&["analyze", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!(v["groups"]["linear"]["order"], linear, "{name}");
        assert_eq!(v["groups"]["orthogonal"]["order"], orthogonal, "{name}");
    }
}

#[test]
fn analyze_batch_keeps_input_order_and_reports_failures() {
    let bad = fixture("invalid/hexagon_translated");
    let out = polysym(&["analyze", &fixture("square"), &bad, &fixture("triangle")]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert_eq!(entries[0]["input"]["name"], "square");
    assert_eq!(entries[1]["exit_code"], 2);
    assert_eq!(entries[2]["input"]["name"], "triangle");
}

#[test]
fn translated_input_needs_recentering() {
    let bad = fixture("invalid/hexagon_translated");
    assert_eq!(polysym(&["analyze", &bad]).status.code(), Some(2));
    let out = polysym(&["analyze", "--recenter", &bad]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["input"]["recentered"], true);
    assert_eq!(v["groups"]["orthogonal"]["order"], 12);
}

#[test]
fn interior_point_is_rejected() {
    let out = polysym(&["analyze", &fixture("invalid/square_with_center")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_passes_on_fixtures() {
    for name in ["cube", "triangle", "prism3"] {
        let out = polysym(&["validate", &fixture(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["pass"], true);
    }
    let v = json(&polysym(&["validate", &fixture("triangle")]));
    assert_eq!(v["properties"]["kernel_dim"], 2);
}

#[test]
fn validate_rejects_a_corrupted_matrix() {
    let v = json(&polysym(&["analyze", &fixture("square")]));
    let mut dump = v["izmestiev"]["matrix"].clone();
    // a positive entry on a non-edge breaks the sparsity pattern
    dump["entries"][0][2] = Value::from(0.25);
    dump["entries"][2][0] = Value::from(0.25);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, serde_json::to_string(&dump).unwrap()).unwrap();
    let out = polysym(&["validate", &fixture("square"), "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn export_dot_colors() {
    let out = polysym(&["export-dot", &fixture("square"), "--coloring", "metric"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph "));
    assert_eq!(dot.matches("class=0];").count(), 4 + 4);

    let out = polysym(&["export-dot", &fixture("rectangle"), "--coloring", "product"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    let edge_classes: std::collections::BTreeSet<&str> = dot
        .lines()
        .filter(|l| l.contains("--"))
        .map(|l| l.rsplit("class=").next().unwrap())
        .collect();
    assert_eq!(edge_classes.len(), 2);

    assert_eq!(polysym(&["export-dot", &fixture("square"), "--coloring", "bogus"]).status.code(), Some(64));
}

#[test]
fn oracle_on_embedding() {
    let out = polysym(&["oracle", &fixture("k44_embedding"), "--embedding", "--candidates", "graph-auts"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["group"]["order"], 128);
}

#[test]
fn oracle_agrees_with_pipeline() {
    let out = polysym(&["oracle", &fixture("hexagon_stretched"), "--flavor", "orthogonal"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["group"]["order"], 4);
}

#[test]
fn limits_and_usage_errors() {
    assert_eq!(polysym(&["analyze", "--limit", "3", &fixture("cube")]).status.code(), Some(4));
    assert_eq!(polysym(&["analyze", "--tolerance", "nonsense=1", &fixture("cube")]).status.code(), Some(64));
    assert_eq!(polysym(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(polysym(&["analyze", "missing.json"]).status.code(), Some(2));
    assert_eq!(polysym(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["analyze", &fixture("cyclic_6_4"), &fixture("prism3")];
    assert_eq!(polysym(&args).stdout, polysym(&args).stdout);
}

#[test]
fn report_round_trips() {
    let out = polysym(&["analyze", &fixture("octahedron")]);
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(serde_json::to_vec_pretty(&report).unwrap(), out.stdout[..out.stdout.len() - 1]);
}

#[test]
fn metric_experiment_on_rectangle() {
    let v = json(&polysym(&["experiment-metric", &fixture("rectangle")]));
    assert_eq!(v["metric_automorphisms"], 4);
    assert_eq!(v["captured"], true);
}
