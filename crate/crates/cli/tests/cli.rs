use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homophily"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn compute_reports_both_weightings_on_the_assortative_example() {
    let path = data("assortative_edges.csv");
    let out = run(&[
        "compute",
        "--edges",
        path.to_str().unwrap(),
        "--out",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let m = &doc["metrics"];
    assert!((m["alpha"].as_f64().unwrap() - 0.778).abs() < 1e-3);
    assert!((m["r_unit"].as_f64().unwrap() - 0.714).abs() < 1e-3);
    assert!((m["r_inverse_degree"].as_f64().unwrap() - 0.778).abs() < 1e-3);
    assert_eq!(doc["dataset"]["kind"], "edge_list");
    assert_eq!(doc["dataset"]["nodes"], 6);
    assert!(doc["clique_counts"].is_null());
}

#[test]
fn one_label_dataset_is_reported_undefined() {
    let path = data("one_label.csv");
    let out = run(&["compute", path.to_str().unwrap(), "--out", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(!text.contains("NaN") && !text.contains("nan"));
    let doc = json(&out);
    assert_eq!(doc["metrics"]["alpha"], "undefined");
    assert_eq!(doc["metrics"]["r_unit"], "undefined");
    assert_eq!(doc["metrics"]["r_inverse_degree"], "undefined");

    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("undefined"));
}

#[test]
fn missing_file_exits_one() {
    let out = run(&["compute", "/no/such/file.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn malformed_rows_exit_one_and_bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "paper_id,labels\np1,\n").unwrap();
    let out = run(&["compute", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let dup = dir.path().join("dup.csv");
    std::fs::write(&dup, "paper_id,labels\np1,FM\np1,MM\n").unwrap();
    assert_eq!(
        run(&["compute", dup.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let ok = data("mixed_sizes.csv");
    let out = run(&["compute", ok.to_str().unwrap(), "--c-values", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["compute", ok.to_str().unwrap(), "--mapping", "F=?"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "compute",
        ok.to_str().unwrap(),
        "--on-unknown-label",
        "reject-dataset",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn diagnostics_account_for_every_record() {
    let path = data("mixed_sizes.csv");
    let out = run(&["compute", path.to_str().unwrap(), "--out", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let d = &json(&out)["dataset"];
    assert_eq!(d["total_records"], 8);
    assert_eq!(d["dropped_single_author"], 1);
    assert_eq!(d["dropped_unknown_label"], 1);
    assert_eq!(d["surviving_records"], 6);
    assert_eq!(d["papers_by_size"]["7"], 1);
}

#[test]
fn check_certifies_clique_data_and_reports_unit_weight_agreement() {
    let path = data("three_authors.jsonl");
    let out = run(&[
        "check",
        path.to_str().unwrap(),
        "--format",
        "jsonl",
        "--out",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let eq = json(&out);
    assert_eq!(eq["corollary_applies"], true);
    assert!(eq["unit_gap"].as_f64().unwrap() < 1e-10);
    assert!(eq["max_gap"].as_f64().unwrap() < 1e-10);
    assert_eq!(eq["checks"].as_array().unwrap().len(), 3);

    let mixed = data("mixed_sizes.csv");
    let out = run(&[
        "check",
        mixed.to_str().unwrap(),
        "--out",
        "json",
        "--c-values",
        "2,7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let eq = json(&out);
    assert_eq!(eq["corollary_applies"], false);
    assert!(eq["unit_gap"].is_null());
}

#[test]
fn check_fails_certification_on_an_unbalanced_general_graph() {
    let path = data("path_edges.csv");
    let out = run(&["check", "--edges", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn synth_writes_deterministic_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "synth",
            "--papers",
            "100",
            "--size",
            "3",
            "--pfrac",
            "0.4",
            "--seed",
            "1",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 101);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(1).unwrap().len() == 3));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let out = run(&["synth", "--papers", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "paper_id,labels\n");

    let out = run(&["synth", "--papers", "5", "--size", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_output_feeds_compute() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.jsonl");
    let out = run(&[
        "synth",
        "--papers",
        "80",
        "--size-dist",
        "2-6",
        "--seed",
        "5",
        "--format",
        "jsonl",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check", path.to_str().unwrap(), "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn text_and_json_agree_to_four_decimals() {
    let path = data("mixed_sizes.csv");
    let doc = json(&run(&["compute", path.to_str().unwrap(), "--out", "json"]));
    let text = String::from_utf8(run(&["compute", path.to_str().unwrap()]).stdout).unwrap();
    for key in ["alpha", "p_risk", "q_risk", "r_unit", "r_inverse_degree"] {
        let v = doc["metrics"][key].as_f64().unwrap();
        assert!(
            text.contains(&format!("{v:.4}")),
            "{key} = {v:.4} missing from text"
        );
    }
}

#[test]
fn mapping_flips_orientation_but_not_alpha() {
    let path = data("mixed_sizes.csv");
    let a = json(&run(&["compute", path.to_str().unwrap(), "--out", "json"]));
    let b = json(&run(&[
        "compute",
        path.to_str().unwrap(),
        "--out",
        "json",
        "--mapping",
        "M=+,F=-",
    ]));
    assert_eq!(b["label_orientation"]["positive"][0], "M");
    let alpha = |d: &Value| d["metrics"]["alpha"].as_f64().unwrap();
    assert!((alpha(&a) - alpha(&b)).abs() < 1e-12);
    let p = |d: &Value| d["metrics"]["p_risk"].as_f64().unwrap();
    let q = |d: &Value| d["metrics"]["q_risk"].as_f64().unwrap();
    assert!((p(&b) - (1.0 - q(&a))).abs() < 1e-12);
}
