use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hdefect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdefect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn formula_and_defect_agree() {
    for n in 1..=24u64 {
        for g in hadamard_defect::group::abelian_groups_of_order(n) {
            let g = g.to_string();
            let formula = hdefect(&["formula", "--group", &g]);
            assert!(formula.status.success(), "{g}");
            let defect = hdefect(&["defect", &format!("fourier:{g}")]);
            assert!(defect.status.success(), "{g}");
            assert_eq!(json(&formula)["defect"], json(&defect)["defect"], "{g}");
        }
    }
}

#[test]
fn known_values() {
    let out = hdefect(&["formula", "--group", "2x2"]);
    assert_eq!(json(&out)["defect"], 10);
    let out = hdefect(&["defect", "fourier:6"]);
    let v = json(&out);
    assert_eq!(v["defect"], 15);
    assert_eq!(v["certification"]["certified"], true);
    let out = hdefect(&["verify", "tao"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for spec in [
        "tao",
        "deformed:(fourier:2,[[0,0],[0,1/8]],fourier:2)",
        "circulant:0,1/4",
        "haagerup:1/5",
    ] {
        let path = dir.path().join("m.json");
        let path_str = path.to_str().unwrap();
        let gen = hdefect(&["gen", spec, "--seed", "3", "--out", path_str]);
        assert!(gen.status.success(), "{spec}");
        let original = json(&hdefect(&["defect", spec]))["defect"].clone();
        let from_file = hdefect(&["defect", &format!("file:{path_str}")]);
        assert_eq!(json(&from_file)["defect"], original, "{spec}");
        // bare paths are accepted too
        assert_eq!(json(&hdefect(&["defect", path_str]))["defect"], original);
    }
}

#[test]
fn dephased_and_basis() {
    let dir = tempfile::tempdir().unwrap();
    let basis = dir.path().join("basis.json");
    let out = hdefect(&[
        "defect",
        "fourier:2x2",
        "--dephased",
        "--basis",
        basis.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["dephased_defect"], 3);
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&basis).unwrap()).unwrap();
    assert_eq!(b["basis"].as_array().unwrap().len(), 10);
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = hdefect(&[
        "scan",
        "--h",
        "fourier:2",
        "--k",
        "fourier:2",
        "--grid",
        "8",
        "--jobs",
        "3",
        "--special",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "cell-id,L,defect,dephased-defect,gap-ratio,certified"
    );
    assert_eq!(lines.len(), 1 + 8 + 1);
    let defects: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(defects, ["10", "8", "8", "8", "10", "8", "8", "8", "8"]);
    assert!(lines[9].starts_with("8,0 0;0 1/4,"));
}

#[test]
fn conjecture_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = hdefect(&[
        "conjecture",
        "fourier:5",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "SUPPORTED");
    assert_eq!(v["rational_nullity"], 9);
    assert_eq!(v["q"], 5);
    assert_eq!(v["phi"], 4);
    assert!(Path::new(&report).is_file());
}

#[test]
fn ds_estimates() {
    let v = json(&hdefect(&["ds", "--group", "2x3x4", "--exact", "--k", "2"]));
    assert_eq!(v["exact_flag"], true);
    assert_eq!(v["estimate"], v["reference"]);
    let v = json(&hdefect(&["ds", "--group", "2", "--l", "1"]));
    assert_eq!(v["estimate"], "2");
    assert_eq!(v["exact_flag"], false);
}

#[test]
fn exit_statuses() {
    assert_eq!(hdefect(&[]).status.code(), Some(2));
    assert_eq!(hdefect(&["defect", "fourier:2y"]).status.code(), Some(2));
    let out = hdefect(&["defect", "circulant:0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        hdefect(&["defect", "file:/nonexistent/h.json"])
            .status
            .code(),
        Some(1)
    );
}
