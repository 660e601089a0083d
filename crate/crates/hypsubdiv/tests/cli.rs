//! End-to-end tests of the binary: exit codes, JSON shapes, error
//! envelopes, and file outputs, driven through std::process.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypsubdiv"))
}

fn run(args: &[&str]) -> (Output, serde_json::Value) {
    let out = bin().args(args).output().expect("spawn binary");
    let stdout = String::from_utf8(out.stdout.clone()).expect("utf8 stdout");
    let value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("non-JSON stdout for {args:?}: {e}\n{stdout}"));
    (out, value)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn group_info_reports_presentation_and_fingerprint() {
    let (out, v) = run(&["group", "--preset", "f2", "--info"]);
    assert_eq!(code(&out), 0);
    assert_eq!(v["backend"], "free");
    assert_eq!(v["ball_radius"], 14);
    assert_eq!(v["generators"], "ab");
    let fp = v["fingerprint"].as_str().expect("fingerprint");
    assert_eq!(fp.len(), 64);
    assert!(fp.chars().all(|c| c.is_ascii_hexdigit()));
    // the fingerprint is stable across invocations
    let (_, again) = run(&["group", "--preset", "f2"]);
    assert_eq!(again["fingerprint"], v["fingerprint"]);
}

#[test]
fn geodesic_walks_through_the_identity() {
    let (out, v) = run(&["geodesic", "--preset", "f2", "--from", "b", "--to", "a"]);
    assert_eq!(code(&out), 0);
    assert_eq!(v["distance"], 2);
    assert_eq!(v["vertices"], serde_json::json!(["b", "", "a"]));
}

#[test]
fn hull_accepts_identity_tokens() {
    let (out, v) = run(&["hull", "--preset", "f2", "--tuple", "e,ab,aB"]);
    assert_eq!(code(&out), 0);
    assert_eq!(v["tuple"][0], "");
    assert_eq!(v["hull_size"], 4);
    // "1" and the empty token are identity spellings too
    let (_, w) = run(&["hull", "--preset", "f2", "--tuple", "1,ab,aB"]);
    assert_eq!(w["hull"], v["hull"]);
}

#[test]
fn tree_writes_the_same_bytes_to_out_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("tree.json");
    let out = bin()
        .args(["tree", "--preset", "f2", "--tuple", "e,abab,aBBB", "--out"])
        .arg(&path)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    let written = std::fs::read(&path).expect("out file");
    assert_eq!(written, out.stdout);
    let v: serde_json::Value = serde_json::from_slice(&written).expect("tree JSON");
    assert!(v.get("edges").is_some());
}

#[test]
fn subdivide_emits_chain_and_params() {
    let (out, v) = run(&["subdivide", "--preset", "f2", "--simplex", "e,ab,aB", "--dim", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["output_l1"], "4");
    assert!(v["chain"]["terms"].as_array().expect("terms").len() == 4);
    assert_eq!(v["params"]["radii"][2], "13");
}

#[test]
fn subdivide_rejects_wrong_dimension_with_envelope() {
    let (out, v) = run(&["subdivide", "--preset", "f2", "--simplex", "e,ab", "--dim", "2"]);
    assert_eq!(code(&out), 2);
    assert_eq!(v["error"]["kind"], "wrong_dimension");
}

#[test]
fn out_of_ball_word_is_an_input_error() {
    let long_word = "ab".repeat(20);
    let (out, v) = run(&["geodesic", "--preset", "f2", "--from", "e", "--to", &long_word]);
    assert_eq!(code(&out), 2);
    assert_eq!(v["error"]["kind"], "out_of_ball");
}

#[test]
fn unknown_preset_is_an_input_error() {
    let (out, v) = run(&["group", "--preset", "nope"]);
    assert_eq!(code(&out), 2);
    assert_eq!(v["error"]["kind"], "invalid_input");
    assert!(v["error"]["message"].as_str().expect("message").contains("nope"));
}

#[test]
fn malformed_group_file_reports_field_path() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"generators": ["a"], "relators": 5}"#).expect("write");
    let out = bin().arg("group").arg("--group").arg(&path).output().expect("spawn");
    assert_eq!(code(&out), 2);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("envelope");
    let kind = v["error"]["kind"].as_str().expect("kind");
    assert!(kind == "json" || kind == "presentation_invalid", "kind = {kind}");
    assert!(v["error"]["message"].as_str().expect("message").contains("relators"));
}

#[test]
fn certify_passes_and_honors_baseline() {
    let dir = tempfile::tempdir().expect("tempdir");
    let corpus = dir.path().join("corpus.json");
    std::fs::write(&corpus, r#"[["", "ab", "aB"], ["", "a"], ["b", "ba", "bab", "babb"]]"#)
        .expect("corpus");
    let report = dir.path().join("report.json");

    let out = bin()
        .args(["certify", "--preset", "f2", "--corpus"])
        .arg(&corpus)
        .arg("--report")
        .arg(&report)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("report");
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["summary"]["total"], 3);
    assert!(v["manifest"]["corpus"]
        .as_str()
        .expect("corpus description")
        .starts_with("file:corpus.json sha256:"));
    // every certificate carries its witness data
    assert!(v["certificates"][0]["chain_map_residual_norm"].is_string());

    // identical rerun against the written report: byte equality, exit 0
    let again = bin()
        .args(["certify", "--preset", "f2", "--corpus"])
        .arg(&corpus)
        .arg("--baseline")
        .arg(&report)
        .output()
        .expect("spawn");
    assert_eq!(code(&again), 0);
    assert_eq!(again.stdout, out.stdout);

    // corrupted baseline: certification failure, exit 1
    let mut bytes = std::fs::read(&report).expect("report bytes");
    bytes.push(b'x');
    std::fs::write(&report, bytes).expect("corrupt");
    let bad = bin()
        .args(["certify", "--preset", "f2", "--corpus"])
        .arg(&corpus)
        .arg("--baseline")
        .arg(&report)
        .output()
        .expect("spawn");
    assert_eq!(code(&bad), 1);
}

#[test]
fn certify_generated_corpus_on_z() {
    let (out, v) = run(&[
        "certify", "--preset", "z", "--dims", "1,2", "--count", "6", "--seed", "11",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["manifest"]["seed"], 11);
}

#[test]
fn homology_of_z_ball_is_a_point() {
    let (out, v) = run(&["homology", "--preset", "z", "--radius", "1", "--max-dim", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(v["vertices"], 3);
    assert_eq!(v["homology"][0]["betti"], 1);
    assert_eq!(v["homology"][1]["betti"], 0);
    assert_eq!(v["homology"][2]["betti"], 0);
}

#[test]
fn homology_of_metric_space_detects_the_circle() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("cycle.json");
    std::fs::write(
        &path,
        r#"{"matrix": [["0","1","2","1"],["1","0","1","2"],["2","1","0","1"],["1","2","1","0"]]}"#,
    )
    .expect("metric file");
    let out = bin()
        .args(["homology", "--metric-space"])
        .arg(&path)
        .args(["--rips-radius", "1", "--max-dim", "2", "--augmented"])
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("report");
    assert_eq!(v["homology"][0]["betti"], 0);
    assert_eq!(v["homology"][1]["betti"], 1);
    assert_eq!(v["homology"][2]["betti"], 0);
}

#[test]
fn metric_space_validation_rejects_asymmetry() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"matrix": [["0","1"],["2","0"]]}"#).expect("metric file");
    let out = bin()
        .args(["homology", "--metric-space"])
        .arg(&path)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 2);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("envelope");
    assert_eq!(v["error"]["kind"], "metric_invalid");
}

#[test]
fn bench_norm_degree_one_ratios_stay_below_one() {
    let (out, v) = run(&[
        "bench-norm", "--preset", "f2", "--dim", "1", "--max-diameter", "8", "--count", "3",
        "--seed", "2",
    ]);
    assert_eq!(code(&out), 0);
    let rows = v["rows"].as_array().expect("rows");
    assert_eq!(rows.len(), 8);
    for row in rows {
        let d = row["diameter"].as_u64().expect("diameter");
        assert_eq!(row["max_l1"], d.to_string());
        let ratio = row["max_ratio"].as_str().expect("ratio");
        assert_eq!(ratio, format!("{d}/{}", d + 1));
    }
}

#[test]
fn report_files_match_stdout_bytes() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path: &Path = &dir.path().join("bench.json");
    let out = bin()
        .args(["bench-norm", "--preset", "z", "--dim", "1", "--max-diameter", "3", "--count", "2", "--report"])
        .arg(path)
        .output()
        .expect("spawn");
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(path).expect("report file"), out.stdout);
}
