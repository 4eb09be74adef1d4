use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn maxclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_writes_a_spec_that_b0_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("g.json");
    let out = maxclass(&["construct", "--p", "5", "--m", "5", "--n", "7", "--out", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("5^7"), "{summary}");
    assert_eq!(read_json(&spec)["schema"], "maxclass.group-spec/1");

    let report = dir.path().join("r.json");
    let out = maxclass(&["b0", "--alpha-file", spec.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_json(&report);
    assert_eq!(r["schema"], "maxclass.report/1");
    assert_eq!(r["records"][0]["invariants"], serde_json::json!([5]));
}

#[test]
fn all_methods_agree_and_skip_the_oracle_above_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = maxclass(&["b0", "--p", "7", "--m", "4", "--n", "5", "--method", "all", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_json(&report);
    let records = r["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    for rec in records {
        assert_eq!(rec["invariants"], serde_json::json!([7]));
        assert!(rec["agree_flags"].as_object().unwrap().values().all(|v| v == true));
    }
    assert_eq!(r["skipped"][0]["method"], "oracle");
}

#[test]
fn bad_input_exits_with_two() {
    // p = 3 needs an explicit map
    assert_eq!(maxclass(&["construct", "--p", "3", "--m", "4", "--n", "5"]).status.code(), Some(2));
    // n above 2m - 2
    assert_eq!(maxclass(&["construct", "--p", "5", "--m", "4", "--n", "7"]).status.code(), Some(2));
    assert_eq!(maxclass(&["construct", "--p", "6", "--m", "4", "--n", "5"]).status.code(), Some(2));
    assert_eq!(maxclass(&["table", "--p", "5", "--m-range", "8..4"]).status.code(), Some(2));
}

#[test]
fn table_csv_and_json_carry_the_same_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t.csv");
    let json_path = dir.path().join("t.json");
    let a = maxclass(&["table", "--p", "5", "--m-range", "4..6", "--out", csv_path.to_str().unwrap()]);
    let b = maxclass(&["table", "--p", "5", "--m-range", "4..6", "--format", "json", "--out", json_path.to_str().unwrap()]);
    assert_eq!((a.status.code(), b.status.code()), (Some(0), Some(0)));

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let csv_rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let json = read_json(&json_path);
    let json_rows = json.as_array().or_else(|| json["rows"].as_array()).unwrap();
    assert_eq!(csv_rows.len(), json_rows.len());
    assert_eq!(csv_rows.len(), 2 + 3 + 4);
    for (c, j) in csv_rows.iter().zip(json_rows) {
        assert_eq!(c[2].parse::<u64>().unwrap(), j["n"].as_u64().unwrap());
        assert_eq!(&c[7], j["agree"].to_string());
    }
}

#[test]
fn alpha_solve_output_feeds_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sols = dir.path().join("s.json");
    let maps = dir.path().join("maps");
    let out = maxclass(&[
        "alpha-solve", "--p", "3", "--m", "4", "--n", "5",
        "--out", sols.to_str().unwrap(), "--out-dir", maps.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = read_json(&sols);
    assert_eq!(s["schema"], "maxclass.alpha-solutions/1");
    assert_eq!(s["count"], "3");

    assert_eq!(s["basis"][0]["surjective"], true);
    let spec = maps.join("basis-0.json");
    let spec = spec.to_str().unwrap();
    let out = maxclass(&["present", "--alpha-file", spec, "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let report = dir.path().join("r.json");
    let out = maxclass(&["b0", "--alpha-file", spec, "--method", "all", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_json(&report);
    assert_eq!(r["records"][0]["invariants"], serde_json::json!([3]));
    assert_eq!(r["records"][0]["method"], "coinvariants");
}

#[test]
fn wrong_carry_is_caught_by_verify() {
    let out = maxclass(&["verify", "--fixtures", "--inject-wrong-carry"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn verify_single_group_passes() {
    let out = maxclass(&["--seed", "7", "verify", "--p", "5", "--m", "5", "--n", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
