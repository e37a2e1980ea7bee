use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fgcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgcount"))
        .args(args)
        .env_remove("FGCOUNT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn entry_sum(doc: &Value) -> u128 {
    doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[1].as_str().unwrap().parse::<u128>().unwrap())
        .sum()
}

#[test]
fn oracle_count_sums_to_twelve() {
    let out = fgcount(&["count", "--k", "2", "--m", "2", "--engine", "oracle"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema"], "fgcount.slice/1");
    assert_eq!(entry_sum(&doc), 12);
}

#[test]
fn engines_emit_identical_bytes() {
    for (k, m) in [("2", "2"), ("2", "9"), ("3", "5")] {
        let outs: Vec<Vec<u8>> = ["oracle", "dp", "fourier"]
            .iter()
            .map(|e| fgcount(&["count", "--k", k, "--m", m, "--engine", e]).stdout)
            .collect();
        assert_eq!(outs[0], outs[1], "k={k} m={m}");
        assert_eq!(outs[0], outs[2], "k={k} m={m}");
    }
}

#[test]
fn guard_violation_is_structured() {
    let out = fgcount(&["count", "--k", "2", "--m", "99", "--engine", "oracle"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json(&out);
    assert_eq!(doc["error"]["kind"], "guard");
    assert_eq!(doc["error"]["exit_code"], 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn overflow_exits_four() {
    let out = fgcount(&["count", "--k", "2", "--m", "90"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["error"]["kind"], "overflow");
}

#[test]
fn unknown_set_is_rejected_while_parsing() {
    let out = fgcount(&["count", "--m", "3", "--set", "squares"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn set_filters_entries() {
    let out = fgcount(&["count", "--m", "4", "--set", "singleton:0,0"]);
    let doc = json(&out);
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0][0], serde_json::json!([0, 0]));
}

fn cache_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn cache_serves_identical_bytes_and_keeps_stale_entries() {
    let dir = tempfile::tempdir().unwrap();
    let stale = dir.path().join("count-k2-m7-dp-full-v0.json");
    fs::write(&stale, "not json").unwrap();
    let d = dir.path().to_str().unwrap();
    let first = fgcount(&["count", "--m", "7", "--cache-dir", d]);
    let entry = dir.path().join("count-k2-m7-dp-full-v1.json");
    assert!(entry.exists(), "{:?}", cache_files(dir.path()));
    // The stored entry re-serializes to itself.
    assert_eq!(fs::read(&entry).unwrap(), first.stdout);
    let second = fgcount(&["count", "--m", "7", "--cache-dir", d]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read_to_string(&stale).unwrap(), "not json");

    // A hit is served without recomputing: doctor the entry and see it echoed.
    let doctored = String::from_utf8(first.stdout.clone()).unwrap().replacen("\"1\"", "\"5\"", 1);
    fs::write(&entry, &doctored).unwrap();
    let third = fgcount(&["count", "--m", "7", "--cache-dir", d]);
    assert_eq!(String::from_utf8(third.stdout).unwrap(), doctored);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fgcount"))
        .args(["count", "--k", "3", "--m", "3", "--engine", "oracle"])
        .env("FGCOUNT_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(cache_files(dir.path()), ["count-k3-m3-oracle-full-v1.json"]);
}

#[test]
fn cumulative_and_radius_are_separate_cache_entries() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let plain = fgcount(&["count", "--m", "6", "--cache-dir", d]);
    let cumulative = fgcount(&["count", "--m", "6", "--cumulative", "--cache-dir", d]);
    let narrow = fgcount(&["count", "--m", "6", "--radius", "1", "--cache-dir", d]);
    assert_eq!(entry_sum(&json(&plain)), 3u128.pow(6) + 3);
    let total: u128 = (1..=6u32).map(|m| 3u128.pow(m) + 1 + if m % 2 == 0 { 2 } else { 0 }).sum();
    assert_eq!(entry_sum(&json(&cumulative)), total);
    assert!(json(&narrow)["entries"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e[0].as_array().unwrap().iter().all(|x| x.as_i64().unwrap().abs() <= 1)));
    assert_eq!(cache_files(dir.path()).len(), 3);
}

#[test]
fn classes_at_length_two() {
    for method in ["orbit", "burnside"] {
        let doc = json(&fgcount(&["classes", "--k", "2", "--m", "2", "--method", method]));
        assert_eq!(doc["total"], "8");
        assert_eq!(doc["cumulative"], "12");
    }
    let doc = json(&fgcount(&["classes", "--k", "2", "--m", "2", "--method", "approx"]));
    assert_eq!(doc["exact"], false);
    assert_eq!(doc["total"], 6.0);
}

#[test]
fn predict_reports_parity_and_missing_counts() {
    let doc = json(&fgcount(&["predict", "--k", "2", "--m", "20", "--beta", "1,0"]));
    assert_eq!(doc["prediction"], 0.0);
    assert_eq!(doc["exact"], "0");
    assert_eq!(doc["exact_match"], true);

    let doc = json(&fgcount(&["predict", "--k", "2", "--m", "20", "--beta", "0,0"]));
    assert_eq!(doc["exact_available"], true);
    assert!(doc["relative_error"].as_f64().unwrap() < 0.2);

    let out = fgcount(&["predict", "--k", "2", "--m", "200", "--beta", "0,0"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["exact_available"], false);
    assert!(doc["exact"].is_null());
    assert!(doc["prediction"].as_f64().unwrap() > 0.0);
}

#[test]
fn progression_experiment_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = fgcount(&[
        "experiment",
        "progression",
        "--l",
        "2,2",
        "--a",
        "0,0",
        "--m-max",
        "24",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "fgcount.report/1");
    assert_eq!(report, json(&out));
    let targets: Vec<f64> = report["targets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["value"].as_f64().unwrap())
        .collect();
    for want in [0.375, 0.125, 0.25] {
        assert!(targets.iter().any(|t| (t - want).abs() < 1e-12), "{targets:?}");
    }
    let csv = fs::read_to_string(out_dir.join("series.csv")).unwrap();
    assert!(csv.starts_with("series,m,value\n"));
    for name in ["even_m_ratio", "odd_m_ratio", "averaged_ratio"] {
        assert!(csv.contains(&format!("\n{name},")), "{name}");
    }
}

#[test]
fn coprime_experiment_target() {
    let out = fgcount(&["experiment", "coprime", "--k", "2", "--m-max", "24"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let t = doc["targets"][0]["value"].as_f64().unwrap();
    assert!((t - 0.6079).abs() < 1e-4);
}

#[test]
fn refused_regression_exits_three() {
    let out = fgcount(&["experiment", "regression", "--reduced", "--guard", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json(&out);
    assert!(doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v["outcome"] == "refused"));
}

#[test]
fn identity_check_passes() {
    let out = fgcount(&["identity-check", "--k", "2", "--m", "6", "--characters", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    let out = fgcount(&["identity-check", "--k", "2", "--eps", "0.25,-0.1"]);
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn density_modes() {
    let doc = json(&fgcount(&["density", "--t", "10000", "--set", "full"]));
    assert!((doc["sum"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    let out = fgcount(&["density", "--set", "coprime"]);
    assert_eq!(out.status.code(), Some(6));
    let doc = json(&fgcount(&["surface-predictor", "--genus", "2", "--t", "400", "--set", "full"]));
    assert!((doc["sum"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-3);
}
