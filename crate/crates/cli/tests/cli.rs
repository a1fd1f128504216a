use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use symtest::Dataset;
use symtest_cli::csv_io::{ingest_csv, read_dataset, write_dataset};

fn symtest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SAMPLE: &str = "x,y\n0.1,2\n1.5,-0.3\n0.7,0.7\n2.2,1.0\n-1,0.5\n0.3,0.3\n";

#[test]
fn identical_files_run_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", SAMPLE);
    let out = symtest(&["test", &a, &a, "--seed", "1", "--permutations", "99"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["seed"], 1);
    assert_eq!(doc["permutations"], 99);
    assert_eq!(doc["kernel"]["kind"], "euclidean-norm");
    assert_eq!(doc["draws"]["m"], 3);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 5);
    for r in reports {
        let p = r["p_value"].as_f64().unwrap();
        assert!((0.01..=1.0).contains(&p));
        assert_eq!(r["reject"].as_bool().unwrap(), p <= 0.05);
    }
    let energy = &reports[4];
    assert_eq!(energy["test_name"], "energy");
    assert_eq!(energy["statistic"].as_f64().unwrap(), 0.0);
    assert_eq!(energy["p_value"].as_f64().unwrap(), 1.0);
}

#[test]
fn mismatched_dimensions_fail() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", SAMPLE);
    let b = write(dir.path(), "b.csv", "1,2,3\n4,5,6\n");
    let out = symtest(&["test", &a, &b]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("dimension mismatch"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn ingestion_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", SAMPLE);
    let ragged = write(dir.path(), "r.csv", "1,2\n3\n");
    let bad = write(dir.path(), "b.csv", "1,abc\n");
    let out = symtest(&["test", &a, &ragged]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ragged rows"));
    let out = symtest(&["test", &a, &bad]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 2"));
    let out = symtest(&["test", &a, "/no/such/file.csv"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("file not found"));
}

#[test]
fn csv_format_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", SAMPLE);
    let b = write(dir.path(), "b.csv", "3,3\n4,4\n5,3\n4,5\n");
    let target = dir.path().join("out.csv");
    let out = symtest(&[
        "test", &a, &b, "--test", "wilcoxon,energy", "--format", "csv", "--permutations", "49",
        "--kernel", "gauss", "--scale", "2", "--h", "expm", "--out", target.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&target).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "test_name,statistic,p_value,replicates,seed,alpha,reject");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("wilcoxon,") && lines[2].starts_with("energy,"));
}

#[test]
fn invalid_settings_fail() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", SAMPLE);
    for extra in [["--alpha", "1.5"], ["--permutations", "0"]] {
        let out = symtest(&["test", &a, &a, extra[0], extra[1]]);
        assert!(!out.status.success());
    }
    let out = symtest(&["test", &a, &a, "--kernel", "gauss", "--scale", "-1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("scale"));
}

#[test]
fn oracle_two_point_case() {
    let out = symtest(&[
        "oracle",
        "--px",
        r#"{"support": [[0], [1]], "probs": [0.5, 0.5]}"#,
        "--py",
        r#"{"support": [[0]], "probs": [1]}"#,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let pmf: Vec<(f64, f64)> = serde_json::from_value(doc["pmf"].clone()).unwrap();
    assert_eq!(pmf, vec![(-1.0, 0.125), (0.0, 0.625), (1.0, 0.25)]);
    assert_eq!(doc["symmetric"], false);
    assert!(doc["cf_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn oracle_point_masses_and_bad_probs() {
    let mass = r#"{"support": [[1.5, -2]], "probs": [1.0]}"#;
    let out = symtest(&["oracle", "--px", mass, "--py", mass, "--kernel", "gauss"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let pmf: Vec<(f64, f64)> = serde_json::from_value(doc["pmf"].clone()).unwrap();
    assert_eq!(pmf, vec![(0.0, 1.0)]);
    assert_eq!(doc["symmetric"], true);

    let out = symtest(&[
        "oracle",
        "--px",
        r#"{"support": [[0], [1]], "probs": [0.5, 0.4]}"#,
        "--py",
        mass,
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid distribution"));

    let wide: Vec<String> = (0..10).map(|i| format!("[{i}]")).collect();
    let wide = format!(r#"{{"support": [{}], "probs": [{}]}}"#, wide.join(","), ["0.1"; 10].join(","));
    let out = symtest(&["oracle", "--px", &wide, "--py", &wide, "--max-terms", "100"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 100"));
}

#[test]
fn study_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "name": "tiny",
        "generator_x": {"family": "gaussian", "mean": [0, 0], "scale": 1},
        "generator_y": {"family": "uniform-cube", "low": -1, "high": 1},
        "n": 20, "m": 20, "dim": 2,
        "kernel": {"kind": "gaussian-snd", "scale": 1},
        "tests": ["sign-cf", "energy"],
        "h": {"kind": "exp-minus-one"},
        "replicates": 19, "trials": 5, "alpha": 0.1, "seed": 3
    }"#;
    let path = write(dir.path(), "sc.json", scenario);
    let out = symtest(&["study", "--scenario", &path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["studies"][0]["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].get("wall_time_s").is_none());
    let out = symtest(&["study", "--scenario", &path, "--format", "csv", "--timings"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scenario,test,rejection_rate,std_error,mean_statistic,trials,replicates,alpha,seed,wall_time_s"));
    assert_eq!(text.lines().count(), 3);

    let broken = write(dir.path(), "bad.json", &scenario.replace("\"trials\": 5", "\"trials\": 0"));
    let out = symtest(&["study", "--scenario", &broken]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid scenario"));
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = Dataset::from_rows(&[[0.1, 1e-300, -3.0], [f64::MAX, 2.5e17, -0.0]]).unwrap();
    let path = dir.path().join("d.csv");
    write_dataset(&d, std::fs::File::create(&path).unwrap()).unwrap();
    assert_eq!(ingest_csv(&path).unwrap(), d);
}

proptest! {
    #[test]
    fn csv_round_trip(
        rows in (1usize..5).prop_flat_map(|d| prop::collection::vec(
            prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, d),
            1..10,
        )),
    ) {
        let d = Dataset::from_rows(&rows).unwrap();
        let mut buf = Vec::new();
        write_dataset(&d, &mut buf).unwrap();
        let back = read_dataset(buf.as_slice()).unwrap();
        prop_assert_eq!(back.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                        d.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }
}
