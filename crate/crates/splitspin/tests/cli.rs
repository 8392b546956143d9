//! Smoke tests of the command-line front end: schemas, determinism, and the
//! documented exit codes (0 success, 2 validation error, 3 resource guard).

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_splitspin"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("splitspin-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_bundle_has_reports_for_all_criteria() {
    let out = bin()
        .args([
            "eval", "--state", "dicke", "--n", "40", "--split", "binomial", "--criteria", "all",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    // the fixed-sector correlation bound drops out for binomial mixtures
    assert_eq!(reports.len(), 16);
    let steering = reports
        .iter()
        .find(|r| r["criterion"] == "steering-normalized")
        .unwrap();
    assert_eq!(steering["violated"], true);
}

#[test]
fn table_command_emits_rows() {
    let out = bin()
        .args([
            "table",
            "--which",
            "entanglement-table2",
            "--n",
            "100",
            "--split",
            "exact",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["rows"][0]["state"], "dicke");
}

#[test]
fn sweep_writes_csv_with_header() {
    let path = tmp("sweep.csv");
    let status = bin()
        .args([
            "sweep", "--n", "40", "--mu-max", "0.3", "--mu-steps", "5", "--split", "exact",
            "--criteria", "steering-normalized,reid", "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "mu,steering-normalized,reid");
    assert_eq!(lines.count(), 5);
}

#[test]
fn sample_estimate_round_trip_is_deterministic() {
    let a = tmp("shots_a.csv");
    let b = tmp("shots_b.csv");
    for path in [&a, &b] {
        let status = bin()
            .args([
                "sample", "--state", "dicke", "--n", "24", "--split", "binomial", "--shots-z",
                "200", "--shots-planar", "200", "--seed", "5", "--out",
            ])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same seed must give byte-identical shot files"
    );

    let ingest = bin().args(["ingest", "--input"]).arg(&a).output().unwrap();
    assert!(ingest.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&ingest.stdout).unwrap();
    assert_eq!(summary["records"], 400);
    assert_eq!(summary["z_shots"], 200);

    let est = bin()
        .args(["estimate", "--input"])
        .arg(&a)
        .args(["--bootstrap", "200", "--seed", "9"])
        .output()
        .unwrap();
    assert!(est.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&est.stdout).unwrap();
    assert!(doc["estimates"]["var_jz"]["value"].is_number());
    assert_eq!(doc["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn shipped_fixture_flows_through_ingest_and_estimate() {
    let fixture = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/shots_dicke_n40.csv");
    let ingest = bin()
        .args(["ingest", "--input"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(ingest.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&ingest.stdout).unwrap();
    assert_eq!(summary["records"], 1000);

    let est = bin()
        .args(["estimate", "--input"])
        .arg(&fixture)
        .args(["--bootstrap", "300", "--seed", "2"])
        .output()
        .unwrap();
    assert!(est.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&est.stdout).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for entry in reports {
        let ratio = entry["report"]["ratio"].as_f64().unwrap();
        let hi = entry["intervals"]["ratio"][1].as_f64().unwrap();
        assert!(ratio < 1.0 && hi < 1.0, "fixture should violate both planar criteria");
    }
}

#[test]
fn verify_command_passes() {
    let out = bin().args(["verify", "--n", "4,6"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
}

#[test]
fn exit_codes_follow_error_classes() {
    // validation error: unknown state
    let bad_state = bin()
        .args(["eval", "--state", "cat", "--n", "10"])
        .output()
        .unwrap();
    assert_eq!(bad_state.status.code(), Some(2));

    // validation error: malformed CSV
    let path = tmp("bad.csv");
    std::fs::write(&path, "not,a,shot,file\n").unwrap();
    let bad_csv = bin().args(["ingest", "--input"]).arg(&path).output().unwrap();
    assert_eq!(bad_csv.status.code(), Some(2));

    // resource guard: sweep size cap
    let too_big = bin()
        .args([
            "sweep", "--n", "2400", "--mu-max", "0.2", "--mu-steps", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(too_big.status.code(), Some(3));

    // resource guard: shot synthesis cap
    let big_sample = bin()
        .args([
            "sample", "--state", "dicke", "--n", "300", "--shots-z", "2", "--shots-planar", "2",
            "--seed", "1", "--out",
        ])
        .arg(tmp("never.csv"))
        .output()
        .unwrap();
    assert_eq!(big_sample.status.code(), Some(3));
}
