//! End-to-end runs of the `orbital` binary on the bundled root data.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn orbital(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_orbital")).args(args).output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    assert!(doc["assumptions"].is_array(), "missing assumptions in {doc}");
    doc
}

#[test]
fn betti_of_an_sl2_truncation() {
    let doc = orbital(&[
        "betti",
        "--group",
        &data("sl2.json"),
        "--profile",
        "2",
        "--divisor",
        r#"{"1": 1, "-1": 2}"#,
    ]);
    assert_eq!(doc["betti"], serde_json::json!([1, 1, 2]));
    assert_eq!(doc["trace_poly"], serde_json::json!([1, 1, 2]));
}

#[test]
fn betti_json_file_and_csv() {
    let dir = std::env::temp_dir().join(format!("orbital-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("betti.json");
    let csv = dir.join("betti.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_orbital"))
        .args(["betti", "--group", &data("sl2.json"), "--profile", "1", "--divisor", "[1, 1]"])
        .args(["--json", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["betti"], serde_json::json!([1, 2]));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().collect::<Vec<_>>(), vec!["degree,betti,trace", "0,1,1", "2,2,2"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn toric_cohomology_of_p1() {
    let doc = orbital(&["toric-cohomology", "--group", &data("sl2.json"), "--divisor", r#"{"1": -3}"#]);
    assert_eq!(doc["dims"], serde_json::json!([0, 2]));
    assert_eq!(doc["euler_characteristic"], -2);
}

#[test]
fn enumeration_matches_the_trace() {
    let doc = orbital(&[
        "enumerate",
        "--group",
        &data("sl2.json"),
        "--gamma",
        "2",
        "--divisor",
        r#"{"1": 1, "-1": 2}"#,
        "--q",
        "5",
    ]);
    assert_eq!(doc["count"], "56");
    let cells: u64 = doc["per_cell"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(cells, 56);
}

#[test]
fn strata_of_minus_one() {
    let doc = orbital(&["strata", "--group", &data("sl2.json"), "--s", "1/2"]);
    assert_eq!(doc["n"], 1);
    assert!(doc["d_I"].is_object());
}

#[test]
fn identity_on_the_product() {
    let doc = orbital(&[
        "fl-check",
        "--group",
        &data("sl2xsl2.json"),
        "--levi",
        "2",
        "--profile",
        "1",
        "--kappa",
        "0,1/2",
        "--divisor-family",
        "[[1, 1], [2, 2]]",
        "--brute-force-q",
        "5",
    ]);
    assert_eq!(doc["status"], "equal");
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    for c in checks {
        assert_eq!(c["equal"], true);
        assert_eq!(c["degreewise_vanishes"], true);
        assert_eq!(c["brute_force"]["lhs"], c["brute_force"]["rhs"]);
    }
}

#[test]
fn twisted_group() {
    let doc = orbital(&[
        "fl-check",
        "--group",
        &data("sl2_twisted.json"),
        "--profile",
        "1",
        "--kappa",
        "1/2",
        "--divisor-family",
        "[[1, 1]]",
    ]);
    assert_eq!(doc["status"], "hypotheses-not-met");
    assert_eq!(doc["transfer_sign"], -1);

    let out = Command::new(env!("CARGO_BIN_EXE_orbital"))
        .args(["fl-check", "--group", &data("sl2_twisted.json"), "--profile", "1", "--kappa", "1/2"])
        .args(["--divisor-family", "[[1, 2]]"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn bad_input_fails_cleanly() {
    let out = Command::new(env!("CARGO_BIN_EXE_orbital"))
        .args([
            "enumerate",
            "--group",
            &data("sl2.json"),
            "--gamma",
            "1",
            "--divisor",
            "[0, 0]",
            "--q",
            "8",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("characteristic 2"));
}
