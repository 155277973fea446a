//! End-to-end tests of the binary: exit-code partitioning, report shapes,
//! determinism, and the golden classification outputs for the model zoo.
//!
//! The golden files pin the exact stdout of `classify` on fixtures generated
//! by `zoo`; grid-derived numbers in them are reproducible for a given
//! platform's libm.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ontoscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ontoscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

/// Writes the fixture zoo once per test process.
fn zoo_dir() -> &'static Path {
    use std::sync::OnceLock;
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("ontoscope-zoo-{}", std::process::id()));
        let out = ontoscope(&["zoo", dir.to_str().unwrap(), "--ks-grid", "20000"]);
        assert!(out.status.success(), "zoo failed: {out:?}");
        dir
    })
}

#[test]
fn validate_accepts_the_shipped_fixtures() {
    for name in [
        "beltrametti_bugajski",
        "kochen_specker_n20000",
        "psi_supplemented_one_to_many",
        "psi_dependent_uniform",
    ] {
        let path = zoo_dir().join(format!("{name}.json"));
        let out = ontoscope(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {out:?}");
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["valid"], serde_json::Value::Bool(true));
        assert!(report["violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn validate_rejects_planted_row_sum_defect() {
    let path = zoo_dir().join("beltrametti_bugajski.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["responses"][0]["rows"][1][0] = serde_json::json!(0.4);
    let broken = std::env::temp_dir().join(format!("ontoscope-broken-{}.json", std::process::id()));
    std::fs::write(&broken, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = ontoscope(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["valid"], serde_json::Value::Bool(false));
    let violations = report["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["kind"], "row_sum");
    let location = violations[0]["location"].as_str().unwrap();
    assert!(location.contains("lambda_+") && location.contains('Z'), "{location}");
    std::fs::remove_file(broken).ok();
}

#[test]
fn validate_gives_parse_error_exit_for_truncated_file() {
    let path = zoo_dir().join("beltrametti_bugajski.json");
    let full = std::fs::read_to_string(&path).unwrap();
    let truncated_path =
        std::env::temp_dir().join(format!("ontoscope-trunc-{}.json", std::process::id()));
    std::fs::write(&truncated_path, &full[..full.len() / 2]).unwrap();

    let out = ontoscope(&["validate", truncated_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let diagnostics = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(diagnostics.contains("line"), "{diagnostics}");
    std::fs::remove_file(truncated_path).ok();

    let missing = ontoscope(&["validate", "/nonexistent/model.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let out = ontoscope(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ontoscope(&["overlap-search", "--dim", "3", "--states", "0,+"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ontoscope(&["overlap-search"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_matches_golden_files() {
    for name in [
        "beltrametti_bugajski",
        "kochen_specker_n20000",
        "psi_supplemented_one_to_many",
        "psi_dependent_uniform",
    ] {
        let path = zoo_dir().join(format!("{name}.json"));
        let out = ontoscope(&["classify", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {out:?}");
        let golden_path = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(format!("{name}.json"));
        let golden = std::fs::read_to_string(&golden_path).unwrap();
        assert_eq!(stdout(&out), golden, "golden mismatch for {name}");
    }
}

#[test]
fn classify_output_is_byte_deterministic() {
    let path = zoo_dir().join("kochen_specker_n20000.json");
    let a = ontoscope(&["classify", path.to_str().unwrap()]);
    let b = ontoscope(&["classify", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn classify_csv_emits_overlap_table() {
    let path = zoo_dir().join("beltrametti_bugajski.json");
    let out = ontoscope(&["classify", path.to_str().unwrap(), "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("psi,phi,delta_psi_phi,delta_phi_psi,symmetric,born_overlap,bound_ok"));
    assert!(text.contains("0,+,0,0,0,0.5000000000000001,true"));
}

#[test]
fn classify_refuses_invalid_model_with_report() {
    let path = zoo_dir().join("beltrametti_bugajski.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["preparations"][0]["weights"][1] = serde_json::json!(-0.01);
    let broken =
        std::env::temp_dir().join(format!("ontoscope-negw-{}.json", std::process::id()));
    std::fs::write(&broken, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let out = ontoscope(&["classify", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v["kind"] == "negative_weight"));
    std::fs::remove_file(broken).ok();
}

#[test]
fn overlap_audit_reports_each_pair() {
    let path = zoo_dir().join("beltrametti_bugajski.json");
    let out = ontoscope(&["overlap", path.to_str().unwrap(), "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0,+,0,0,0,"));

    // The grid model misses the default Born tolerance and must be refused.
    let ks = zoo_dir().join("kochen_specker_n20000.json");
    let refused = ontoscope(&["overlap", ks.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(1));
    // At the documented grid tolerances it passes.
    let ok = ontoscope(&[
        "overlap",
        ks.to_str().unwrap(),
        "--born-tol",
        "1e-3",
        "--bound-tol",
        "1e-3",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{ok:?}");
}

#[test]
fn overlap_search_canonical_pair() {
    let out = ontoscope(&["overlap-search", "--states", "0,+", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "psi,phi,angle_deg,max_overlap,born_overlap,status");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "0");
    assert_eq!(fields[1], "+");
    let value: f64 = fields[3].parse().unwrap();
    let born: f64 = fields[4].parse().unwrap();
    assert!((value - 0.5).abs() < 1e-9);
    assert!((born - 0.5).abs() < 1e-9);
    assert_eq!(fields[5], "optimal");
}

#[test]
fn overlap_search_sweep_endpoints() {
    let out = ontoscope(&["overlap-search", "--sweep", "0:90:3", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 4);
    let value_of = |line: &str| -> f64 { line.split(',').nth(3).unwrap().parse().unwrap() };
    assert!((value_of(lines[1]) - 1.0).abs() < 1e-9, "theta=0 pair is identical");
    assert!((value_of(lines[2]) - 0.5).abs() < 1e-9, "theta=45 matches |<0|+>|^2");
    assert!(value_of(lines[3]).abs() < 1e-9, "theta=90 pair is orthogonal");
}

#[test]
fn overlap_search_exact_mode() {
    let out = ontoscope(&["overlap-search", "--states", "0,+", "--exact"]);
    assert_eq!(out.status.code(), Some(0));
    let records: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(records[0]["solution"]["value"], serde_json::json!(0.5));
    assert_eq!(records[0]["solution"]["exact"], serde_json::json!(true));
}

#[test]
fn pbr_command_emits_certificate() {
    let out = ontoscope(&["pbr", "--overlap-q", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["joint_lp_status"], "infeasible");
    let zeros = cert["zero_outcomes"].as_array().unwrap();
    assert_eq!(zeros.len(), 4);
    for z in zeros {
        assert!(z["born_probability"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn demo_bomb_both_arms() {
    let live = ontoscope(&["demo-bomb"]);
    assert_eq!(live.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&live)).unwrap();
    assert!((record["explode"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((record["bright"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((record["dark"].as_f64().unwrap() - 0.25).abs() < 1e-12);

    let control = ontoscope(&["demo-bomb", "--no-bomb"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&control)).unwrap();
    assert!(record["explode"].as_f64().unwrap().abs() < 1e-12);
    assert!((record["bright"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(record["dark"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn model_documents_round_trip_byte_exactly() {
    for name in ["beltrametti_bugajski", "psi_dependent_uniform"] {
        let path = zoo_dir().join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        let doc: ontoscope::schema::ModelDocument = serde_json::from_str(&text).unwrap();
        let mut reserialized = serde_json::to_string_pretty(&doc).unwrap();
        reserialized.push('\n');
        assert_eq!(text, reserialized, "{name} round trip drifted");
    }
}
