use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinzero")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spinzero-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn identities_default_passes() {
    let out = bin(&["identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn identities_at_high_cutoff_is_quick() {
    let start = std::time::Instant::now();
    let out = bin(&["identities", "--l-max", "64"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn impossible_tolerance_names_the_check() {
    let out = bin(&["identities", "--l-max", "8", "--tol.orthonormality=1e-30"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orthonormality"));
    let report = json(&out);
    let failing: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["orthonormality"]);
}

#[test]
fn seam_files_by_parity() {
    let even = scratch("even.json");
    std::fs::write(&even, r#"{"l_max": 2, "entries": [{"l":0,"m":0,"re":1.0,"im":0.0},{"l":2,"m":1,"re":0.5,"im":0.0}], "parity": "even"}"#).unwrap();
    let out = bin(&["seam", even.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["classification"], "symmetric");
    assert_eq!(json(&out)["scan"]["decaying"], true);

    let odd = scratch("odd.json");
    std::fs::write(&odd, r#"{"l_max": 1, "entries": [{"l":1,"m":1,"re":1.0,"im":0.0}], "parity": "odd"}"#).unwrap();
    let out = bin(&["seam", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["classification"], "inadmissible");
    assert_eq!(json(&out)["scan"]["decaying"], false);
}

#[test]
fn malformed_coefficients_report_a_location() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\n  \"l_max\": 2,\n  \"entries\": [\n").unwrap();
    let out = bin(&["seam", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "{err}");
    let missing = bin(&["seam", "/nonexistent/coeffs.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn seam_csv_and_eps_list() {
    let out = bin(&["seam", "--l-max", "6", "--format", "csv", "--eps-list", "1e-2,1e-3,1e-4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "epsilon,mismatch_sup,mismatch_l2,derivative_defect");
    assert_eq!(text.lines().count(), 4);
    assert_eq!(bin(&["seam", "--eps-list", "1e-3,1e-2"]).status.code(), Some(1));
}

#[test]
fn superselect_reports_three_verdicts() {
    let out = bin(&["superselect", "--l-max", "8", "--r0", "1,1,1", "--sweep-theta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sectors"]["even"]["verdict"], "GlobalPhase");
    assert_eq!(v["sectors"]["even"]["phase_re"], 1.0);
    assert_eq!(v["sectors"]["odd"]["verdict"], "GlobalPhase");
    assert_eq!(v["sectors"]["odd"]["phase_re"], -1.0);
    assert_eq!(v["sectors"]["mixed"]["verdict"], "NoGlobalPhase");
    assert_eq!(v["sweep"]["even"]["constant_verdict"], true);
    assert_eq!(v["sweep"]["odd"]["points"].as_array().unwrap().len(), 20);
    assert_eq!(bin(&["superselect", "--r0", "0,0,1"]).status.code(), Some(1));
}

#[test]
fn spectrum_exit_codes() {
    let out = bin(&["spectrum", "--l-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["multiplicities"], serde_json::json!([1, 5, 9, 13, 17, 21]));
    assert_eq!(v["result"]["null_dimension"], 66);
    assert_eq!(bin(&["spectrum", "--l-max", "4"]).status.code(), Some(0));
    assert_eq!(bin(&["spectrum", "--l-max", "4", "--n-samples", "8"]).status.code(), Some(1));
}

#[test]
fn complete_scan_passes() {
    let out = bin(&["complete", "--l-max", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["residuals"].as_array().unwrap().len(), 5);
}

#[test]
fn reports_are_byte_identical_and_written_to_out() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for p in [&a, &b] {
        let out = bin(&["seam", "--l-max", "10", "--seed", "42", "--parity", "mixed", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let other = bin(&["seam", "--l-max", "10", "--seed", "43", "--parity", "mixed"]);
    assert_ne!(other.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(bin(&[]).status.code(), Some(1));
    assert_eq!(bin(&["identities", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(bin(&["identities", "--tol.unknown=1e-3"]).status.code(), Some(1));
    assert_eq!(bin(&["identities", "--tol.unitarity=0"]).status.code(), Some(1));
    assert_eq!(bin(&["--version"]).status.code(), Some(0));
}
