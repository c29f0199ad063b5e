use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn hfgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfgeo"))
        .args(args)
        .env_remove("FG_TOL_JACOBI")
        .env_remove("FG_TOL_CRITERION")
        .output()
        .expect("hfgeo runs")
}

fn with_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.to_str().unwrap().to_owned();
    full.extend(["--out", &out_s, "--no-timing"]);
    let o = hfgeo(&full);
    let code = o.status.code().unwrap();
    let text = std::fs::read_to_string(&out)
        .unwrap_or_else(|_| panic!("no report; stderr: {}", String::from_utf8_lossy(&o.stderr)));
    (code, serde_json::from_str(&text).unwrap())
}

fn spec(name: &str) -> String {
    fixture(name).to_str().unwrap().to_owned()
}

#[test]
fn validate_reports_dimensions_and_digest() {
    let (code, r) = with_report(&["validate", &spec("so3_plus_r_exponential.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["payload"]["kind"], "validate");
    assert_eq!(r["payload"]["dim"], 4);
    assert_eq!(r["payload"]["h_dim"], 1);
    assert_eq!(r["payload"]["m_dim"], 3);
    assert_eq!(r["payload"]["default_source"], "closed_form");
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    assert!(r["wall_time_ms"].is_null());
}

#[test]
fn shen_exit_code_follows_condition() {
    let s = spec("heisenberg_exponential.json");
    assert_eq!(hfgeo(&["shen", &s, "--b", "0.5"]).status.code(), Some(0));
    assert_eq!(hfgeo(&["shen", &s, "--b", "1.2"]).status.code(), Some(1));
}

#[test]
fn audit_agrees_for_exponential() {
    let (code, r) = with_report(&["audit", &spec("so3_exponential.json"), "--samples", "50"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["agrees"], true);
}

#[test]
fn audit_flags_infinite_series_closed_form() {
    let (code, r) = with_report(&["audit", &spec("so3_infinite.json"), "--samples", "50"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["agrees"], false);
    assert!(r["payload"]["max_rel_discrepancy"].as_f64().unwrap() > 1e-3);
}

#[test]
fn check_vector_decides_and_exits_zero() {
    let s = spec("heisenberg_exponential.json");
    let (code, r) = with_report(&["check-vector", &s, "--y", "0,0,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["geodesic"], true);
    let (code, r) = with_report(&["check-vector", &s, "--y", "1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["geodesic"], false);
    assert_eq!(r["payload"]["residual"]["source"], "closed_form");
}

#[test]
fn check_vector_rejects_bad_vectors() {
    let s = spec("heisenberg_exponential.json");
    assert_eq!(
        hfgeo(&["check-vector", &s, "--y", "1,0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hfgeo(&["check-vector", &s, "--y", "1,x,0"]).status.code(),
        Some(2)
    );
}

#[test]
fn infinite_series_defaults_to_oracle() {
    let (code, r) = with_report(&["check-vector", &spec("so3_infinite.json"), "--y", "1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["residual"]["source"], "oracle");
    assert_eq!(r["payload"]["geodesic"], true);
}

#[test]
fn outside_cone_is_input_error() {
    let o = hfgeo(&["check-vector", &spec("so3_infinite.json"), "--y=-1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn search_is_reproducible() {
    let s = spec("heisenberg_exponential.json");
    let args = ["search", s.as_str(), "--seeds", "8", "--seed", "3"];
    let (c1, a) = with_report(&args);
    let (c2, b) = with_report(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_eq!(a["payload"]["candidates"].as_array().unwrap().len(), 8);
}

#[test]
fn go_check_on_abelian_covers_everything() {
    let (code, r) = with_report(&[
        "go-check",
        &spec("abelian_exponential.json"),
        "--directions",
        "20",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["coverage_ratio"], 1.0);
}

#[test]
fn equivalence_passes_on_fixture() {
    let (code, r) = with_report(&["equivalence", &spec("so3_plus_r_exponential.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["kind"], "equivalence");
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec("so3_infinite.json");
    let paths: Vec<String> = (0..2)
        .map(|i| {
            dir.path()
                .join(format!("r{i}.json"))
                .to_str()
                .unwrap()
                .to_owned()
        })
        .collect();
    for p in &paths {
        hfgeo(&["audit", &s, "--samples", "20", "--out", p, "--no-timing"]);
    }
    assert_eq!(
        std::fs::read(&paths[0]).unwrap(),
        std::fs::read(&paths[1]).unwrap()
    );
}

#[test]
fn malformed_document_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"algebra\": {\"dim\": 2, \"bogus\": 1}}").unwrap();
    let o = hfgeo(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn env_tolerance_is_used_when_document_is_silent() {
    let s = spec("heisenberg_exponential.json");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_hfgeo"))
        .args(["check-vector", &s, "--y", "0,0,1", "--no-timing", "--out"])
        .arg(&out)
        .env("FG_TOL_CRITERION", "0.25")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["payload"]["tol"], 0.25);
}
