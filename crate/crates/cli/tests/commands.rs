//! End-to-end runs of the `qecv` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qecv() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qecv"));
    c.env_remove("QEC_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    qecv().args(args).output().expect("spawn qecv")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), value)
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn correctable_phase_family_exits_zero() {
    let (code, v) = json(&["check", "phase3", "phase_errors"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["header"]["command"], "check");
    assert_eq!(v["header"]["seed"], 0);
}

#[test]
fn fixture_files_are_accepted_as_paths() {
    let (code, v) = json(&["check", &fixture("phase3.code.json"), &fixture("phase_errors.channel.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn bit_flips_fail_with_witness() {
    let (code, v) = json(&["check", "phase3", "bitflip"]);
    assert_eq!(code, 1);
    let w = &v["result"]["correction_conditions"]["witness"];
    assert_eq!(w["condition"], "diagonal");
    assert!((w["magnitude"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["check", bad.to_str().unwrap(), "phase_errors"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_names_and_bad_tolerances_exit_two() {
    assert_eq!(run(&["check", "no_such_code", "phase_errors"]).status.code(), Some(2));
    assert_eq!(run(&["check", "phase3", "phase_errors", "--tol=-1"]).status.code(), Some(2));
    let out = qecv().env("QEC_TOL", "abc").args(["check", "phase3", "phase_errors"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synthesis_for_phase_family_has_four_elements() {
    let dir = tempfile::tempdir().unwrap();
    let rec_path = dir.path().join("rec.json");
    let (code, v) = json(&["synthesize", "phase3", "phase_errors", "--recovery-out", rec_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["nontrivial_elements"], 4);
    assert_eq!(v["result"]["verification"]["passed"], true);
    assert!(v["result"]["verification"]["max_identity_residual"].as_f64().unwrap() < 1e-9);
    assert!(rec_path.exists());
    let weight = v["result"]["verification"]["lambda_weight"].as_f64().unwrap();

    // The one-error family is truncated, so after recovery every state keeps
    // exactly the retained weight Σ|λ|².
    let (code, v) = json(&["fidelity", "phase3", "phase_errors", "--recovery", rec_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let f = v["result"]["min_fidelity"].as_f64().unwrap();
    assert!((f - weight).abs() < 1e-9, "{f} vs {weight}");
    assert!(weight < 1.0);
}

#[test]
fn corrected_overlap_example_has_two_syndromes() {
    let (code, v) = json(&["synthesize", "pair", "overlap_corrected"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["syndrome_dim"], 2);
}

#[test]
fn printed_overlap_example_is_refused() {
    let (code, v) = json(&["synthesize", "pair", "overlap"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["passed"], false);
}

#[test]
fn unprotected_qubit_fidelity_under_decoherence() {
    let (code, v) = json(&["fidelity", "trivial", "decoherence", "--gamma", "0.1"]);
    assert_eq!(code, 0);
    let expected = (1.0 + (-0.1f64).exp()) / 2.0;
    let f = v["result"]["min_fidelity"].as_f64().unwrap();
    assert!((f - expected).abs() < 1e-6, "{f} vs {expected}");
}

#[test]
fn depolarizing_channel_meets_entangled_bound_with_equality() {
    let (code, v) = json(&["fidelity", "trivial", "depolarizing", "--p", "0.2", "--entangled"]);
    assert_eq!(code, 0);
    let check = &v["result"]["entangled"]["bound_check"];
    assert_eq!(check["satisfied"], true);
    assert_eq!(check["equality"], true);
}

#[test]
fn memory_comparison_csv() {
    let out = run(&["memory", "phase3", "--gamma", "0.1", "--cycles", "5", "--compare"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("cycle,fidelity,bound,coded_worst,uncoded_worst"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    for row in &rows[1..] {
        assert!(row[3] > row[4], "coded worst case should beat the bare qubit at small gamma: {row:?}");
    }
}

#[test]
fn zero_cycles_gives_single_row() {
    let out = run(&["memory", "phase3", "--p", "0.05", "--cycles", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0,"));
}

#[test]
fn too_many_cycles_is_a_capacity_error() {
    let out = run(&["memory", "phase3", "--gamma", "0.1", "--cycles", "100000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["memory", "phase3", "--gamma", "0.2", "--cycles", "4", "--worst-case", "--seed", "7"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let f = ["fidelity", "phase5", "decoherence_pm", "--gamma", "0.1", "--qubits", "5", "--format", "json"];
    assert_eq!(run(&f).stdout, run(&f).stdout);
}

#[test]
fn tolerance_flag_overrides_environment() {
    let from_env = qecv()
        .env("QEC_TOL", "1e-3")
        .args(["check", "phase3", "phase_errors", "--format", "json"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["header"]["tolerances"]["kl"].as_f64(), Some(1e-3));

    let both = qecv()
        .env("QEC_TOL", "1e-3")
        .args(["check", "phase3", "phase_errors", "--tol", "1e-5", "--format", "json"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&both.stdout).unwrap();
    assert_eq!(v["header"]["tolerances"]["kl"].as_f64(), Some(1e-5));
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["bounds", "--r", "5", "--e", "1", "--p", "0.01", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(v["result"]["qubit_lower_bound"], 5);
}

#[test]
fn info_lists_and_describes() {
    let (code, v) = json(&["info"]);
    assert_eq!(code, 0);
    assert!(v["result"]["code_fixtures"].as_array().unwrap().iter().any(|s| s == "phase3"));
    let (code, v) = json(&["info", "phase3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["n"], 8);
    let (code, v) = json(&["info", "depolarizing", "--p", "0.1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["superoperator"], true);
}
