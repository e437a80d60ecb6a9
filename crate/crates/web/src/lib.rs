//! Three library operations exported to JavaScript. Every export returns a
//! JSON string; failures come back as `{"error": "..."}` so the page never
//! has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qec_verify::channels::{build_channel, ChannelSpec};
use qec_verify::codes::{builtin_code, kl_check};
use qec_verify::fidelity::{min_fidelity, FidelityConfig};
use qec_verify::memory::compare_coded_uncoded;
use qec_verify::recovery::{synthesize_recovery, verify_recovery, SynthesisOptions};
use qec_verify::Tolerances;

/// Longest trajectory the page will request; keeps the tab responsive.
pub const MAX_DEMO_CYCLES: usize = 200;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Test the correction conditions of a named code against a channel given
/// as a JSON spec, and synthesize a recovery when they hold.
pub fn correction_report(code: &str, channel_spec: &str) -> Result<Value, String> {
    let tol = Tolerances::default();
    let code = builtin_code(code).map_err(err)?;
    let spec = ChannelSpec::from_json(channel_spec).map_err(err)?;
    let errors = build_channel(&spec, &tol).map_err(err)?;
    let kl = kl_check(&code, &errors, tol.kl).map_err(err)?;
    let recovery = if kl.passed {
        let rec = synthesize_recovery(&code, &errors, &tol, SynthesisOptions::default()).map_err(err)?;
        let verification = verify_recovery(&code, &errors, &rec, &tol).map_err(err)?;
        Some(json!({
            "syndrome_dim": rec.syndrome_dim(),
            "elements": rec.ensemble().len(),
            "verified": verification.passed,
            "max_identity_residual": verification.max_identity_residual,
        }))
    } else {
        None
    };
    Ok(json!({
        "channel": errors.label(),
        "operators": errors.len(),
        "passed": kl.passed,
        "max_diag_violation": kl.max_diag_violation,
        "max_offdiag_violation": kl.max_offdiag_violation,
        "witness": kl.witness,
        "recovery": recovery,
    }))
}

/// Minimum pure-state fidelity of a named code under a channel spec,
/// with the minimizing logical coefficients.
pub fn fidelity_report(code: &str, channel_spec: &str) -> Result<Value, String> {
    let tol = Tolerances::default();
    let code = builtin_code(code).map_err(err)?;
    let spec = ChannelSpec::from_json(channel_spec).map_err(err)?;
    let channel = build_channel(&spec, &tol).map_err(err)?;
    let report = min_fidelity(&code, &channel, &FidelityConfig::default()).map_err(err)?;
    Ok(json!({
        "min_fidelity": report.value,
        "method": report.method,
        "logical_coefficients": report.logical_coefficients,
    }))
}

/// Worst-case fidelity per cycle of the three-qubit phase code versus a
/// bare qubit under decoherence of strength `gamma`.
pub fn memory_report(gamma: f64, cycles: usize) -> Result<Value, String> {
    if cycles > MAX_DEMO_CYCLES {
        return Err(format!("at most {MAX_DEMO_CYCLES} cycles in the demo"));
    }
    let cmp = compare_coded_uncoded(gamma, cycles, &Tolerances::default()).map_err(err)?;
    serde_json::to_value(cmp).map_err(err)
}

#[wasm_bindgen]
pub fn check_correction(code: &str, channel_spec: &str) -> String {
    respond(correction_report(code, channel_spec))
}

#[wasm_bindgen]
pub fn minimum_fidelity(code: &str, channel_spec: &str) -> String {
    respond(fidelity_report(code, channel_spec))
}

#[wasm_bindgen]
pub fn memory_comparison(gamma: f64, cycles: usize) -> String {
    respond(memory_report(gamma, cycles))
}
