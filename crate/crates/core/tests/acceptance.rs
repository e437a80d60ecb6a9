//! Acceptance suite: one PASS/FAIL line per criterion, with runtime.
//!
//! Runs as a plain binary (`harness = false`) so the lines appear in order
//! and unabridged. A failing criterion is printed as FAIL together with the
//! measured values; the process still exits successfully so the rest of
//! the workspace test run is not cut short. Panics (as opposed to failed
//! criteria) do abort.

mod common;

use std::time::{Duration, Instant};

use common::*;
use qec_verify::channels::{build_channel, e_error_family, pauli_unitary_basis, strength, ChannelKind, ChannelSpec,
    OperatorEnsemble};
use qec_verify::codes::{builtin_code, code_images, kl_check, random_code_from, trivial_code};
use qec_verify::fidelity::{entangled_fidelity, min_fidelity, FidelityConfig};
use qec_verify::linalg::orthonormalize;
use qec_verify::linalg::random::{gaussian_matrix, rng};
use qec_verify::recovery::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn run(name: &str, budget: Duration, tally: &mut (usize, usize), f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let within = elapsed <= budget;
    let passed = o.passed && within;
    let timing = if within {
        String::new()
    } else {
        format!(" [over budget {:.0} ms]", budget.as_secs_f64() * 1e3)
    };
    println!(
        "{} {name} ({:.1} ms){timing}: {}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64() * 1e3,
        o.detail
    );
    if passed {
        tally.0 += 1;
    } else {
        tally.1 += 1;
    }
}

fn cfg() -> FidelityConfig {
    FidelityConfig::default()
}

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

fn bare_qubit_decoherence() -> Outcome {
    let q = trivial_code(2).unwrap();
    let mut worst = 0.0f64;
    for gamma in [0.01, 0.1, 1.0] {
        let e = channel(ChannelKind::Decoherence, &[("gamma", gamma)]);
        let f = min_fidelity(&q, &e, &cfg()).unwrap().value;
        worst = worst.max((f - (1.0 + (-gamma).exp()) / 2.0).abs());
    }
    outcome(worst < 1e-6, format!("max |F_min − (1+e^-γ)/2| = {worst:.2e} (tol 1e-6)"))
}

fn depolarizing() -> Outcome {
    let q = trivial_code(2).unwrap();
    let e = channel(ChannelKind::DepolarizingThird, &[]);
    let fp = min_fidelity(&q, &e, &cfg()).unwrap().value;
    let report = entangled_fidelity(&q, &e, &cfg(), &tol()).unwrap();
    let check = report.bound_check.unwrap();
    let ok = (fp - 1.0 / 3.0).abs() < 1e-6
        && report.max_entangled_value.abs() < 1e-9
        && check.bound.abs() < 1e-6
        && check.equality;
    outcome(
        ok,
        format!(
            "F_p = {fp:.9}, completely entangled F_e = {:.2e}, bound = {:.2e}, min F_e = {:.2e}, equality = {}",
            report.max_entangled_value, check.bound, check.entangled_fidelity, check.equality
        ),
    )
}

fn phase_code_correction() -> Outcome {
    let t = tol();
    let code = builtin_code("phase3").unwrap();
    let family = one_error_phase_family(0.1);
    let kl = kl_check(&code, &family, t.kl).unwrap();
    let rec = synthesize_recovery(&code, &family, &t, SynthesisOptions::default()).unwrap();
    let verify = verify_recovery(&code, &family, &rec, &t).unwrap();
    let comp = composite(&family, &rec).unwrap();
    let entangled = entangled_state_test(&code, &comp, &t).unwrap();
    let entropy = entropy_test(&code, &single_phase_superoperator(0.3), &t).unwrap();
    let ok = kl.passed
        && verify.max_identity_residual < 1e-9
        && entangled.passed
        && entropy.passed
        && (entropy.difference_bits - 1.0).abs() < 1e-6;
    outcome(
        ok,
        format!(
            "kl {}, identity residual {:.2e}, entangled residual {:.2e}, entropy difference {:.9} bits",
            kl.passed, verify.max_identity_residual, entangled.max_residual, entropy.difference_bits
        ),
    )
}

struct OverlapFindings {
    completeness: f64,
    ranks: Vec<usize>,
    synthesis: Result<(usize, f64), String>,
}

fn overlap_findings(kind: ChannelKind) -> OverlapFindings {
    let t = tol();
    let code = builtin_code("pair").unwrap();
    let e = channel(kind, &[("q", 0.25)]);
    let images = code_images(&code, &e).unwrap();
    let ranks = (0..code.k())
        .map(|i| {
            let column: Vec<_> = images.iter().map(|per_i| per_i[i].clone()).collect();
            orthonormalize(&column, t.rank).unwrap().rank()
        })
        .collect();
    let synthesis = synthesize_recovery(&code, &e, &t, SynthesisOptions::default())
        .map(|rec| {
            let nontrivial = rec.ensemble().operators().iter().filter(|m| m.max_abs() > t.structure).count();
            let residual = verify_recovery(&code, &e, &rec, &t).unwrap().max_identity_residual;
            (nontrivial, residual)
        })
        .map_err(|err| err.to_string());
    OverlapFindings {
        completeness: e.completeness_residual(),
        ranks,
        synthesis,
    }
}

fn overlap_verdict(f: &OverlapFindings) -> Outcome {
    let (synth_ok, synth_text) = match &f.synthesis {
        Ok((count, residual)) => (
            *count == 2 && *residual < 1e-9,
            format!("{count} nontrivial recovery elements, residual {residual:.2e}"),
        ),
        Err(e) => (false, format!("synthesis refused: {e}")),
    };
    let ok = f.completeness < 1e-12 && f.ranks.iter().all(|&r| r == 2) && synth_ok;
    outcome(
        ok,
        format!("completeness residual {:.2e}, image ranks {:?}, {synth_text}", f.completeness, f.ranks),
    )
}

fn four_qubit_impossibility() -> Outcome {
    let basis = OperatorEnsemble::new(pauli_unitary_basis(), "unitary basis", &tol()).unwrap();
    let family = e_error_family(&basis, 4, 1).unwrap();
    let mut r = rng(0x5eed);
    let mut smallest = f64::INFINITY;
    let mut all_failed = true;
    for _ in 0..100 {
        let code = random_code_from(&mut r, 16, 2).unwrap();
        let report = kl_check(&code, &family, tol().kl).unwrap();
        all_failed &= !report.passed;
        smallest = smallest.min(report.max_offdiag_violation.max(report.max_diag_violation));
    }
    outcome(
        all_failed && smallest > 1e-3 && family.len() == 13,
        format!(
            "{} operators, 100 codes, all fail = {all_failed}, smallest max violation {smallest:.3e}",
            family.len()
        ),
    )
}

fn independent_error_bound_criterion() -> Outcome {
    let code = builtin_code("phase3").unwrap();
    let mut margins = Vec::new();
    for p in [0.01, 0.05, 0.1] {
        let full = phase_flip_power(p, 3);
        let family = build_channel(
            &ChannelSpec::new(ChannelKind::PhaseFlip).param("p", p).on_qubits(3).max_errors(1),
            &tol(),
        )
        .unwrap();
        let rec = synthesize_recovery(&code, &family, &tol(), SynthesisOptions::default()).unwrap();
        let f = min_fidelity(&code, &composite(&full, &rec).unwrap(), &cfg()).unwrap().value;
        let bound = 1.0 - (3.0 * p * p * (1.0 - p) + p.powi(3));
        margins.push(f - bound);
    }
    let ok = margins.iter().all(|&m| m >= -1e-6);
    let text: Vec<String> = margins.iter().map(|m| format!("{m:.3e}")).collect();
    outcome(ok, format!("F_min − bound for p = 0.01, 0.05, 0.1: [{}]", text.join(", ")))
}

fn strength_multiplicativity() -> Outcome {
    let mut r = rng(54);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mut ensemble = || {
            let d = 1 + (rand::Rng::gen::<u32>(&mut r) % 4) as usize;
            let m = 1 + (rand::Rng::gen::<u32>(&mut r) % 3) as usize;
            let ops = (0..m).map(|_| gaussian_matrix(&mut r, d, d)).collect();
            OperatorEnsemble::new(ops, "random", &tol()).unwrap()
        };
        let a = ensemble();
        let b = ensemble();
        let joint = strength(&a.kron(&b).unwrap());
        let product = strength(&a) * strength(&b);
        worst = worst.max((joint - product).abs() / product.max(1.0));
    }
    outcome(worst < 1e-9, format!("max relative deviation over 50 pairs {worst:.2e} (tol 1e-9)"))
}

fn phase_code_decoherence_consistency() -> Outcome {
    let code = builtin_code("phase3").unwrap();
    let gammas: Vec<f64> = (0..50).map(|i| 0.001 + (0.05 - 0.001) * i as f64 / 49.0).collect();
    let mut worst = 0.0f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &g in &gammas {
        let spec = ChannelSpec::new(ChannelKind::DecoherencePmBasis).param("gamma", g).on_qubits(3);
        let full = build_channel(&spec, &tol()).unwrap();
        let rec = synthesize_recovery(&code, &one_error_phase_family(g), &tol(), SynthesisOptions::default()).unwrap();
        let f = min_fidelity(&code, &composite(&full, &rec).unwrap(), &cfg()).unwrap().value;
        let p_minus = (1.0 - (-g).exp()) / 2.0;
        let p_plus = (1.0 + (-g).exp()) / 2.0;
        let closed = 1.0 - (3.0 * p_minus * p_minus * p_plus + p_minus.powi(3));
        worst = worst.max((f - closed).abs());
        let x = g * g;
        sxy += x * (1.0 - f);
        sxx += x * x;
    }
    let slope = sxy / sxx;
    outcome(
        worst < 1e-9 && (slope - 0.75).abs() <= 0.05,
        format!("max |F − closed form| = {worst:.2e} (tol 1e-9); slope of 1−F against γ² = {slope:.4} (target 0.75 ± 0.05)"),
    )
}

fn route_equivalence() -> Outcome {
    let mut disagreements = Vec::new();
    let pairs = catalogued_pairs();
    for entry in &pairs {
        let verdicts: Vec<bool> = route_verdicts(&entry.code, &entry.channel).into_iter().flatten().collect();
        if verdicts.iter().any(|&v| v != verdicts[0]) {
            disagreements.push(entry.label);
        }
    }
    outcome(
        disagreements.is_empty(),
        format!("{} catalogued pairs, disagreements: {disagreements:?}", pairs.len()),
    )
}

fn main() {
    let mut tally = (0, 0);
    run("bare-qubit decoherence fidelity", secs(1.0), &mut tally, bare_qubit_decoherence);
    run("depolarizing example", secs(1.0), &mut tally, depolarizing);
    run("phase3 correction", secs(5.0), &mut tally, phase_code_correction);
    run("overlap example", secs(1.0), &mut tally, || {
        overlap_verdict(&overlap_findings(ChannelKind::OverlapExample))
    });
    let corrected = overlap_verdict(&overlap_findings(ChannelKind::OverlapCorrected));
    println!(
        "NOTE overlap example with the sign-corrected third operator (not scored): {} — {}",
        if corrected.passed { "would pass" } else { "would fail" },
        corrected.detail
    );
    run("4-qubit impossibility", secs(30.0), &mut tally, four_qubit_impossibility);
    run("independent-error fidelity bound", secs(10.0), &mut tally, independent_error_bound_criterion);
    run("strength multiplicativity", secs(5.0), &mut tally, strength_multiplicativity);
    run("phase3 decoherence closed form", secs(10.0), &mut tally, phase_code_decoherence_consistency);
    run("route equivalence suite", Duration::MAX, &mut tally, route_equivalence);
    println!("acceptance: {} PASS, {} FAIL", tally.0, tally.1);
}
