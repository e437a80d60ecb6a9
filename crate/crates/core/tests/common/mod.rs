//! Fixtures shared by the integration tests. Independent oracles live in
//! the individual test files.
#![allow(dead_code)]

use qec_verify::channels::{build_channel, embed, pauli_x, pauli_z, ChannelKind, ChannelSpec, OperatorEnsemble};
use qec_verify::codes::QuantumCode;
use qec_verify::linalg::ortho::standard_basis;
use qec_verify::linalg::{orthonormalize, qubit_shape, ComplexMatrix};
use qec_verify::{Tolerances, C64};

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `{A₊, A₋¹, A₋², A₋³}` for three qubits under phase damping.
pub fn one_error_phase_family(gamma: f64) -> OperatorEnsemble {
    let spec = ChannelSpec::new(ChannelKind::DecoherencePmBasis)
        .param("gamma", gamma)
        .on_qubits(3)
        .max_errors(1);
    build_channel(&spec, &tol()).unwrap()
}

/// `{√(1−q) I, √(q/3) σ_z^s}` on three qubits: complete and exactly correctable by phase3.
pub fn single_phase_superoperator(q: f64) -> OperatorEnsemble {
    let mut ops = vec![ComplexMatrix::identity(8).scale_real((1.0 - q).sqrt())];
    for s in 0..3 {
        ops.push(embed(&pauli_z(), s, 3).unwrap().scale_real((q / 3.0).sqrt()));
    }
    OperatorEnsemble::new(ops, "single phase flips", &tol()).unwrap()
}

/// `{I, σ_x¹, σ_x², σ_x³}` (not complete).
pub fn bit_flip_family() -> OperatorEnsemble {
    let mut ops = vec![ComplexMatrix::identity(8)];
    for s in 0..3 {
        ops.push(embed(&pauli_x(), s, 3).unwrap());
    }
    OperatorEnsemble::new(ops, "bit flips", &tol()).unwrap()
}

/// `{½ I, ½ σ_x^s}` on three qubits: complete, not correctable by phase3.
pub fn scaled_bit_flip_superoperator() -> OperatorEnsemble {
    let ops = bit_flip_family().operators().iter().map(|a| a.scale_real(0.5)).collect();
    OperatorEnsemble::new(ops, "scaled bit flips", &tol()).unwrap()
}

pub fn channel(kind: ChannelKind, params: &[(&str, f64)]) -> OperatorEnsemble {
    let mut spec = ChannelSpec::new(kind);
    for (k, v) in params {
        spec = spec.param(k, *v);
    }
    build_channel(&spec, &tol()).unwrap()
}

/// Per-qubit `{√(1−p) I, √p σ_z}` on `r` qubits.
pub fn phase_flip_power(p: f64, r: usize) -> OperatorEnsemble {
    build_channel(&ChannelSpec::new(ChannelKind::PhaseFlip).param("p", p).on_qubits(r), &tol()).unwrap()
}

/// The hand-built recovery `{P, Pσ_z¹, Pσ_z², Pσ_z³}` with `P` the phase3 projector.
pub fn hand_built_phase_recovery(code: &QuantumCode) -> OperatorEnsemble {
    let p = code.projector();
    let mut ops = vec![p.clone()];
    for s in 0..3 {
        ops.push(p.matmul(&embed(&pauli_z(), s, 3).unwrap()).unwrap());
    }
    OperatorEnsemble::new(ops, "hand-built phase recovery", &tol()).unwrap()
}

/// The five-qubit perfect code, as the joint +1 eigenspace of the cyclic
/// shifts of `XZZXI`. Used only as an independent positive example for the
/// single-error criteria.
pub fn five_qubit_code() -> QuantumCode {
    let x = pauli_x();
    let z = pauli_z();
    let i = ComplexMatrix::identity(2);
    let word = [&x, &z, &z, &x, &i];
    let mut projector = ComplexMatrix::identity(32);
    for shift in 0..4 {
        let mut g = ComplexMatrix::identity(1);
        for site in 0..5 {
            g = g.kron(word[(site + 5 - shift) % 5]);
        }
        let half = (&ComplexMatrix::identity(32) + &g).scale_real(0.5);
        projector = projector.matmul(&half).unwrap();
    }
    let columns: Vec<Vec<C64>> = standard_basis(32).iter().map(|e| projector.mul_vec(e).unwrap()).collect();
    let basis = orthonormalize(&columns, 1e-8).unwrap().basis;
    assert_eq!(basis.len(), 2, "stabilizer space should be two-dimensional");
    QuantumCode::new(basis, Some(qubit_shape(5)), "five-qubit", &tol()).unwrap()
}

/// A (code, channel) pair with its known correctability.
pub struct CataloguedPair {
    pub label: &'static str,
    pub code: QuantumCode,
    pub channel: OperatorEnsemble,
    pub correctable: bool,
}

/// Every catalogued example used by the route-equivalence checks.
pub fn catalogued_pairs() -> Vec<CataloguedPair> {
    use qec_verify::codes::builtin_code;
    let code = |name: &str| builtin_code(name).unwrap();
    let pair = |label, code, channel, correctable| CataloguedPair {
        label,
        code,
        channel,
        correctable,
    };
    let phase5_two_errors = build_channel(
        &ChannelSpec::new(ChannelKind::PhaseFlip).param("p", 0.1).on_qubits(5).max_errors(2),
        &tol(),
    )
    .unwrap();
    let pauli_single = build_channel(
        &ChannelSpec::new(ChannelKind::PauliUnitaryBasis).on_qubits(5).max_errors(1),
        &tol(),
    )
    .unwrap();
    vec![
        pair("phase3 / one-error phase family", code("phase3"), one_error_phase_family(0.1), true),
        pair("phase3 / single phase superoperator", code("phase3"), single_phase_superoperator(0.3), true),
        pair("phase3 / scaled bit flips", code("phase3"), scaled_bit_flip_superoperator(), false),
        pair("phase3 / bit flips", code("phase3"), bit_flip_family(), false),
        pair("phase3 / independent phase flips", code("phase3"), phase_flip_power(0.1, 3), false),
        pair(
            "pair / overlap (sign-corrected)",
            code("pair"),
            channel(ChannelKind::OverlapCorrected, &[("q", 0.25)]),
            true,
        ),
        pair(
            "pair / overlap (as printed)",
            code("pair"),
            channel(ChannelKind::OverlapExample, &[("q", 0.25)]),
            false,
        ),
        pair(
            "pair / two-qubit phase damping",
            code("pair"),
            build_channel(
                &ChannelSpec::new(ChannelKind::DecoherencePmBasis).param("gamma", 0.3).on_qubits(2),
                &tol(),
            )
            .unwrap(),
            false,
        ),
        pair("trivial / identity", code("trivial"), OperatorEnsemble::identity(2), true),
        pair("trivial / depolarizing", code("trivial"), channel(ChannelKind::DepolarizingThird, &[]), false),
        pair("trivial / decoherence", code("trivial"), channel(ChannelKind::Decoherence, &[("gamma", 0.1)]), false),
        pair("phase5 / up to two phase flips", code("phase5"), phase5_two_errors, true),
        pair("five-qubit / single Pauli errors", five_qubit_code(), pauli_single, true),
    ]
}

/// Verdicts of the four correction routes: identity residual, entangled
/// state, syndrome decomposition and (complete channels only) entropy.
///
/// The first two need a recovery; they use the ungated candidate and count
/// as failed when the candidate is not a complete recovery.
pub fn route_verdicts(code: &QuantumCode, errors: &OperatorEnsemble) -> [Option<bool>; 4] {
    use qec_verify::recovery::*;
    let t = tol();
    let candidate = synthesize_candidate(code, errors, &t, SynthesisOptions::default()).unwrap();
    let complete = candidate.recovery.ensemble().completeness_residual() < t.structure;
    let identity = complete && verify_recovery(code, errors, &candidate.recovery, &t).unwrap().passed;
    let comp = composite(errors, &candidate.recovery).unwrap();
    let entangled = complete && entangled_state_test(code, &comp, &t).unwrap().passed;
    let decomposition = syndrome_decomposition_ungated(code, errors, &t).unwrap().valid;
    let entropy = errors
        .is_superoperator()
        .then(|| entropy_test(code, errors, &t).unwrap().passed);
    [Some(identity), Some(entangled), Some(decomposition), entropy]
}
