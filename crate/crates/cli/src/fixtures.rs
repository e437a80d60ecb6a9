//! Built-in fixture files: every catalogued code and channel, runnable
//! without authoring any JSON. The files under `fixtures/` are generated
//! from [`generate`]; a test keeps them in sync.

use qec_verify::channels::{embed, pauli_x, pauli_z, ChannelKind, ChannelSpec};
use qec_verify::codes::builtin_code;
use qec_verify::linalg::ComplexMatrix;

/// Code fixtures: (file stem, builtin name).
pub const CODE_FIXTURES: [(&str, &str); 4] = [
    ("phase3", "phase3"),
    ("phase5", "phase5"),
    ("pair", "pair"),
    ("trivial", "trivial"),
];

fn spec(kind: ChannelKind) -> ChannelSpec {
    ChannelSpec::new(kind)
}

fn three_qubit_ops(single: &ComplexMatrix, weight: f64, identity_weight: f64) -> Vec<ComplexMatrix> {
    let mut ops = vec![ComplexMatrix::identity(8).scale_real(identity_weight)];
    for s in 0..3 {
        ops.push(embed(single, s, 3).expect("three sites").scale_real(weight));
    }
    ops
}

/// Channel fixtures: (file stem, spec).
pub fn channel_fixtures() -> Vec<(&'static str, ChannelSpec)> {
    use ChannelKind::*;
    let q = 0.3f64;
    let with_label = |mut s: ChannelSpec, label: &str| {
        s.label = Some(label.to_string());
        s
    };
    vec![
        (
            "phase_errors",
            with_label(
                spec(DecoherencePmBasis).param("gamma", 0.1).on_qubits(3).max_errors(1),
                "one-error phase family on three qubits",
            ),
        ),
        (
            "phase_superop",
            ChannelSpec::explicit(
                three_qubit_ops(&pauli_z(), (q / 3.0).sqrt(), (1.0 - q).sqrt()),
                "single phase flips on three qubits (complete)",
            ),
        ),
        ("bitflip", ChannelSpec::explicit(three_qubit_ops(&pauli_x(), 1.0, 1.0), "single bit flips on three qubits")),
        (
            "decoherence3",
            with_label(spec(DecoherencePmBasis).param("gamma", 0.1).on_qubits(3), "phase damping on three qubits"),
        ),
        (
            "phase_flip3",
            with_label(spec(PhaseFlip).param("p", 0.1).on_qubits(3), "independent phase flips on three qubits"),
        ),
        ("overlap", spec(OverlapExample).param("q", 0.25)),
        ("overlap_corrected", spec(OverlapCorrected).param("q", 0.25)),
        ("decoherence", spec(Decoherence).param("gamma", 0.1)),
        ("decoherence_pm", spec(DecoherencePmBasis).param("gamma", 0.1)),
        ("spontaneous_emission", spec(SpontaneousEmission).param("p", 0.1)),
        ("amplitude_damping", spec(AmplitudeDamping).param("p", 0.1)),
        ("phase_flip", spec(PhaseFlip).param("p", 0.1)),
        ("depolarizing", spec(DepolarizingThird)),
        ("pauli_basis", spec(PauliUnitaryBasis)),
        ("measurement_basis", spec(MeasurementBasis)),
        ("identity", ChannelSpec::explicit(vec![ComplexMatrix::identity(2)], "identity")),
    ]
}

/// Every fixture as (file name, contents).
pub fn generate() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (stem, name) in CODE_FIXTURES {
        let code = builtin_code(name).expect("builtin code");
        out.push((format!("{stem}.code.json"), code.to_json() + "\n"));
    }
    for (stem, s) in channel_fixtures() {
        out.push((format!("{stem}.channel.json"), s.to_json() + "\n"));
    }
    out
}

/// Contents of the channel fixture `stem`, if one exists.
pub fn channel_fixture(stem: &str) -> Option<ChannelSpec> {
    channel_fixtures().into_iter().find(|(s, _)| *s == stem).map(|(_, s)| s)
}
