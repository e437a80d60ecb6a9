mod common;

use common::*;
use qec_verify::channels::{embed, pauli_x, ChannelKind, OperatorEnsemble};
use qec_verify::codes::{builtin_code, kl_check, QuantumCode};
use qec_verify::linalg::eigen::hermitian_eigenvalues;
use qec_verify::linalg::random::{random_unit_vector, rng};
use qec_verify::linalg::{basis_vector, inner, kron_vec, norm, ComplexMatrix, DensityMatrix};
use qec_verify::recovery::*;
use qec_verify::{Error, C64};

fn synthesize(code: &QuantumCode, errors: &OperatorEnsemble) -> RecoveryOperator {
    synthesize_recovery(code, errors, &tol(), SynthesisOptions::default()).unwrap()
}

/// Unit vector `e^{iφ}` with `a ≈ e^{iφ} b`, and the residual `‖a − e^{iφ} b‖_max`.
fn phase_match(a: &ComplexMatrix, b: &ComplexMatrix) -> (f64, f64) {
    let num: C64 = b.entries().iter().zip(a.entries()).map(|(x, y)| x.conj() * y).sum();
    let den: f64 = b.entries().iter().map(|x| x.norm_sqr()).sum();
    let phase = num / den;
    let residual = a.max_abs_diff(&b.scale(phase));
    (phase.norm(), residual)
}

#[test]
fn phase_code_recovery_matches_hand_built_elements() {
    let code = builtin_code("phase3").unwrap();
    let errors = one_error_phase_family(0.1);
    let rec = synthesize(&code, &errors);
    assert_eq!(rec.syndrome_dim(), 4);
    assert_eq!(rec.complement_dim(), 0);
    let ops = rec.ensemble().operators();
    assert_eq!(ops.len(), 5);
    assert!(ops[0].max_abs() < 1e-12, "nothing is left unreached");
    let hand = hand_built_phase_recovery(&code);
    for (r, expected) in hand.operators().iter().enumerate() {
        let (modulus, residual) = phase_match(&ops[r + 1], expected);
        assert!((modulus - 1.0).abs() < 1e-12 && residual < 1e-12, "element {r}: {modulus} {residual}");
    }
    let report = verify_recovery(&code, &errors, &rec, &tol()).unwrap();
    assert!(report.passed && report.max_identity_residual < 1e-9, "{report:?}");
}

#[test]
fn hand_built_phase_recovery_verifies() {
    let code = builtin_code("phase3").unwrap();
    let hand = RecoveryOperator::new(hand_built_phase_recovery(&code), 4, 0, &tol()).unwrap();
    let report = verify_recovery(&code, &one_error_phase_family(0.1), &hand, &tol()).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn overlap_recovery_reproduces_the_two_element_partition() {
    let code = builtin_code("pair").unwrap();
    let errors = channel(ChannelKind::OverlapCorrected, &[("q", 0.25)]);
    let rec = synthesize(&code, &errors);
    assert_eq!((rec.syndrome_dim(), rec.complement_dim()), (2, 0));
    let ops = rec.ensemble().operators();
    let ket = |i| basis_vector(4, i);
    let r0 = &ComplexMatrix::outer(&ket(0), &ket(0)) + &ComplexMatrix::outer(&ket(3), &ket(3));
    let r1 = &ComplexMatrix::outer(&ket(0), &ket(2)) + &ComplexMatrix::outer(&ket(3), &ket(1));
    assert!(ops[0].max_abs() < 1e-12);
    assert!(ops[1].max_abs_diff(&r0) < 1e-12);
    assert!(ops[2].max_abs_diff(&r1) < 1e-12);
    assert!(verify_recovery(&code, &errors, &rec, &tol()).unwrap().max_identity_residual < 1e-9);
}

#[test]
fn printed_overlap_channel_is_refused() {
    let code = builtin_code("pair").unwrap();
    let errors = channel(ChannelKind::OverlapExample, &[("q", 0.25)]);
    match synthesize_recovery(&code, &errors, &tol(), SynthesisOptions::default()) {
        Err(Error::NotCorrectable(report)) => assert!(report.max_diag_violation > 0.1),
        other => panic!("unexpected {other:?}"),
    }
    // The two-element recovery built from the printed images leaves a logical
    // phase flip: R₀A₂ acts as √(q/2)·Z on the code.
    let candidate = synthesize_candidate(&code, &errors, &tol(), SynthesisOptions::default()).unwrap();
    assert_eq!(candidate.syndrome_dim(), 2);
    let report = verify_recovery(&code, &errors, &candidate.recovery, &tol()).unwrap();
    assert!(report.max_identity_residual > 0.1);
}

#[test]
fn trivial_code_with_identity_noise() {
    let code = builtin_code("trivial").unwrap();
    let errors = OperatorEnsemble::identity(2);
    let rec = synthesize(&code, &errors);
    let ops = rec.ensemble().operators();
    assert_eq!(ops.len(), 2);
    assert_eq!(ops[0].max_abs(), 0.0);
    assert!(ops[1].max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    let report = verify_recovery(&code, &errors, &rec, &tol()).unwrap();
    assert!(report.passed);
    assert!((report.lambda_values[(1, 0)] - c(1.0)).norm() < 1e-15);
}

#[test]
fn identity_recovery_with_identity_noise_on_any_code() {
    for name in ["phase3", "pair", "trivial(3)"] {
        let code = builtin_code(name).unwrap();
        let report = verify_recovery(
            &code,
            &OperatorEnsemble::identity(code.n()),
            &RecoveryOperator::identity(code.n()),
            &tol(),
        )
        .unwrap();
        assert!(report.passed);
        assert!((report.lambda_values[(0, 0)] - c(1.0)).norm() < 1e-15);
    }
}

#[test]
fn uncorrectable_input_is_refused_with_the_condition_report() {
    let code = builtin_code("phase3").unwrap();
    match synthesize_recovery(&code, &bit_flip_family(), &tol(), SynthesisOptions::default()) {
        Err(Error::NotCorrectable(report)) => {
            assert!(!report.passed);
            assert!(report.witness.is_some());
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        syndrome_decomposition(&code, &bit_flip_family(), &tol()),
        Err(Error::NotCorrectable(_))
    ));
}

#[test]
fn recovered_states_are_scaled_copies_of_random_code_states() {
    let code = builtin_code("phase3").unwrap();
    let errors = one_error_phase_family(0.2);
    let candidate = synthesize_candidate(&code, &errors, &tol(), SynthesisOptions::default()).unwrap();
    let beta = &candidate.syndrome_coefficients;
    let ops = candidate.recovery.ensemble().operators();
    let mut g = rng(25);
    for _ in 0..20 {
        let psi = code.encode(&random_unit_vector(&mut g, 2)).unwrap();
        for (a, err) in errors.operators().iter().enumerate() {
            let damaged = err.mul_vec(&psi).unwrap();
            for r in 0..candidate.syndrome_dim() {
                let out = ops[r + 1].mul_vec(&damaged).unwrap();
                let diff: Vec<C64> = out.iter().zip(&psi).map(|(o, p)| o - beta[(r, a)] * p).collect();
                assert!(norm(&diff) < 1e-8);
            }
        }
    }
}

#[test]
fn complete_correctable_channels_are_inverted_with_unit_weight() {
    for entry in catalogued_pairs() {
        if !(entry.correctable && entry.channel.is_superoperator()) {
            continue;
        }
        let rec = synthesize(&entry.code, &entry.channel);
        let report = verify_recovery(&entry.code, &entry.channel, &rec, &tol()).unwrap();
        assert!((report.lambda_weight - 1.0).abs() < 1e-9, "{}: {}", entry.label, report.lambda_weight);
    }
}

#[test]
fn synthesized_recoveries_are_complete_and_factor_into_unitary_times_projection() {
    for entry in catalogued_pairs().into_iter().filter(|e| e.correctable) {
        let rec = synthesize(&entry.code, &entry.channel);
        assert!(rec.ensemble().completeness_residual() < 1e-9, "{}", entry.label);
        for r in 1..rec.ensemble().len() {
            let (v, p) = factor_element(&entry.code, &rec, r, &tol()).unwrap();
            assert!(v.unitarity_residual() < 1e-10);
            assert!(p.hermiticity_residual() < 1e-12);
            assert!(p.matmul(&p).unwrap().max_abs_diff(&p) < 1e-10);
            let product = v.matmul(&p).unwrap();
            assert!(product.max_abs_diff(&rec.ensemble().operators()[r]) < 1e-10, "{}", entry.label);
        }
        // the leading element is the projection onto the unreached complement
        let o = &rec.ensemble().operators()[0];
        assert!(o.matmul(o).unwrap().max_abs_diff(o) < 1e-10);
        let rank: f64 = o.trace().re;
        assert!((rank - rec.complement_dim() as f64).abs() < 1e-9);
    }
}

#[test]
fn different_basis_seeds_give_equally_valid_recoveries() {
    let code = builtin_code("phase5").unwrap();
    let two = qec_verify::channels::e_error_family(&channel(ChannelKind::PhaseFlip, &[("p", 0.05)]), 5, 2).unwrap();
    let plain = synthesize(&code, &two);
    let mut reports = vec![verify_recovery(&code, &two, &plain, &tol()).unwrap()];
    let mut recoveries = vec![plain];
    for seed in [1u64, 2] {
        let rec = synthesize_recovery(&code, &two, &tol(), SynthesisOptions { basis_seed: Some(seed) }).unwrap();
        reports.push(verify_recovery(&code, &two, &rec, &tol()).unwrap());
        recoveries.push(rec);
    }
    let first = |rec: &RecoveryOperator| rec.ensemble().operators()[1].clone();
    assert!(first(&recoveries[0]).max_abs_diff(&first(&recoveries[1])) > 1e-3, "seeded basis should differ");
    for r in &reports {
        assert!(r.passed);
        assert!((r.max_identity_residual - reports[0].max_identity_residual).abs() < 1e-12);
        assert!((r.lambda_weight - reports[0].lambda_weight).abs() < 1e-12);
    }
    // identical channel action on random code states
    let mut g = rng(7);
    for _ in 0..5 {
        let psi = code.encode(&random_unit_vector(&mut g, 2)).unwrap();
        let rho = DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&psi, &psi), None).unwrap();
        let outs: Vec<ComplexMatrix> = recoveries
            .iter()
            .map(|rec| composite(&two, rec).unwrap().apply(&rho).unwrap().into_matrix())
            .collect();
        assert!(outs[0].max_abs_diff(&outs[1]) < 1e-12);
        assert!(outs[0].max_abs_diff(&outs[2]) < 1e-12);
    }
}

#[test]
fn entangled_state_examples() {
    let phase3 = builtin_code("phase3").unwrap();
    let errors = one_error_phase_family(0.1);
    let comp = composite(&errors, &synthesize(&phase3, &errors)).unwrap();
    assert!(entangled_state_test(&phase3, &comp, &tol()).unwrap().passed);

    let pair = builtin_code("pair").unwrap();
    let id = entangled_state_test(&pair, &OperatorEnsemble::identity(4), &tol()).unwrap();
    assert!(id.passed);
    assert!((id.lambdas[0] - c(1.0)).norm() < 1e-15);

    let flip = OperatorEnsemble::new(vec![embed(&pauli_x(), 0, 2).unwrap()], "X on qubit 0", &tol()).unwrap();
    let report = entangled_state_test(&pair, &flip, &tol()).unwrap();
    assert!(!report.passed);
    assert!(report.lambdas[0].norm() < 1e-15);
    assert!((report.max_residual - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn entangled_state_test_agrees_with_full_tensor_oracle() {
    // Build (I⊗B)Φ in the n²-dimensional space directly.
    let code = builtin_code("pair").unwrap();
    let errors = channel(ChannelKind::OverlapExample, &[("q", 0.2)]);
    let candidate = synthesize_candidate(&code, &errors, &tol(), SynthesisOptions::default()).unwrap();
    let comp = composite(&errors, &candidate.recovery).unwrap();
    let report = entangled_state_test(&code, &comp, &tol()).unwrap();
    let phi: Vec<C64> = code
        .basis()
        .iter()
        .map(|v| kron_vec(v, v))
        .fold(vec![c(0.0); 16], |acc, x| acc.iter().zip(&x).map(|(a, b)| a + b).collect());
    let mut worst = 0.0f64;
    for (b, l) in comp.operators().iter().zip(&report.lambdas) {
        let big = ComplexMatrix::identity(4).kron(b);
        let image = big.mul_vec(&phi).unwrap();
        let lam = inner(&phi, &image) / inner(&phi, &phi);
        assert!((lam - l).norm() < 1e-12);
        let diff: Vec<C64> = image.iter().zip(&phi).map(|(x, y)| x - lam * y).collect();
        worst = worst.max(norm(&diff));
    }
    assert!((worst - report.max_residual).abs() < 1e-12);
}

#[test]
fn syndrome_decomposition_examples() {
    let d = syndrome_decomposition(&builtin_code("phase3").unwrap(), &one_error_phase_family(0.1), &tol()).unwrap();
    assert_eq!((d.syndrome_dim, d.complement_dim, d.perfect), (4, 0, true));
    assert!(d.valid && d.iso_map.unitarity_residual() < 1e-12);

    let d = syndrome_decomposition(
        &builtin_code("pair").unwrap(),
        &channel(ChannelKind::OverlapCorrected, &[("q", 0.25)]),
        &tol(),
    )
    .unwrap();
    assert_eq!((d.syndrome_dim, d.complement_dim, d.perfect), (2, 0, true));
    assert!(d.valid);

    let d = syndrome_decomposition(&builtin_code("trivial").unwrap(), &OperatorEnsemble::identity(2), &tol()).unwrap();
    assert_eq!((d.syndrome_dim, d.complement_dim), (1, 0));
    assert_eq!(d.syndrome_vectors.len(), 1);
    assert!((d.syndrome_vectors[0][0] - c(1.0)).norm() < 1e-15);

    // a code that leaves part of the space unreached
    let d = syndrome_decomposition(&builtin_code("phase3").unwrap(), &OperatorEnsemble::identity(8), &tol()).unwrap();
    assert_eq!((d.syndrome_dim, d.complement_dim, d.perfect), (1, 6, false));
    assert!(d.valid);
}

#[test]
fn syndrome_map_reproduces_every_error_action() {
    let code = builtin_code("phase5").unwrap();
    let errors = qec_verify::channels::e_error_family(&channel(ChannelKind::PhaseFlip, &[("p", 0.1)]), 5, 2).unwrap();
    let d = syndrome_decomposition(&code, &errors, &tol()).unwrap();
    let s = d.syndrome_dim;
    let mut g = rng(3);
    for _ in 0..5 {
        let coeffs = random_unit_vector(&mut g, 2);
        let psi = code.encode(&coeffs).unwrap();
        for (a, err) in errors.operators().iter().enumerate() {
            // σ(|Ψ⟩ ⊗ |E(a)⟩) with |Ψ⟩ in logical coordinates
            let mut abstract_vec = vec![c(0.0); code.n()];
            for (i, ci) in coeffs.iter().enumerate() {
                for r in 0..s {
                    abstract_vec[i * s + r] = ci * d.syndrome_vectors[a][r];
                }
            }
            let via_sigma = d.iso_map.mul_vec(&abstract_vec).unwrap();
            let direct = err.mul_vec(&psi).unwrap();
            let diff: Vec<C64> = via_sigma.iter().zip(&direct).map(|(x, y)| x - y).collect();
            assert!(norm(&diff) < 1e-10);
        }
    }
}

/// Entropy of `Σ_v |v⟩⟨v|` by full eigendecomposition of the outer sum.
fn entropy_oracle(vectors: &[Vec<C64>]) -> f64 {
    let n = vectors[0].len();
    let mut m = ComplexMatrix::zeros(n, n);
    for v in vectors {
        m = &m + &ComplexMatrix::outer(v, v);
    }
    hermitian_eigenvalues(&m)
        .into_iter()
        .filter(|&l| l > 1e-14)
        .map(|l| -l * l.log2())
        .sum()
}

fn entropy_oracle_difference(code: &QuantumCode, errors: &OperatorEnsemble) -> f64 {
    let k = code.k() as f64;
    let mut averaged = Vec::new();
    let mut joint = Vec::new();
    for a in errors.operators() {
        let mut e = vec![c(0.0); code.k() * code.n()];
        for (i, v) in code.basis().iter().enumerate() {
            let img = a.mul_vec(v).unwrap();
            averaged.push(img.iter().map(|x| x / k.sqrt()).collect::<Vec<_>>());
            let reference = basis_vector(code.k(), i);
            for (slot, x) in e.iter_mut().zip(kron_vec(&reference, &img)) {
                *slot += x / k.sqrt();
            }
        }
        joint.push(e);
    }
    entropy_oracle(&averaged) - entropy_oracle(&joint)
}

#[test]
fn entropy_identity_examples() {
    let phase3 = builtin_code("phase3").unwrap();
    let report = entropy_test(&phase3, &single_phase_superoperator(0.3), &tol()).unwrap();
    assert!(report.passed && (report.difference_bits - 1.0).abs() < 1e-6, "{report:?}");

    let trivial = builtin_code("trivial").unwrap();
    let report = entropy_test(&trivial, &OperatorEnsemble::identity(2), &tol()).unwrap();
    assert!((report.code_average_entropy - 1.0).abs() < 1e-12);
    assert!(report.joint_entropy.abs() < 1e-12);
    assert!(report.passed);

    let pair = builtin_code("pair").unwrap();
    let damping = qec_verify::channels::tensor_power(&channel(ChannelKind::DecoherencePmBasis, &[("gamma", 0.3)]), 2).unwrap();
    let report = entropy_test(&pair, &damping, &tol()).unwrap();
    assert!(!report.passed && report.difference_bits < 1.0 - 1e-3, "{report:?}");
    assert!((report.difference_bits - entropy_oracle_difference(&pair, &damping)).abs() < 1e-10);
}

#[test]
fn entropy_identity_refuses_incomplete_channels() {
    let phase3 = builtin_code("phase3").unwrap();
    assert!(matches!(
        entropy_test(&phase3, &one_error_phase_family(0.1), &tol()),
        Err(Error::NotSuperoperator { .. })
    ));
}

#[test]
fn entropy_identity_matches_oracle_across_catalogue() {
    for entry in catalogued_pairs().into_iter().filter(|e| e.channel.is_superoperator()) {
        let report = entropy_test(&entry.code, &entry.channel, &tol()).unwrap();
        let oracle = entropy_oracle_difference(&entry.code, &entry.channel);
        assert!((report.difference_bits - oracle).abs() < 1e-9, "{}", entry.label);
    }
}

/// Verdicts of every available route; `None` where the route does not apply.
#[test]
fn all_routes_agree_on_catalogued_pairs() {
    for entry in catalogued_pairs() {
        let kl = kl_check(&entry.code, &entry.channel, tol().kl).unwrap().passed;
        assert_eq!(kl, entry.correctable, "{}", entry.label);
        for verdict in route_verdicts(&entry.code, &entry.channel).into_iter().flatten() {
            assert_eq!(verdict, kl, "{}", entry.label);
        }
    }
}

#[test]
fn recovery_json_round_trip_is_bit_exact() {
    let code = builtin_code("pair").unwrap();
    let rec = synthesize(&code, &channel(ChannelKind::OverlapCorrected, &[("q", 0.3)]));
    let text = rec.to_json();
    let back = RecoveryOperator::from_json(&text, &tol()).unwrap();
    assert_eq!(back.ensemble().operators(), rec.ensemble().operators());
    assert_eq!((back.syndrome_dim(), back.complement_dim()), (2, 0));
    assert_eq!(back.to_json(), text);
}

#[test]
fn incomplete_recovery_files_are_rejected() {
    let text = r#"{"kind":"explicit","operators":[[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]],"syndrome_dim":1,"complement_dim":0}"#;
    assert!(matches!(
        RecoveryOperator::from_json(text, &tol()),
        Err(Error::NotSuperoperator { .. })
    ));
}
