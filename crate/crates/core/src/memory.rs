//! Iterated noise/recovery cycles on a stored code state.

use serde::{Deserialize, Serialize};

use crate::channels::{build_channel, ChannelKind, ChannelSpec, OperatorEnsemble};
use crate::codes::{repetition_phase_code, trivial_code, QuantumCode};
use crate::fidelity::optimize::grid_refine;
use crate::fidelity::{independent_error_bound, min_fidelity, FidelityConfig};
use crate::linalg::{inner, ComplexMatrix, DensityMatrix, PureState};
use crate::recovery::{synthesize_recovery, RecoveryOperator, SynthesisOptions};
use crate::{Error, Result, Tolerances, C64, MAX_DIM};

/// Largest number of cycles in one run.
pub const MAX_CYCLES: usize = 10_000;
/// Largest coding-space dimension for trajectory runs.
pub const MAX_MEMORY_DIM: usize = MAX_DIM / 2;

/// Independent-error parameters for the compounded bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    /// Qubits.
    pub r: usize,
    /// Errors corrected.
    pub e: usize,
    /// Per-qubit error probability.
    pub p: f64,
}

/// Optional extras for [`run_memory`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MemoryOptions {
    /// Also record the worst case over all code states at every cycle
    /// (codes of dimension at most two).
    pub worst_case: bool,
    /// Attach the compounded independent-error bound curve.
    pub bound: Option<BoundParameters>,
    /// Grid settings for the worst-case minimization.
    pub fidelity: FidelityConfig,
}

/// One stored-state trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryRun {
    pub cycles: usize,
    /// `⟨ψ₀|ρ_t|ψ₀⟩` for `t = 0..=cycles`.
    pub per_cycle_fidelity: Vec<f64>,
    /// Worst case over code states of the `t`-cycle fidelity, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_case_fidelity: Option<Vec<f64>>,
    pub initial_state: PureState,
    pub channel: String,
    pub recovery: String,
    /// `b^t` with `b` the single-cycle independent-error bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_curve: Option<Vec<f64>>,
    /// Describes the status of `bound_curve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_note: Option<String>,
    /// `max_t |tr ρ_t − 1|`
    pub max_trace_deviation: f64,
    /// `min_t λ_min(ρ_t)`
    pub min_eigenvalue: f64,
    /// Whether the fidelity never increased (recorded, not required).
    pub monotone_non_increasing: bool,
}

/// Label attached to every compounded bound curve.
pub const BOUND_NOTE: &str =
    "heuristic: the single-cycle bound compounded per cycle; only the cycle-1 value is guaranteed";

/// `Σ_a A_a M A_a†` for an arbitrary (not necessarily Hermitian) `M`.
fn apply_to_operator(e: &OperatorEnsemble, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for a in e.operators() {
        out = &out + &a.matmul(m)?.matmul(&a.adjoint())?;
    }
    Ok(out)
}

/// `b^t` for `t = 0..=cycles`, with `b` the independent-error bound.
/// Only `t ≤ 1` is a proven bound; later values are a heuristic.
pub fn bound_trajectory(r: usize, e: usize, p: f64, cycles: usize) -> Result<Vec<f64>> {
    check_cycles(cycles)?;
    let b = independent_error_bound(r, e, p)?;
    Ok((0..=cycles).map(|t| b.powi(t as i32)).collect())
}

fn check_cycles(cycles: usize) -> Result<()> {
    if cycles > MAX_CYCLES {
        return Err(Error::Capacity {
            what: "cycles",
            requested: cycles,
            limit: MAX_CYCLES,
        });
    }
    Ok(())
}

/// Track `ρ_{t+1} = R(A(ρ_t))` from `ρ₀ = |ψ₀⟩⟨ψ₀|`.
pub fn run_memory(
    code: &QuantumCode,
    channel: &OperatorEnsemble,
    recovery: &RecoveryOperator,
    initial: &PureState,
    cycles: usize,
    options: &MemoryOptions,
    tol: &Tolerances,
) -> Result<MemoryRun> {
    check_cycles(cycles)?;
    let n = code.n();
    if n > MAX_MEMORY_DIM {
        return Err(Error::Capacity {
            what: "trajectory dimension",
            requested: n,
            limit: MAX_MEMORY_DIM,
        });
    }
    for dim in [channel.dim(), recovery.dim(), initial.dim()] {
        if dim != n {
            return Err(Error::DimensionMismatch { expected: n, found: dim });
        }
    }
    channel.require_superoperator(tol)?;
    recovery.ensemble().require_superoperator(tol)?;
    let residual = code.distance_from_code(initial.amplitudes())?;
    if residual > tol.norm {
        return Err(Error::NotInCode { residual });
    }
    if options.worst_case && code.k() > 2 {
        return Err(Error::param("worst_case", "per-cycle worst case needs a code of dimension at most two"));
    }

    let psi = initial.amplitudes();
    let mut rho = initial.projector();
    let mut fidelities = Vec::with_capacity(cycles + 1);
    let mut max_trace_deviation = 0.0f64;
    let mut min_eigenvalue = f64::INFINITY;
    let record = |rho: &DensityMatrix, fid: &mut Vec<f64>, dev: &mut f64, min_eig: &mut f64| {
        fid.push(inner(psi, &rho.matrix().mul_vec(psi).expect("code-sized")).re);
        *dev = dev.max((rho.trace() - 1.0).abs());
        *min_eig = min_eig.min(rho.min_eigenvalue());
    };
    record(&rho, &mut fidelities, &mut max_trace_deviation, &mut min_eigenvalue);

    // Images of the logical operators |i_L⟩⟨j_L| for the worst case.
    let mut logical_ops: Option<Vec<Vec<ComplexMatrix>>> = options.worst_case.then(|| {
        (0..code.k())
            .map(|i| (0..code.k()).map(|j| ComplexMatrix::outer(code.logical(i), code.logical(j))).collect())
            .collect()
    });
    let mut worst = options.worst_case.then(|| vec![1.0]);

    for _ in 0..cycles {
        rho = recovery.ensemble().apply(&channel.apply(&rho)?)?;
        record(&rho, &mut fidelities, &mut max_trace_deviation, &mut min_eigenvalue);
        if let (Some(ops), Some(w)) = (logical_ops.as_mut(), worst.as_mut()) {
            for row in ops.iter_mut() {
                for m in row.iter_mut() {
                    *m = apply_to_operator(recovery.ensemble(), &apply_to_operator(channel, m)?)?;
                }
            }
            w.push(worst_case_of_images(code, ops, &options.fidelity)?);
        }
    }

    let monotone_non_increasing = fidelities.windows(2).all(|p| p[1] <= p[0] + tol.verify);
    let (bound_curve, bound_note) = match options.bound {
        Some(b) => (Some(bound_trajectory(b.r, b.e, b.p, cycles)?), Some(BOUND_NOTE.to_string())),
        None => (None, None),
    };
    Ok(MemoryRun {
        cycles,
        per_cycle_fidelity: fidelities,
        worst_case_fidelity: worst,
        initial_state: initial.clone(),
        channel: channel.label().to_string(),
        recovery: recovery.ensemble().label().to_string(),
        bound_curve,
        bound_note,
        max_trace_deviation,
        min_eigenvalue,
        monotone_non_increasing,
    })
}

/// `min_c ⟨ψ_c|Φ^t(|ψ_c⟩⟨ψ_c|)|ψ_c⟩` from the images `X_ij = Φ^t(|i_L⟩⟨j_L|)`.
fn worst_case_of_images(code: &QuantumCode, images: &[Vec<ComplexMatrix>], cfg: &FidelityConfig) -> Result<f64> {
    let w = code.isometry();
    let restricted: Vec<Vec<ComplexMatrix>> = images
        .iter()
        .map(|row| row.iter().map(|x| w.adjoint_mul(&x.matmul(&w)?)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let k = code.k();
    let value = |c: &[C64]| -> f64 {
        let mut total = C64::new(0.0, 0.0);
        for i in 0..k {
            for j in 0..k {
                let y = &restricted[i][j];
                total += c[i] * c[j].conj() * inner(c, &y.mul_vec(c).expect("code-sized"));
            }
        }
        total.re
    };
    if k == 1 {
        return Ok(value(&[C64::new(1.0, 0.0)]));
    }
    let ext = grid_refine(&value, cfg);
    Ok(value(&ext.coefficients))
}

/// The `m`-qubit phase repetition code with its recovery for
/// `(m − 1)/2` phase errors, under independent per-qubit decoherence.
#[derive(Debug, Clone)]
pub struct PhaseCodeScheme {
    pub code: QuantumCode,
    /// Full per-qubit decoherence on all `m` qubits.
    pub channel: OperatorEnsemble,
    pub recovery: RecoveryOperator,
}

/// Build the phase-code memory scheme for `m` qubits (odd, at most 7).
pub fn phase_code_scheme(m: usize, gamma: f64, tol: &Tolerances) -> Result<PhaseCodeScheme> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", "must be finite and non-negative"));
    }
    let code = repetition_phase_code(m)?;
    let spec = ChannelSpec::new(ChannelKind::DecoherencePmBasis).param("gamma", gamma).on_qubits(m);
    let channel = build_channel(&spec, tol)?;
    let family = build_channel(&spec.max_errors((m - 1) / 2), tol)?;
    let recovery = synthesize_recovery(&code, &family, tol, SynthesisOptions::default())?;
    Ok(PhaseCodeScheme { code, channel, recovery })
}

/// Coded (three-qubit phase code) against bare-qubit worst-case trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryComparison {
    pub gamma: f64,
    pub cycles: usize,
    /// Worst-case fidelity of the coded memory after `t` cycles.
    pub coded: Vec<f64>,
    /// Worst-case fidelity of a bare qubit after `t` cycles.
    pub uncoded: Vec<f64>,
    /// `coded[t] ≥ uncoded[t]` for every cycle.
    pub coded_dominates: bool,
    /// First cycle at which the bare qubit did better, if any.
    pub first_uncoded_advantage: Option<usize>,
}

/// Run the three-qubit phase code with its synthesized recovery against a
/// bare qubit, both under decoherence `γ`, and compare worst cases.
pub fn compare_coded_uncoded(gamma: f64, cycles: usize, tol: &Tolerances) -> Result<MemoryComparison> {
    let scheme = phase_code_scheme(3, gamma, tol)?;
    let options = MemoryOptions {
        worst_case: true,
        ..MemoryOptions::default()
    };
    let plus = scheme.code.state(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)].map(|x| x / 2f64.sqrt()), tol)?;
    let coded = run_memory(&scheme.code, &scheme.channel, &scheme.recovery, &plus, cycles, &options, tol)?;

    let qubit = trivial_code(2)?;
    let bare = build_channel(&ChannelSpec::new(ChannelKind::Decoherence).param("gamma", gamma), tol)?;
    let bare_plus = qubit.state(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)].map(|x| x / 2f64.sqrt()), tol)?;
    let uncoded = run_memory(&qubit, &bare, &RecoveryOperator::identity(2), &bare_plus, cycles, &options, tol)?;

    let coded = coded.worst_case_fidelity.expect("requested");
    let uncoded = uncoded.worst_case_fidelity.expect("requested");
    let first_uncoded_advantage = coded.iter().zip(&uncoded).position(|(c, u)| c + tol.verify < *u);
    Ok(MemoryComparison {
        gamma,
        cycles,
        coded_dominates: first_uncoded_advantage.is_none(),
        first_uncoded_advantage,
        coded,
        uncoded,
    })
}

/// Least-squares fit `1 − F ≈ C γ^s` of single-cycle phase-code infidelity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub qubits: usize,
    /// `(γ, 1 − F_min)` samples.
    pub points: Vec<(f64, f64)>,
    /// Fitted exponent `s`.
    pub exponent: f64,
    /// Fitted constant `C`.
    pub constant: f64,
}

/// Fit the small-`γ` scaling of the worst-case infidelity of the
/// `m`-qubit phase code with its recovery, on a log-log scale.
pub fn fit_infidelity_exponent(m: usize, gammas: &[f64], cfg: &FidelityConfig, tol: &Tolerances) -> Result<ExponentFit> {
    if gammas.len() < 2 || gammas.iter().any(|&g| !(g > 0.0)) {
        return Err(Error::param("gammas", "need at least two positive values"));
    }
    let mut points = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let scheme = phase_code_scheme(m, g, tol)?;
        let comp = crate::recovery::composite(&scheme.channel, &scheme.recovery)?;
        let f = min_fidelity(&scheme.code, &comp, cfg)?.value;
        points.push((g, 1.0 - f));
    }
    if points.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::Numerical("infidelity vanished; choose larger γ".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    Ok(ExponentFit {
        qubits: m,
        points,
        exponent,
        constant: (my - exponent * mx).exp(),
    })
}
