use serde::{Deserialize, Serialize};

use super::operator::RecoveryOperator;
use crate::channels::OperatorEnsemble;
use crate::codes::{code_images, QuantumCode};
use crate::linalg::eigen::{entropy_of_spectrum, spectrum_of_rank_one_sum};
use crate::linalg::{inner, norm, ComplexMatrix};
use crate::{Error, Result, Tolerances, C64};

/// Which characterization of correction produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationRoute {
    /// Every `R_r A_a` acts as `λ_{ra} I` on the code.
    IdentityResidual,
    /// `(I ⊗ B_m) Σ_i |i_L⟩|i_L⟩ ∝ Σ_i |i_L⟩|i_L⟩` for every composite element.
    EntangledState,
    /// A unitary `σ` with `A_a|Ψ⟩ = σ(|Ψ⟩ ⊗ |E(a)⟩)` exists.
    SyndromeDecomposition,
    /// `S(ρ̄) − S(ρ) = log₂ k`.
    EntropyIdentity,
}

/// Outcome of [`verify_recovery`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub route: VerificationRoute,
    /// `λ_{ra} = ⟨0_L|R_r A_a|0_L⟩` (rows: recovery elements, columns: errors).
    pub lambda_values: ComplexMatrix,
    /// `max_{r,a,i} ‖(R_r A_a − λ_{ra}) |i_L⟩‖`
    pub max_identity_residual: f64,
    /// `(r, a, i)` attaining the residual.
    pub witness: Option<(usize, usize, usize)>,
    /// `Σ_{r,a} |λ_{ra}|²`; equals 1 when a complete channel is inverted on the code.
    pub lambda_weight: f64,
    pub tolerance: f64,
}

/// Check that the composite `{R_r A_a}` is a multiple of the identity on the
/// code, element by element.
///
/// `λ_{ra}` is read off `|0_L⟩` and then required on every logical basis
/// state; nothing is averaged.
pub fn verify_recovery(
    code: &QuantumCode,
    errors: &OperatorEnsemble,
    recovery: &RecoveryOperator,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if recovery.dim() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: recovery.dim(),
        });
    }
    let images = code_images(code, errors)?;
    let rec_ops = recovery.ensemble().operators();
    let mut lambda = ComplexMatrix::zeros(rec_ops.len(), errors.len());
    let mut worst = 0.0f64;
    let mut witness = None;
    for (r, op) in rec_ops.iter().enumerate() {
        for (a, per_i) in images.iter().enumerate() {
            let outputs: Vec<Vec<C64>> = per_i.iter().map(|v| op.mul_vec(v)).collect::<Result<_>>()?;
            let l = inner(code.logical(0), &outputs[0]);
            lambda[(r, a)] = l;
            for (i, out) in outputs.iter().enumerate() {
                let diff: Vec<C64> = out.iter().zip(code.logical(i)).map(|(o, x)| o - l * x).collect();
                let d = norm(&diff);
                if d > worst || witness.is_none() {
                    worst = worst.max(d);
                    witness = Some((r, a, i));
                }
            }
        }
    }
    let lambda_weight = lambda.entries().iter().map(|z| z.norm_sqr()).sum();
    Ok(VerificationReport {
        passed: worst < tol.verify,
        route: VerificationRoute::IdentityResidual,
        lambda_values: lambda,
        max_identity_residual: worst,
        witness,
        lambda_weight,
        tolerance: tol.verify,
    })
}

/// Outcome of [`entangled_state_test`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntangledStateReport {
    pub passed: bool,
    /// Proportionality constants `λ_m = ⟨Φ|(I⊗B_m)|Φ⟩ / ⟨Φ|Φ⟩`.
    pub lambdas: Vec<C64>,
    /// `max_m ‖(I⊗B_m)Φ − λ_m Φ‖` for the unnormalized `Φ = Σ_i |i_L⟩|i_L⟩`.
    pub max_residual: f64,
    pub worst_element: Option<usize>,
    pub tolerance: f64,
}

/// Apply `I ⊗ B_m` to `Φ = Σ_i |i_L⟩|i_L⟩` and test proportionality.
///
/// Because the first factors `|i_L⟩` are orthonormal, the image splits into
/// independent blocks `|i_L⟩ ⊗ B_m|i_L⟩`, so the residual is assembled
/// block by block without forming the `n²`-dimensional vector.
pub fn entangled_state_test(
    code: &QuantumCode,
    composite: &OperatorEnsemble,
    tol: &Tolerances,
) -> Result<EntangledStateReport> {
    let images = code_images(code, composite)?;
    let k = code.k() as f64;
    let mut lambdas = Vec::with_capacity(composite.len());
    let mut worst = 0.0f64;
    let mut worst_element = None;
    for (m, per_i) in images.iter().enumerate() {
        let l: C64 = per_i.iter().zip(code.basis()).map(|(img, v)| inner(v, img)).sum::<C64>() / k;
        let mut sq = 0.0;
        for (img, v) in per_i.iter().zip(code.basis()) {
            sq += img.iter().zip(v).map(|(x, y)| (x - l * y).norm_sqr()).sum::<f64>();
        }
        let residual = sq.sqrt();
        if residual > worst || worst_element.is_none() {
            worst = worst.max(residual);
            worst_element = Some(m);
        }
        lambdas.push(l);
    }
    Ok(EntangledStateReport {
        passed: worst < tol.verify,
        lambdas,
        max_residual: worst,
        worst_element,
        tolerance: tol.verify,
    })
}

/// Outcome of [`entropy_test`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub passed: bool,
    /// `S(ρ̄)` in bits, `ρ̄ = (1/k) Σ_{a,i} A_a|i_L⟩⟨i_L|A_a†`.
    pub code_average_entropy: f64,
    /// `S(ρ)` in bits, `ρ = Σ_a (I⊗A_a)|e⟩⟨e|(I⊗A_a)†`.
    pub joint_entropy: f64,
    /// `S(ρ̄) − S(ρ)`
    pub difference_bits: f64,
    /// `log₂ k`
    pub expected_bits: f64,
    pub tolerance: f64,
}

/// The entropy identity `S(ρ̄) − S(ρ) = log₂ k`, which holds exactly for
/// correctable complete channels.
///
/// `|e⟩ = (1/√k) Σ_i |i⟩ ⊗ |i_L⟩` uses a `k`-dimensional reference, which
/// has the same spectra as a copy of the full coding space. Refuses
/// channels that are not superoperators: renormalizing would change the
/// channel being tested.
pub fn entropy_test(code: &QuantumCode, errors: &OperatorEnsemble, tol: &Tolerances) -> Result<EntropyReport> {
    errors.require_superoperator(tol)?;
    let images = code_images(code, errors)?;
    let k = code.k();
    let scale = 1.0 / (k as f64).sqrt();

    let averaged: Vec<Vec<C64>> = images
        .iter()
        .flatten()
        .map(|v| v.iter().map(|x| x * scale).collect())
        .collect();
    // |i⟩ ⊗ v places v in block i, so (I⊗A_a)|e⟩ is the concatenation of
    // the scaled images A_a|i_L⟩.
    let joint: Vec<Vec<C64>> = images
        .iter()
        .map(|per_i| per_i.iter().flatten().map(|x| x * scale).collect())
        .collect();

    let floor = tol.entropy_floor;
    let s_avg = entropy_of_spectrum(&spectrum_of_rank_one_sum(&averaged), floor);
    let s_joint = entropy_of_spectrum(&spectrum_of_rank_one_sum(&joint), floor);
    let difference = s_avg - s_joint;
    let expected = (k as f64).log2();
    Ok(EntropyReport {
        passed: (difference - expected).abs() < tol.verify,
        code_average_entropy: s_avg,
        joint_entropy: s_joint,
        difference_bits: difference,
        expected_bits: expected,
        tolerance: tol.verify,
    })
}
