use serde::{Deserialize, Serialize};

use super::operator::RecoveryOperator;
use crate::channels::OperatorEnsemble;
use crate::codes::{code_images, kl_check, QuantumCode};
use crate::linalg::ortho::{complement_basis, orthonormality_violation, standard_basis, unitary_extension};
use crate::linalg::random::{random_orthonormal, random_unitary, rng};
use crate::linalg::{norm, orthonormalize, ComplexMatrix};
use crate::{Error, Result, Tolerances, C64};

/// Knobs that change which (equally valid) recovery is produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    /// When set, the syndrome basis is rotated by a seeded random unitary
    /// and the unreached complement is completed from seeded random
    /// vectors. Without it both come out of Gram–Schmidt in input order.
    pub basis_seed: Option<u64>,
}

/// Everything the construction produces, whether or not the correction
/// conditions hold.
#[derive(Debug, Clone)]
pub struct RecoveryCandidate {
    pub recovery: RecoveryOperator,
    /// `nu[r][i] = |ν_r^i⟩ = Σ_a T_{ar} A_a|i_L⟩`
    pub nu: Vec<Vec<Vec<C64>>>,
    /// `β⁰` (`s × m`): `A_a|0_L⟩ = Σ_r β⁰_{ra} |ν_r^0⟩`.
    pub syndrome_coefficients: ComplexMatrix,
    /// Error indices whose images of `|0_L⟩` opened a new syndrome direction.
    pub pivots: Vec<usize>,
    /// Orthonormal basis of the part of the coding space no error reaches.
    pub complement: Vec<Vec<C64>>,
    /// `max |⟨ν_r^i|ν_{r'}^j⟩ − δ_{rr'}δ_{ij}|`; zero up to round-off exactly
    /// when the correction conditions hold.
    pub nu_orthonormality_violation: f64,
    /// `max ‖σ†σ − I‖` of the decomposition map built from `ν` and the complement.
    pub iso_residual: f64,
    /// `max_{a,i} ‖A_a|i_L⟩ − Σ_r β⁰_{ra}|ν_r^i⟩‖`
    pub action_residual: f64,
}

impl RecoveryCandidate {
    pub fn syndrome_dim(&self) -> usize {
        self.nu.len()
    }
}

/// Run the constructive recovery synthesis without first checking the
/// correction conditions.
///
/// 1. Orthonormalize the images `A_a|0_L⟩` into `{|ν_r^0⟩}`, recording the
///    coefficients `β⁰` and the synthesis map `T` with `|ν_r^0⟩ = Σ_a T_{ar} A_a|0_L⟩`.
/// 2. Apply the same `T` to the images of every `|i_L⟩`, giving `|ν_r^i⟩`.
///    When the conditions hold this is the inner-product-preserving map
///    `A_a|0_L⟩ ↦ A_a|i_L⟩` applied to `|ν_r^0⟩`.
/// 3. `R_r = Σ_i |i_L⟩⟨ν_r^i|`, which equals `V_r Σ_i |ν_r^i⟩⟨ν_r^i|` for any
///    unitary `V_r` sending `|ν_r^i⟩ ↦ |i_L⟩`.
/// 4. `O = I − Σ_{r,i} |ν_r^i⟩⟨ν_r^i|`, always listed first (it is the zero
///    matrix when the syndromes fill the space).
pub fn synthesize_candidate(
    code: &QuantumCode,
    errors: &OperatorEnsemble,
    tol: &Tolerances,
    options: SynthesisOptions,
) -> Result<RecoveryCandidate> {
    let images = code_images(code, errors)?;
    let n = code.n();
    let k = code.k();
    let m = errors.len();

    let zero_images: Vec<Vec<C64>> = images.iter().map(|per_i| per_i[0].clone()).collect();
    let ortho = orthonormalize(&zero_images, tol.rank)?;
    let s = ortho.rank();
    let mut synthesis = ortho.synthesis_map(m); // m × s
    let mut beta = ortho.coefficients.clone(); // s × m
    if let Some(seed) = options.basis_seed {
        if s > 0 {
            let q = random_unitary(&mut rng(seed), s);
            synthesis = synthesis.matmul(&q)?;
            beta = q.adjoint_mul(&beta)?;
        }
    }

    let nu: Vec<Vec<Vec<C64>>> = (0..s)
        .map(|r| {
            (0..k)
                .map(|i| {
                    let mut v = vec![C64::new(0.0, 0.0); n];
                    for (a, per_i) in images.iter().enumerate() {
                        let t = synthesis[(a, r)];
                        if t != C64::new(0.0, 0.0) {
                            for (x, y) in v.iter_mut().zip(&per_i[i]) {
                                *x += t * y;
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let all_nu: Vec<Vec<C64>> = nu.iter().flatten().cloned().collect();
    let nu_violation = orthonormality_violation(&all_nu);

    let mut elements = Vec::with_capacity(s + 1);
    let mut reached = ComplexMatrix::zeros(n, n);
    for v in &all_nu {
        reached = &reached + &ComplexMatrix::outer(v, v);
    }
    elements.push(&ComplexMatrix::identity(n) - &reached);
    for per_r in &nu {
        let mut r_op = ComplexMatrix::zeros(n, n);
        for (i, v) in per_r.iter().enumerate() {
            r_op = &r_op + &ComplexMatrix::outer(code.logical(i), v);
        }
        elements.push(r_op);
    }

    let candidates = match options.basis_seed {
        Some(seed) => random_orthonormal(&mut rng(seed ^ 0x9e37_79b9_7f4a_7c15), n, n),
        None => standard_basis(n),
    };
    let complement = if all_nu.len() <= n {
        complement_basis(&all_nu, n, &candidates)
    } else {
        Vec::new()
    };
    let complement_dim = n.saturating_sub(k * s);

    // σ: column i·s + r is |ν_r^i⟩, then the complement basis.
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for i in 0..k {
        for per_r in &nu {
            columns.push(per_r[i].clone());
        }
    }
    columns.extend(complement.iter().cloned());
    let iso_residual = if columns.len() == n {
        ComplexMatrix::from_columns(n, &columns)?.unitarity_residual()
    } else {
        f64::INFINITY
    };

    let mut action_residual = 0.0f64;
    for (a, per_i) in images.iter().enumerate() {
        for (i, image) in per_i.iter().enumerate() {
            let mut diff = image.clone();
            for (r, per_r) in nu.iter().enumerate() {
                let b = beta[(r, a)];
                for (d, x) in diff.iter_mut().zip(&per_r[i]) {
                    *d -= b * x;
                }
            }
            action_residual = action_residual.max(norm(&diff));
        }
    }

    let ensemble = OperatorEnsemble::new(
        elements,
        format!("recovery[{} | {}]", code.label(), errors.label()),
        tol,
    )?;
    Ok(RecoveryCandidate {
        recovery: RecoveryOperator::unchecked(ensemble, s, complement_dim),
        nu,
        syndrome_coefficients: beta,
        pivots: ortho.pivots,
        complement,
        nu_orthonormality_violation: nu_violation,
        iso_residual,
        action_residual,
    })
}

/// Synthesize a recovery after confirming the correction conditions.
///
/// Fails with a not-correctable error carrying the condition report when
/// they do not hold, and with a numerical error if the constructed syndrome
/// vectors are not orthonormal to `tol.structure` (scaled by the number of
/// vectors).
pub fn synthesize_recovery(
    code: &QuantumCode,
    errors: &OperatorEnsemble,
    tol: &Tolerances,
    options: SynthesisOptions,
) -> Result<RecoveryOperator> {
    Ok(gated_candidate(code, errors, tol, options)?.recovery)
}

fn gated_candidate(
    code: &QuantumCode,
    errors: &OperatorEnsemble,
    tol: &Tolerances,
    options: SynthesisOptions,
) -> Result<RecoveryCandidate> {
    let report = kl_check(code, errors, tol.kl)?;
    if !report.passed {
        return Err(Error::NotCorrectable(Box::new(report)));
    }
    let candidate = synthesize_candidate(code, errors, tol, options)?;
    let count = (candidate.syndrome_dim() * code.k()).max(1) as f64;
    let limit = tol.structure.max(tol.kl) * count.sqrt() * 1e2;
    if candidate.nu_orthonormality_violation > limit {
        return Err(Error::Numerical(format!(
            "syndrome vectors are not orthonormal (violation {:.3e}); images are too close to dependent for rank tolerance {:.1e}",
            candidate.nu_orthonormality_violation, tol.rank
        )));
    }
    candidate.recovery.ensemble().require_superoperator(tol)?;
    Ok(candidate)
}

/// Split `R_r = V_r P_r` into a unitary and an orthogonal projection.
///
/// `P_r = R_r†R_r`; `V_r` is the unitary extension of `R_r†|i_L⟩ ↦ |i_L⟩`.
pub fn factor_element(
    code: &QuantumCode,
    recovery: &RecoveryOperator,
    index: usize,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let r = recovery
        .ensemble()
        .operators()
        .get(index)
        .ok_or(Error::IndexOutOfRange {
            index,
            len: recovery.ensemble().len(),
        })?;
    let projection = r.adjoint_mul(r)?;
    let r_dag = r.adjoint();
    let pairs = code
        .basis()
        .iter()
        .map(|l| Ok((r_dag.mul_vec(l)?, l.clone())))
        .collect::<Result<Vec<_>>>()?;
    let v = unitary_extension(&pairs, code.n(), tol.structure.max(1e-8))?;
    Ok((v, projection))
}

/// The decomposition `H ≅ C ⊗ E ⊕ D` induced by a correctable channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeDecomposition {
    /// `σ`: column `i·s + r` is `σ(|i_L⟩ ⊗ |r⟩) = |ν_r^i⟩`; the remaining
    /// columns span `D`.
    pub iso_map: ComplexMatrix,
    /// `{|ν_r^0⟩}`, the physical representatives of the syndrome basis.
    pub syndrome_basis: Vec<Vec<C64>>,
    pub complement_basis: Vec<Vec<C64>>,
    /// `syndrome_vectors[a]` = coordinates of `|E(a)⟩` in the syndrome basis.
    pub syndrome_vectors: Vec<Vec<C64>>,
    pub syndrome_dim: usize,
    pub complement_dim: usize,
    /// `D = 0`, i.e. `H ≅ C ⊗ E`.
    pub perfect: bool,
    /// `‖σ†σ − I‖_max`
    pub iso_residual: f64,
    /// `max_{a,i} ‖A_a|i_L⟩ − σ(|i_L⟩ ⊗ |E(a)⟩)‖`
    pub action_residual: f64,
    /// Both residuals are below the verification tolerance.
    pub valid: bool,
}

fn decomposition_from(candidate: &RecoveryCandidate, code: &QuantumCode, tol: &Tolerances) -> Result<SyndromeDecomposition> {
    let n = code.n();
    let s = candidate.syndrome_dim();
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for i in 0..code.k() {
        for per_r in &candidate.nu {
            columns.push(per_r[i].clone());
        }
    }
    columns.extend(candidate.complement.iter().cloned());
    let iso_map = ComplexMatrix::from_columns(n, &columns)?;
    let m = candidate.syndrome_coefficients.cols();
    let syndrome_vectors = (0..m).map(|a| candidate.syndrome_coefficients.column(a)).collect();
    let complement_dim = candidate.recovery.complement_dim();
    Ok(SyndromeDecomposition {
        iso_map,
        syndrome_basis: candidate.nu.iter().map(|per_r| per_r[0].clone()).collect(),
        complement_basis: candidate.complement.clone(),
        syndrome_vectors,
        syndrome_dim: s,
        complement_dim,
        perfect: complement_dim == 0 && columns.len() == n,
        iso_residual: candidate.iso_residual,
        action_residual: candidate.action_residual,
        valid: candidate.iso_residual < tol.verify && candidate.action_residual < tol.verify,
    })
}

/// The syndrome decomposition of a correctable channel. Fails with a
/// not-correctable error when the correction conditions do not hold.
pub fn syndrome_decomposition(
    code: &QuantumCode,
    errors: &OperatorEnsemble,
    tol: &Tolerances,
) -> Result<SyndromeDecomposition> {
    let candidate = gated_candidate(code, errors, tol, SynthesisOptions::default())?;
    decomposition_from(&candidate, code, tol)
}

/// Attempt the decomposition regardless of the correction conditions; the
/// `valid` flag reports whether `σ` is unitary and reproduces every error
/// action.
pub fn syndrome_decomposition_ungated(
    code: &QuantumCode,
    errors: &OperatorEnsemble,
    tol: &Tolerances,
) -> Result<SyndromeDecomposition> {
    let candidate = synthesize_candidate(code, errors, tol, SynthesisOptions::default())?;
    decomposition_from(&candidate, code, tol)
}
