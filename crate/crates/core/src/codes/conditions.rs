use serde::{Deserialize, Serialize};

use super::QuantumCode;
use crate::channels::OperatorEnsemble;
use crate::linalg::{inner, partial_trace, ComplexMatrix, DensityMatrix, QubitSubset};
use crate::{Error, Result, C64};

/// Which correction condition a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolatedCondition {
    /// `⟨i_L|A_a†A_b|j_L⟩ ≠ 0` for some `i ≠ j`.
    OffDiagonal,
    /// `⟨i_L|A_a†A_b|i_L⟩` depends on `i`.
    Diagonal,
}

/// Location of the worst correction-condition violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlWitness {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub j: usize,
    pub condition: ViolatedCondition,
    pub magnitude: f64,
}

/// Outcome of [`kl_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlReport {
    pub passed: bool,
    /// `max_{a,b,i≠j} |⟨i_L|A_a†A_b|j_L⟩|`
    pub max_offdiag_violation: f64,
    /// `max_{a,b,i,j} |⟨i_L|A_a†A_b|i_L⟩ − ⟨j_L|A_a†A_b|j_L⟩|`
    pub max_diag_violation: f64,
    /// `λ_ab = ⟨0_L|A_a†A_b|0_L⟩`, the common diagonal value when the check passes.
    pub lambda_matrix: ComplexMatrix,
    /// Worst violation; present whenever any violation is nonzero.
    pub witness: Option<KlWitness>,
    pub tolerance: f64,
}

/// `images[a][i] = A_a |i_L⟩`
pub fn code_images(code: &QuantumCode, errors: &OperatorEnsemble) -> Result<Vec<Vec<Vec<C64>>>> {
    if errors.dim() != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: errors.dim(),
        });
    }
    errors
        .operators()
        .iter()
        .map(|op| code.basis().iter().map(|v| op.mul_vec(v)).collect())
        .collect()
}

/// Check that every `⟨i_L|A_a†A_b|j_L⟩` equals `λ_ab δ_ij` within `tol`.
pub fn kl_check(code: &QuantumCode, errors: &OperatorEnsemble, tol: f64) -> Result<KlReport> {
    let images = code_images(code, errors)?;
    let m = errors.len();
    let k = code.k();
    let mut lambda = ComplexMatrix::zeros(m, m);
    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    let mut witness: Option<KlWitness> = None;
    let mut note = |w: KlWitness| {
        if w.magnitude > 0.0 && witness.as_ref().map_or(true, |old| w.magnitude > old.magnitude) {
            witness = Some(w);
        }
    };

    let mut gram = vec![vec![C64::new(0.0, 0.0); k]; k];
    for a in 0..m {
        for b in 0..m {
            for (i, row) in gram.iter_mut().enumerate() {
                for (j, g) in row.iter_mut().enumerate() {
                    *g = inner(&images[a][i], &images[b][j]);
                }
            }
            lambda[(a, b)] = gram[0][0];
            for i in 0..k {
                for j in (0..k).filter(|&j| j != i) {
                    let v = gram[i][j].norm();
                    off = off.max(v);
                    note(KlWitness {
                        a,
                        b,
                        i,
                        j,
                        condition: ViolatedCondition::OffDiagonal,
                        magnitude: v,
                    });
                }
                for j in i + 1..k {
                    let v = (gram[i][i] - gram[j][j]).norm();
                    diag = diag.max(v);
                    note(KlWitness {
                        a,
                        b,
                        i,
                        j,
                        condition: ViolatedCondition::Diagonal,
                        magnitude: v,
                    });
                }
            }
        }
    }
    Ok(KlReport {
        passed: off < tol && diag < tol,
        max_offdiag_violation: off,
        max_diag_violation: diag,
        lambda_matrix: lambda,
        witness,
        tolerance: tol,
    })
}

/// Outcome of [`reduced_dm_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedDmReport {
    pub passed: bool,
    pub max_errors: usize,
    /// `max ‖ρ(|i_L⟩, U) − ρ(|j_L⟩, U)‖_max` over `|U| = 2e`.
    pub max_equality_violation: f64,
    /// `max ‖ρ(|i_L⟩, Ū) ρ(|j_L⟩, Ū)‖_max` over `|U| = 2e`, `i ≠ j`.
    pub max_product_violation: f64,
    /// Subset `U` (0-based qubit positions) attaining the worst violation.
    pub witness_subset: Option<Vec<usize>>,
    /// Logical pair `(i, j)` attaining the worst violation.
    pub witness_pair: Option<(usize, usize)>,
    pub subsets_checked: usize,
    pub tolerance: f64,
}

/// Reduced-density-matrix criterion for correcting every error on at most
/// `e` qubits: for each set `U` of `2e` qubits the logical states must be
/// indistinguishable on `U`, and distinct logical states must have
/// orthogonally supported reductions on the complement `Ū`.
pub fn reduced_dm_check(code: &QuantumCode, e: usize, tol: f64) -> Result<ReducedDmReport> {
    let shape = code.shape().ok_or(Error::ShapeRequired)?;
    let r = code.qubits().ok_or(Error::NotQubitShape(code.n()))?;
    if 2 * e > r {
        return Err(Error::param("e", format!("2e must not exceed the number of qubits ({r})")));
    }
    let projectors: Vec<DensityMatrix> = code
        .basis()
        .iter()
        .map(|v| DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(v, v), Some(shape.to_vec())))
        .collect::<Result<_>>()?;
    let k = code.k();

    let mut eq = 0.0f64;
    let mut prod = 0.0f64;
    let mut worst = 0.0f64;
    let mut witness_subset = None;
    let mut witness_pair = None;
    let subsets = QubitSubset::all_of_size(r, 2 * e);
    for u in &subsets {
        let ubar = u.complement(r);
        let on_u: Vec<ComplexMatrix> = projectors
            .iter()
            .map(|p| partial_trace(p, u).map(DensityMatrix::into_matrix))
            .collect::<Result<_>>()?;
        let on_ubar: Vec<ComplexMatrix> = projectors
            .iter()
            .map(|p| partial_trace(p, &ubar).map(DensityMatrix::into_matrix))
            .collect::<Result<_>>()?;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let d = on_u[i].max_abs_diff(&on_u[j]);
                let p = on_ubar[i].matmul(&on_ubar[j])?.max_abs();
                eq = eq.max(d);
                prod = prod.max(p);
                if d.max(p) > worst {
                    worst = d.max(p);
                    witness_subset = Some(u.indices().to_vec());
                    witness_pair = Some((i, j));
                }
            }
        }
    }
    Ok(ReducedDmReport {
        passed: eq < tol && prod < tol,
        max_errors: e,
        max_equality_violation: eq,
        max_product_violation: prod,
        witness_subset,
        witness_pair,
        subsets_checked: subsets.len(),
        tolerance: tol,
    })
}
