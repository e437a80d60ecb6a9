use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigenvalues;
use super::matrix::{norm, ComplexMatrix};
use crate::{Error, Result, Tolerances, C64};

fn check_shape(dim: usize, shape: Option<&[usize]>) -> Result<()> {
    if let Some(shape) = shape {
        let prod: usize = shape.iter().product();
        if prod != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: prod,
            });
        }
    }
    Ok(())
}

/// Shape `[2, 2, …]` for `r` qubits.
pub fn qubit_shape(r: usize) -> Vec<usize> {
    vec![2; r]
}

/// Unit vector, optionally tagged with its tensor-factor dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<usize>>,
}

impl PureState {
    /// Rejects vectors whose norm is off by more than `tol.norm`.
    pub fn new(amplitudes: Vec<C64>, shape: Option<Vec<usize>>, tol: &Tolerances) -> Result<Self> {
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > tol.norm || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        check_shape(amplitudes.len(), shape.as_deref())?;
        Ok(Self { amplitudes, shape })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>, shape: Option<Vec<usize>>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        for a in &mut amplitudes {
            *a /= n;
        }
        check_shape(amplitudes.len(), shape.as_deref())?;
        Ok(Self { amplitudes, shape })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self {
            amplitudes: super::matrix::basis_vector(dim, index),
            shape: None,
        }
    }

    pub fn with_shape(mut self, shape: Vec<usize>) -> Result<Self> {
        check_shape(self.dim(), Some(&shape))?;
        self.shape = Some(shape);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn shape(&self) -> Option<&[usize]> {
        self.shape.as_deref()
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
            shape: self.shape.clone(),
        }
    }
}

/// Hermitian positive semidefinite operator of (at most) unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<usize>>,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and `trace ≤ 1`.
    pub fn new(matrix: ComplexMatrix, shape: Option<Vec<usize>>, tol: &Tolerances) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(matrix, shape)?;
        rho.validate(tol)?;
        Ok(rho)
    }

    /// Square matrix with consistent shape, no physical checks. Used for
    /// intermediate results such as partial traces of unnormalized states.
    pub fn from_matrix_unchecked(matrix: ComplexMatrix, shape: Option<Vec<usize>>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        check_shape(matrix.rows(), shape.as_deref())?;
        Ok(Self { matrix, shape })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            shape: None,
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let herm = self.matrix.hermiticity_residual();
        if herm > tol.structure {
            return Err(Error::NotAState {
                min_eigenvalue: f64::NAN,
                hermiticity: herm,
            });
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -tol.structure {
            return Err(Error::NotAState {
                min_eigenvalue: min_eig,
                hermiticity: herm,
            });
        }
        let tr = self.trace();
        if tr > 1.0 + tol.structure {
            return Err(Error::param("trace", format!("density matrix trace {tr} exceeds 1")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn shape(&self) -> Option<&[usize]> {
        self.shape.as_deref()
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Trace below one beyond tolerance.
    pub fn is_sub_normalized(&self, tol: &Tolerances) -> bool {
        self.trace() < 1.0 - tol.structure
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, state: &[C64]) -> Result<f64> {
        let v = self.matrix.mul_vec(state)?;
        Ok(super::matrix::inner(state, &v).re)
    }
}

/// Sorted set of distinct tensor-factor positions, 0-based from the left
/// (most significant) factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitSubset {
    indices: Vec<usize>,
}

impl QubitSubset {
    pub fn new(mut indices: Vec<usize>, n_factors: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n_factors) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: n_factors,
            });
        }
        Ok(Self { indices })
    }

    pub fn all(n_factors: usize) -> Self {
        Self {
            indices: (0..n_factors).collect(),
        }
    }

    pub fn empty() -> Self {
        Self { indices: vec![] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n_factors: usize) -> Self {
        Self {
            indices: (0..n_factors).filter(|i| !self.contains(*i)).collect(),
        }
    }

    /// Every subset of `{0..n}` with exactly `size` elements, in
    /// lexicographic order.
    pub fn all_of_size(n: usize, size: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if size > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(Self { indices: idx.clone() });
            let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

/// Trace out every factor not in `keep`. Factor order is preserved.
pub fn partial_trace(rho: &DensityMatrix, keep: &QubitSubset) -> Result<DensityMatrix> {
    let shape = rho.shape().ok_or(Error::ShapeRequired)?.to_vec();
    if let Some(&bad) = keep.indices().iter().find(|&&i| i >= shape.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: shape.len(),
        });
    }
    let n = rho.dim();
    let kept_shape: Vec<usize> = keep.indices().iter().map(|&i| shape[i]).collect();
    let out_dim: usize = kept_shape.iter().product();

    // Row-major strides of the full index.
    let mut strides = vec![1usize; shape.len()];
    for f in (0..shape.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * shape[f + 1];
    }
    let split = |full: usize| -> (usize, usize) {
        let mut kept = 0;
        let mut rest = 0;
        for (f, (&d, &s)) in shape.iter().zip(&strides).enumerate() {
            let digit = (full / s) % d;
            if keep.contains(f) {
                kept = kept * d + digit;
            } else {
                rest = rest * d + digit;
            }
        }
        (kept, rest)
    };
    let parts: Vec<(usize, usize)> = (0..n).map(split).collect();

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..n {
        let (ki, ri) = parts[i];
        for j in 0..n {
            let (kj, rj) = parts[j];
            if ri == rj {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(out, Some(kept_shape))
}
