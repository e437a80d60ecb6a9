use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{inner, ComplexMatrix};
use super::state::DensityMatrix;
use crate::{Error, Result, Tolerances, C64};

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    // symmetrize so round-off in the lower triangle cannot leak in
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(to_nalgebra(m));
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Eigenpairs of a Hermitian matrix, ascending by eigenvalue.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Vec<(f64, Vec<C64>)> {
    if m.rows() == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(to_nalgebra(m));
    let mut pairs: Vec<(f64, Vec<C64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, eig.eigenvectors.column(k).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

pub fn largest_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues(m).last().copied().unwrap_or(0.0)
}

/// `−Σ λ log₂ λ` over eigenvalues above `floor`.
pub fn entropy_of_spectrum(values: &[f64], floor: f64) -> f64 {
    values
        .iter()
        .filter(|&&l| l > floor)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let values = rho.eigenvalues();
    let min = values.first().copied().unwrap_or(0.0);
    if min < -tol.structure {
        return Err(Error::NotAState {
            min_eigenvalue: min,
            hermiticity: rho.matrix().hermiticity_residual(),
        });
    }
    Ok(entropy_of_spectrum(&values, tol.entropy_floor))
}

/// Nonzero spectrum of `Σ_v |v⟩⟨v|`, computed from whichever of the outer
/// sum or the Gram matrix `⟨v_a|v_b⟩` is smaller (they share it).
pub fn spectrum_of_rank_one_sum(vectors: &[Vec<C64>]) -> Vec<f64> {
    let dim = vectors.first().map_or(0, Vec::len);
    if vectors.len() <= dim {
        let g = ComplexMatrix::from_vec(
            vectors.len(),
            vectors.len(),
            vectors
                .iter()
                .flat_map(|a| vectors.iter().map(move |b| inner(a, b)))
                .collect(),
        )
        .expect("square gram");
        hermitian_eigenvalues(&g)
    } else {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for v in vectors {
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        hermitian_eigenvalues(&m)
    }
}
