//! Seeded random matrices and states for property checks and optimizer
//! restarts.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::ortho::orthonormalize;
use crate::C64;

pub use rand::SeedableRng;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian_complex(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| gaussian_complex(rng)).collect())
        .expect("sized")
}

/// Haar-distributed state.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v = gaussian_vector(rng, n);
    let nrm = super::matrix::norm(&v);
    v.into_iter().map(|x| x / nrm).collect()
}

/// `k` random orthonormal vectors in dimension `n` (`k ≤ n`).
pub fn random_orthonormal<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<C64>> {
    loop {
        let vs: Vec<Vec<C64>> = (0..k).map(|_| gaussian_vector(rng, n)).collect();
        let o = orthonormalize(&vs, 1e-8).expect("uniform dims");
        if o.rank() == k {
            return o.basis;
        }
    }
}

/// Random unitary whose columns are [`random_orthonormal`].
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_columns(n, &random_orthonormal(rng, n, n)).expect("sized")
}
