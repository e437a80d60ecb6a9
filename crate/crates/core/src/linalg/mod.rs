//! Dense complex linear algebra on small tensor-product spaces.

pub mod eigen;
pub mod matrix;
pub mod ortho;
pub mod random;
pub mod state;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, largest_eigenvalue, von_neumann_entropy};
pub use matrix::{basis_vector, inner, kron_vec, norm, ComplexMatrix};
pub use ortho::{orthonormalize, unitary_extension, Orthonormalization};
pub use state::{partial_trace, qubit_shape, DensityMatrix, PureState, QubitSubset};

/// `a ⊗ b`
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}
