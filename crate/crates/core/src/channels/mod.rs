//! Interaction-operator ensembles and the noise-channel catalogue.

mod ensemble;
mod spec;

pub use ensemble::{
    e_error_family, embed, error_index_tuples, tensor_power, OperatorEnsemble, MAX_ENSEMBLE_ENTRIES,
};
pub use spec::{
    amplitude_damping, build_channel, decoherence, decoherence_pm_basis, depolarizing_third, measurement_basis,
    overlap_corrected, overlap_example, pauli_unitary_basis, pauli_x, pauli_y, pauli_z, phase_flip, spontaneous_emission, ChannelKind,
    ChannelSpec,
};

use crate::linalg::DensityMatrix;
use crate::{Result, Tolerances};

/// `ρ ↦ Σ_a A_a ρ A_a†`
pub fn apply_channel(e: &OperatorEnsemble, rho: &DensityMatrix) -> Result<DensityMatrix> {
    e.apply(rho)
}

/// `‖Σ A†A − I‖_max`, refreshing the cached superoperator flag.
pub fn validate_superoperator(e: &mut OperatorEnsemble, tol: &Tolerances) -> f64 {
    e.validate_superoperator(tol)
}

pub fn strength(e: &OperatorEnsemble) -> f64 {
    e.strength()
}
