//! Pure-state, worst-case and entangled-state fidelities, and the fidelity
//! bounds that follow from correction.

mod bounds;
mod entangled;
pub(crate) mod optimize;

use serde::{Deserialize, Serialize};

pub use bounds::{entangled_bound, independent_error_bound, three_qubit_phase_code_fidelity};
pub use entangled::{
    entangled_bound_check, entangled_fidelity, entangled_fidelity_direct, entangled_fidelity_of_density,
    max_entangled_fidelity, EntangledBoundCheck, EntangledFidelityReport, ENTANGLED_BOUND_SLACK,
};
pub use optimize::{FidelityMethod, OptimizerTrace};

use crate::channels::OperatorEnsemble;
use crate::codes::QuantumCode;
use crate::linalg::{inner, ComplexMatrix, PureState};
use crate::{Error, Result, Tolerances, C64};
use optimize::{minimize, Quartic};

/// Optimizer settings shared by every fidelity extremum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FidelityConfig {
    /// Polar-angle grid points (endpoints included) for two-dimensional codes.
    pub grid_theta: usize,
    /// Azimuthal grid points for two-dimensional codes.
    pub grid_phi: usize,
    /// Random starting points for codes of dimension above two.
    pub restarts: usize,
    pub seed: u64,
    /// Final step (grid refinement) or gradient norm (restarts) at which
    /// local refinement stops.
    pub refine_tol: f64,
}

impl Default for FidelityConfig {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            restarts: 32,
            seed: 0,
            refine_tol: 1e-8,
        }
    }
}

/// Which functional a [`FidelityReport`] extremizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityObjective {
    /// `min_ψ Σ_a |⟨ψ|A_a|ψ⟩|²`
    MinFidelity,
    /// `max_ψ Σ_m ‖(B_m − ⟨ψ|B_m|ψ⟩)ψ‖²`
    MaxError,
}

/// An extremum over code states together with the state attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub objective: FidelityObjective,
    /// Extremal value, re-evaluated on `argmin_state` in the full coding space.
    pub value: f64,
    /// Witness state in the coding space.
    pub argmin_state: PureState,
    /// The witness in logical coordinates `Σ_i c_i |i_L⟩`.
    pub logical_coefficients: Vec<C64>,
    pub method: FidelityMethod,
    pub optimizer_trace: OptimizerTrace,
    /// For [`code_error`] on a complete ensemble: `|E − (1 − F_min)|`, where
    /// both extrema are computed independently. Zero up to optimizer error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement_gap: Option<f64>,
}

/// `Σ_a |⟨ψ|A_a|ψ⟩|²`
pub fn pure_fidelity(state: &PureState, ensemble: &OperatorEnsemble) -> Result<f64> {
    if state.dim() != ensemble.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim(),
            found: state.dim(),
        });
    }
    let psi = state.amplitudes();
    let mut total = 0.0;
    for op in ensemble.operators() {
        total += inner(psi, &op.mul_vec(psi)?).norm_sqr();
    }
    Ok(total)
}

/// `Σ_m ‖B_m ψ − ⟨ψ|B_m|ψ⟩ ψ‖²` for a single state.
pub fn deviation(state: &PureState, ensemble: &OperatorEnsemble) -> Result<f64> {
    if state.dim() != ensemble.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim(),
            found: state.dim(),
        });
    }
    let psi = state.amplitudes();
    let mut total = 0.0;
    for op in ensemble.operators() {
        let image = op.mul_vec(psi)?;
        let t = inner(psi, &image);
        total += image.iter().zip(psi).map(|(b, p)| (b - t * p).norm_sqr()).sum::<f64>();
    }
    Ok(total)
}

fn check_dims(code: &QuantumCode, ensemble: &OperatorEnsemble) -> Result<()> {
    if code.n() != ensemble.dim() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: ensemble.dim(),
        });
    }
    Ok(())
}

/// `W† A_a W` for the code isometry `W`.
pub(crate) fn restricted_operators(code: &QuantumCode, ensemble: &OperatorEnsemble) -> Result<Vec<ComplexMatrix>> {
    let w = code.isometry();
    ensemble.operators().iter().map(|op| w.adjoint_mul(&op.matmul(&w)?)).collect()
}

fn witness(code: &QuantumCode, coefficients: &[C64]) -> Result<PureState> {
    PureState::normalized(code.encode(coefficients)?, code.shape().map(<[usize]>::to_vec))
}

/// Worst-case pure-state fidelity over the code.
///
/// Two-dimensional codes are scanned on a Bloch-sphere grid and the best
/// points refined by coordinate descent; larger codes use seeded restarts
/// of projected gradient descent. The reported value is the fidelity of the
/// returned witness, so it is an upper bound on the true minimum.
pub fn min_fidelity(code: &QuantumCode, ensemble: &OperatorEnsemble, cfg: &FidelityConfig) -> Result<FidelityReport> {
    check_dims(code, ensemble)?;
    let f = Quartic {
        gram: None,
        gram_sign: 0.0,
        terms: restricted_operators(code, ensemble)?,
        scale: 1.0,
    };
    let ext = minimize(&f, cfg)?;
    let state = witness(code, &ext.coefficients)?;
    let value = pure_fidelity(&state, ensemble)?;
    Ok(FidelityReport {
        objective: FidelityObjective::MinFidelity,
        value,
        argmin_state: state,
        logical_coefficients: ext.coefficients,
        method: ext.method,
        optimizer_trace: ext.trace,
        complement_gap: None,
    })
}

/// Largest deviation `max_ψ Σ_m ‖(B_m − ⟨ψ|B_m|ψ⟩)ψ‖²` over code states.
///
/// Runs the minimizer on the negated functional. When the ensemble is
/// complete the functional equals `1 − F(ψ)` pointwise; the worst-case
/// fidelity is then also computed and the gap between the two extrema is
/// reported in `complement_gap`.
pub fn code_error(
    code: &QuantumCode,
    composite: &OperatorEnsemble,
    cfg: &FidelityConfig,
    tol: &Tolerances,
) -> Result<FidelityReport> {
    check_dims(code, composite)?;
    let w = code.isometry();
    let gram = w.adjoint_mul(&composite.gram_sum().matmul(&w)?)?;
    let f = Quartic {
        gram: Some(gram),
        gram_sign: -1.0,
        terms: restricted_operators(code, composite)?,
        scale: 1.0,
    };
    let ext = minimize(&f, cfg)?;
    let state = witness(code, &ext.coefficients)?;
    let value = deviation(&state, composite)?;
    let complement_gap = if composite.require_superoperator(tol).is_ok() {
        let fmin = min_fidelity(code, composite, cfg)?;
        Some((value - (1.0 - fmin.value)).abs())
    } else {
        None
    };
    Ok(FidelityReport {
        objective: FidelityObjective::MaxError,
        value,
        argmin_state: state,
        logical_coefficients: ext.coefficients,
        method: ext.method,
        optimizer_trace: ext.trace,
        complement_gap,
    })
}
