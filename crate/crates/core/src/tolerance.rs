use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the library, threaded explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Residual norm below which a vector adds no new direction, relative
    /// to the largest norm in the batch.
    pub rank: f64,
    /// Hermiticity, unitarity, orthonormality and completeness checks.
    pub structure: f64,
    /// Unit-norm check on pure states.
    pub norm: f64,
    /// Absolute tolerance on the correction-condition inner products.
    pub kl: f64,
    /// Verification residuals (proportionality, entropy identity).
    pub verify: f64,
    /// Eigenvalues below this contribute nothing to an entropy.
    pub entropy_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-10,
            structure: 1e-9,
            norm: 1e-9,
            kl: 1e-9,
            verify: 1e-9,
            entropy_floor: 1e-14,
        }
    }
}

impl Tolerances {
    /// Override the decision tolerances (correction conditions and
    /// verification) with a single user-supplied value.
    pub fn with_decision_tol(mut self, tol: f64) -> Self {
        self.kl = tol;
        self.verify = tol;
        self
    }
}
