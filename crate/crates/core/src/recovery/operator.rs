use serde::{Deserialize, Serialize};

use crate::channels::{build_channel, ChannelKind, ChannelSpec, OperatorEnsemble};
use crate::{Error, Result, Tolerances};

/// A recovery superoperator `{O, R₁, …, R_s}` with the dimensions of the
/// syndrome space `E` and the unreached complement `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOperator {
    ensemble: OperatorEnsemble,
    syndrome_dim: usize,
    complement_dim: usize,
}

/// Wire format: an explicit channel plus the two dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RecoveryFile {
    #[serde(flatten)]
    channel: ChannelSpec,
    syndrome_dim: usize,
    complement_dim: usize,
}

impl RecoveryOperator {
    /// Fails with a not-a-superoperator error if completeness is violated
    /// beyond `tol.structure`.
    pub fn new(ensemble: OperatorEnsemble, syndrome_dim: usize, complement_dim: usize, tol: &Tolerances) -> Result<Self> {
        ensemble.require_superoperator(tol)?;
        Ok(Self {
            ensemble,
            syndrome_dim,
            complement_dim,
        })
    }

    /// Wrap without checking completeness (for inspecting failed candidates).
    pub(crate) fn unchecked(ensemble: OperatorEnsemble, syndrome_dim: usize, complement_dim: usize) -> Self {
        Self {
            ensemble,
            syndrome_dim,
            complement_dim,
        }
    }

    /// The trivial recovery `{I}`.
    pub fn identity(dim: usize) -> Self {
        Self {
            ensemble: OperatorEnsemble::identity(dim),
            syndrome_dim: 1,
            complement_dim: 0,
        }
    }

    pub fn ensemble(&self) -> &OperatorEnsemble {
        &self.ensemble
    }

    pub fn dim(&self) -> usize {
        self.ensemble.dim()
    }

    pub fn syndrome_dim(&self) -> usize {
        self.syndrome_dim
    }

    pub fn complement_dim(&self) -> usize {
        self.complement_dim
    }

    pub fn from_json(text: &str, tol: &Tolerances) -> Result<Self> {
        let file: RecoveryFile = serde_json::from_str(text)?;
        if file.channel.kind != ChannelKind::Explicit {
            return Err(Error::Parse("field `kind` of a recovery file must be \"explicit\"".into()));
        }
        let ensemble = build_channel(&file.channel, tol)?;
        Self::new(ensemble, file.syndrome_dim, file.complement_dim, tol)
    }

    pub fn to_json(&self) -> String {
        let file = RecoveryFile {
            channel: ChannelSpec::explicit(self.ensemble.operators().to_vec(), self.ensemble.label()),
            syndrome_dim: self.syndrome_dim,
            complement_dim: self.complement_dim,
        };
        serde_json::to_string_pretty(&file).expect("recovery serializes")
    }
}

/// `{R_r A_a}`, ordered `r`-major: noise first, then recovery.
pub fn composite(errors: &OperatorEnsemble, recovery: &RecoveryOperator) -> Result<OperatorEnsemble> {
    errors.then(recovery.ensemble())
}
