use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ensemble::{e_error_family, tensor_power, OperatorEnsemble};
use crate::linalg::ComplexMatrix;
use crate::{Error, Result, Tolerances, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Phase damping in the environment basis `{|e₀⟩, ⊥}`: `A₀ = diag(1, e^{−γ})`,
    /// `A₁ = diag(0, √(1−e^{−2γ}))`.
    Decoherence,
    /// The same phase damping in the `|e₀⟩ ± |e₁⟩` environment basis:
    /// `{a₊I, a₋σ_z}` with `a_± = √((1 ± e^{−γ})/2)`.
    DecoherencePmBasis,
    /// `S₀ = diag(1, √(1−p²))`, `S₁ = diag(0, p)`, entries placed exactly as
    /// in the classic printed form.
    SpontaneousEmission,
    /// Jump-operator variant of the above: `S₁` carries `p` in the `(0,1)` slot.
    AmplitudeDamping,
    /// Unitary operator basis `{I, σ_z, σ_x, σ_xσ_z-like}` of 2×2 matrices.
    PauliUnitaryBasis,
    /// Matrix-unit basis `{|0⟩⟨0|, |1⟩⟨1|, |0⟩⟨1|, |1⟩⟨0|}`.
    MeasurementBasis,
    /// `{σ_x, σ_y, σ_z}/√3`.
    DepolarizingThird,
    /// The two-qubit three-operator channel whose images of a logical state
    /// overlap (rank 2 out of 3).
    OverlapExample,
    /// [`ChannelKind::OverlapExample`] with the sign of `A₂|11⟩` flipped, the
    /// smallest change that makes the pair code `{|00⟩, |11⟩}` correctable.
    OverlapCorrected,
    /// `{√(1−p) I, √p σ_z}`.
    PhaseFlip,
    Explicit,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 11] = [
        ChannelKind::Decoherence,
        ChannelKind::DecoherencePmBasis,
        ChannelKind::SpontaneousEmission,
        ChannelKind::AmplitudeDamping,
        ChannelKind::PauliUnitaryBasis,
        ChannelKind::MeasurementBasis,
        ChannelKind::DepolarizingThird,
        ChannelKind::OverlapExample,
        ChannelKind::OverlapCorrected,
        ChannelKind::PhaseFlip,
        ChannelKind::Explicit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Decoherence => "decoherence",
            ChannelKind::DecoherencePmBasis => "decoherence_pm_basis",
            ChannelKind::SpontaneousEmission => "spontaneous_emission",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
            ChannelKind::PauliUnitaryBasis => "pauli_unitary_basis",
            ChannelKind::MeasurementBasis => "measurement_basis",
            ChannelKind::DepolarizingThird => "depolarizing_third",
            ChannelKind::OverlapExample => "overlap_example",
            ChannelKind::OverlapCorrected => "overlap_corrected",
            ChannelKind::PhaseFlip => "phase_flip",
            ChannelKind::Explicit => "explicit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// The parameter this kind requires, if any.
    pub fn parameter(self) -> Option<&'static str> {
        match self {
            ChannelKind::Decoherence | ChannelKind::DecoherencePmBasis => Some("gamma"),
            ChannelKind::SpontaneousEmission | ChannelKind::AmplitudeDamping | ChannelKind::PhaseFlip => Some("p"),
            ChannelKind::OverlapExample | ChannelKind::OverlapCorrected => Some("q"),
            _ => None,
        }
    }
}

/// Serializable description of a noise channel.
///
/// Besides the kind-specific parameter (`gamma`, `p` or `q`), two structural
/// parameters are accepted for every kind: `qubits` (tensor power `r` of a
/// one-site channel) and `max_errors` (keep only products with at most `e`
/// factors different from operator 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operators: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind) -> Self {
        Self {
            kind,
            params: BTreeMap::new(),
            operators: None,
            label: None,
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn explicit(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Self {
        Self {
            kind: ChannelKind::Explicit,
            params: BTreeMap::new(),
            operators: Some(operators),
            label: Some(label.into()),
        }
    }

    /// `n`-site power of a one-site kind.
    pub fn on_qubits(self, r: usize) -> Self {
        self.param("qubits", r as f64)
    }

    pub fn max_errors(self, e: usize) -> Self {
        self.param("max_errors", e as f64)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("channel spec serializes")
    }

    fn count_param(&self, name: &str) -> Result<Option<usize>> {
        match self.params.get(name) {
            None => Ok(None),
            Some(&v) if v.fract() == 0.0 && v >= 0.0 && v <= 64.0 => Ok(Some(v as usize)),
            Some(_) => Err(Error::param(name, "must be a non-negative integer")),
        }
    }
}

/// Materialize a channel description as an operator ensemble.
pub fn build_channel(spec: &ChannelSpec, tol: &Tolerances) -> Result<OperatorEnsemble> {
    let kind = spec.kind;
    for name in spec.params.keys() {
        let known = kind.parameter() == Some(name.as_str()) || name == "qubits" || name == "max_errors";
        if !known {
            return Err(Error::param(name, format!("not a parameter of `{}`", kind.name())));
        }
    }
    let value = |name: &str| -> Result<f64> {
        let v = *spec
            .params
            .get(name)
            .ok_or_else(|| Error::param(name, format!("required by `{}`", kind.name())))?;
        if !v.is_finite() {
            return Err(Error::param(name, "must be finite"));
        }
        Ok(v)
    };
    let probability = |name: &str| -> Result<f64> {
        let p = value(name)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(name, "must satisfy 0 ≤ p ≤ 1"));
        }
        Ok(p)
    };

    let (ops, base_label) = match kind {
        ChannelKind::Decoherence => {
            let g = value("gamma")?;
            if g < 0.0 {
                return Err(Error::param("gamma", "must satisfy γ ≥ 0"));
            }
            (decoherence(g), format!("decoherence(γ={g})"))
        }
        ChannelKind::DecoherencePmBasis => {
            let g = value("gamma")?;
            if g < 0.0 {
                return Err(Error::param("gamma", "must satisfy γ ≥ 0"));
            }
            (decoherence_pm_basis(g), format!("decoherence±(γ={g})"))
        }
        ChannelKind::SpontaneousEmission => {
            let p = probability("p")?;
            (spontaneous_emission(p), format!("spontaneous_emission(p={p})"))
        }
        ChannelKind::AmplitudeDamping => {
            let p = probability("p")?;
            (amplitude_damping(p), format!("amplitude_damping(p={p})"))
        }
        ChannelKind::PhaseFlip => {
            let p = probability("p")?;
            (phase_flip(p), format!("phase_flip(p={p})"))
        }
        ChannelKind::PauliUnitaryBasis => (pauli_unitary_basis(), "pauli_unitary_basis".to_string()),
        ChannelKind::MeasurementBasis => (measurement_basis(), "measurement_basis".to_string()),
        ChannelKind::DepolarizingThird => (depolarizing_third(), "depolarizing_third".to_string()),
        ChannelKind::OverlapExample | ChannelKind::OverlapCorrected => {
            let q = value("q")?;
            if !(q > 0.0 && q < 0.5) {
                return Err(Error::param("q", "must satisfy 0 < q < 1/2"));
            }
            if kind == ChannelKind::OverlapExample {
                (overlap_example(q), format!("overlap(q={q})"))
            } else {
                (overlap_corrected(q), format!("overlap_corrected(q={q})"))
            }
        }
        ChannelKind::Explicit => {
            let ops = spec
                .operators
                .clone()
                .ok_or_else(|| Error::param("operators", "required by `explicit`"))?;
            (ops, "explicit".to_string())
        }
    };
    let label = spec.label.clone().unwrap_or(base_label);
    let base = OperatorEnsemble::new(ops, label.clone(), tol)?;

    let qubits = spec.count_param("qubits")?;
    let max_errors = spec.count_param("max_errors")?;
    let mut out = match (qubits, max_errors) {
        (None, None) => base,
        (Some(r), None) => tensor_power(&base, r)?,
        (r, Some(e)) => e_error_family(&base, r.unwrap_or(1), e)?,
    };
    if qubits.is_some() || max_errors.is_some() {
        let mut l = label;
        if let Some(r) = qubits {
            l = format!("{l}^⊗{r}");
        }
        if let Some(e) = max_errors {
            l = format!("{l}[≤{e} errors]");
        }
        out = out.with_label(spec.label.clone().unwrap_or(l));
    }
    out.validate_superoperator(tol);
    Ok(out)
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn diag2(a: f64, b: f64) -> ComplexMatrix {
    ComplexMatrix::from_diag(&[re(a), re(b)])
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![re(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), re(0.0)]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    diag2(1.0, -1.0)
}

pub fn decoherence(gamma: f64) -> Vec<ComplexMatrix> {
    let e = (-gamma).exp();
    vec![diag2(1.0, e), diag2(0.0, (1.0 - e * e).max(0.0).sqrt())]
}

pub fn decoherence_pm_basis(gamma: f64) -> Vec<ComplexMatrix> {
    let e = (-gamma).exp();
    let a_plus = ((1.0 + e) / 2.0).sqrt();
    let a_minus = ((1.0 - e) / 2.0).max(0.0).sqrt();
    vec![ComplexMatrix::identity(2).scale_real(a_plus), pauli_z().scale_real(a_minus)]
}

pub fn spontaneous_emission(p: f64) -> Vec<ComplexMatrix> {
    vec![diag2(1.0, (1.0 - p * p).sqrt()), diag2(0.0, p)]
}

pub fn amplitude_damping(p: f64) -> Vec<ComplexMatrix> {
    vec![
        diag2(1.0, (1.0 - p * p).sqrt()),
        ComplexMatrix::from_real(2, 2, &[0.0, p, 0.0, 0.0]),
    ]
}

pub fn phase_flip(p: f64) -> Vec<ComplexMatrix> {
    vec![
        ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        pauli_z().scale_real(p.sqrt()),
    ]
}

pub fn pauli_unitary_basis() -> Vec<ComplexMatrix> {
    vec![
        ComplexMatrix::identity(2),
        pauli_z(),
        pauli_x(),
        ComplexMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]),
    ]
}

pub fn measurement_basis() -> Vec<ComplexMatrix> {
    vec![
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]),
        ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]),
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]),
        ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]),
    ]
}

pub fn depolarizing_third() -> Vec<ComplexMatrix> {
    let s = 1.0 / 3f64.sqrt();
    vec![pauli_x().scale_real(s), pauli_y().scale_real(s), pauli_z().scale_real(s)]
}

pub fn overlap_example(q: f64) -> Vec<ComplexMatrix> {
    let a = (1.0 - 2.0 * q).sqrt();
    let s = (q / 2.0).sqrt();
    #[rustfmt::skip]
    let a0 = ComplexMatrix::from_real(4, 4, &[
        a,   0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, a,
    ]);
    #[rustfmt::skip]
    let a1 = ComplexMatrix::from_real(4, 4, &[
        s,   0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, s,
        s,   0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, s,
    ]);
    #[rustfmt::skip]
    let a2 = ComplexMatrix::from_real(4, 4, &[
        s,   0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, s,
        -s,  0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -s,
    ]);
    vec![a0, a1, a2]
}

/// [`overlap_example`] with `A₂|11⟩ = √(q/2)(|11⟩ − |01⟩)`.
///
/// As printed, `⟨00|A₀†A₂|00⟩ = −⟨11|A₀†A₂|11⟩`, so the pair code fails the
/// diagonal correction condition and the two-element recovery leaves a
/// logical phase flip behind. Negating that single column restores both.
pub fn overlap_corrected(q: f64) -> Vec<ComplexMatrix> {
    let mut ops = overlap_example(q);
    for row in 0..4 {
        ops[2][(row, 3)] = -ops[2][(row, 3)];
    }
    ops
}
