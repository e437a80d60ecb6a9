//! Code subspaces, correction conditions, and counting bounds.

mod bounds;
mod conditions;

pub use bounds::{naive_counting_bound, qubit_lower_bound, CountingBound};
pub use conditions::{code_images, kl_check, reduced_dm_check, KlReport, KlWitness, ReducedDmReport, ViolatedCondition};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::ortho::orthonormality_violation;
use crate::linalg::random::{random_orthonormal, rng};
use crate::linalg::{basis_vector, inner, kron_vec, norm, qubit_shape, ComplexMatrix, PureState};
use crate::{Error, Result, Tolerances, C64, MAX_DIM};

/// A `k`-dimensional subspace of an `n`-dimensional coding space, stored as
/// an orthonormal basis of logical states `|i_L⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCode {
    n: usize,
    basis: Vec<Vec<C64>>,
    shape: Option<Vec<usize>>,
    label: String,
}

/// Wire format of a code file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeFile {
    n: usize,
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<usize>>,
    basis: Vec<Vec<C64>>,
    #[serde(default)]
    label: String,
}

impl QuantumCode {
    /// Validates `⟨i_L|j_L⟩ = δ_ij` within `tol.structure`.
    pub fn new(
        basis: Vec<Vec<C64>>,
        shape: Option<Vec<usize>>,
        label: impl Into<String>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = basis.first().map(Vec::len).ok_or_else(|| Error::param("basis", "a code needs at least one logical state"))?;
        if n > MAX_DIM {
            return Err(Error::Capacity {
                what: "dimension",
                requested: n,
                limit: MAX_DIM,
            });
        }
        if let Some(bad) = basis.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        if basis.len() > n {
            return Err(Error::param("k", format!("code dimension must not exceed n = {n}")));
        }
        if basis.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("basis", "entries must be finite"));
        }
        if let Some(s) = &shape {
            let prod: usize = s.iter().product();
            if prod != n {
                return Err(Error::DimensionMismatch { expected: n, found: prod });
            }
        }
        let violation = orthonormality_violation(&basis);
        if violation > tol.structure {
            return Err(Error::NotOrthonormal { violation });
        }
        Ok(Self {
            n,
            basis,
            shape,
            label: label.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    pub fn logical(&self, i: usize) -> &[C64] {
        &self.basis[i]
    }

    pub fn shape(&self) -> Option<&[usize]> {
        self.shape.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Number of qubits when the shape is all-qubit.
    pub fn qubits(&self) -> Option<usize> {
        self.shape
            .as_ref()
            .filter(|s| s.iter().all(|&d| d == 2))
            .map(Vec::len)
    }

    /// `Σ_i |i_L⟩⟨i_L|`
    pub fn projector(&self) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.n, self.n);
        for v in &self.basis {
            p = &p + &ComplexMatrix::outer(v, v);
        }
        p
    }

    /// The `n × k` isometry whose columns are the logical states.
    pub fn isometry(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(self.n, &self.basis).expect("uniform dims")
    }

    /// `Σ_i c_i |i_L⟩`
    pub fn encode(&self, coefficients: &[C64]) -> Result<Vec<C64>> {
        if coefficients.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: coefficients.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for (c, v) in coefficients.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// Coordinates `⟨i_L|ψ⟩` of a state in the logical basis.
    pub fn coordinates(&self, state: &[C64]) -> Vec<C64> {
        self.basis.iter().map(|v| inner(v, state)).collect()
    }

    /// `‖ψ − Pψ‖`, the distance of a state from the code subspace.
    pub fn distance_from_code(&self, state: &[C64]) -> Result<f64> {
        let projected = self.encode(&self.coordinates(state))?;
        if state.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: state.len(),
            });
        }
        let diff: Vec<C64> = state.iter().zip(&projected).map(|(a, b)| a - b).collect();
        Ok(norm(&diff))
    }

    /// A code state as a [`PureState`] carrying the code's shape.
    pub fn state(&self, coefficients: &[C64], tol: &Tolerances) -> Result<PureState> {
        PureState::new(self.encode(coefficients)?, self.shape.clone(), tol)
    }

    /// Re-express the basis as `|i'_L⟩ = Σ_j u_{ji} |j_L⟩` for a `k × k` unitary `u`.
    pub fn rotated(&self, u: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if u.rows() != self.k() || u.cols() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: u.rows(),
            });
        }
        let basis = (0..self.k())
            .map(|i| self.encode(&u.column(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, self.shape.clone(), format!("{} (rotated)", self.label), tol)
    }

    pub fn from_json(text: &str, tol: &Tolerances) -> Result<Self> {
        let file: CodeFile = serde_json::from_str(text)?;
        if file.basis.len() != file.k {
            return Err(Error::Parse(format!("field `k` is {} but `basis` has {} vectors", file.k, file.basis.len())));
        }
        if let Some(bad) = file.basis.iter().position(|v| v.len() != file.n) {
            return Err(Error::Parse(format!(
                "field `basis[{bad}]` has {} amplitudes, expected n = {}",
                file.basis[bad].len(),
                file.n
            )));
        }
        Self::new(file.basis, file.shape, file.label, tol)
    }

    pub fn to_json(&self) -> String {
        let file = CodeFile {
            n: self.n,
            k: self.k(),
            shape: self.shape.clone(),
            basis: self.basis.clone(),
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&file).expect("code serializes")
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Builtin codes: `phase3`, `phaseM` for odd `M ≤ 7`, `pair`, `trivial` (a
/// single bare qubit) and `trivial(d)`.
pub fn builtin_code(name: &str) -> Result<QuantumCode> {
    let name = name.trim();
    let unknown = || Error::UnknownCode(name.to_string());
    if name == "pair" {
        let basis = vec![basis_vector(4, 0), basis_vector(4, 3)];
        return QuantumCode::new(basis, Some(qubit_shape(2)), "pair", &Tolerances::default());
    }
    if name == "trivial" {
        return trivial_code(2);
    }
    if let Some(inner) = name.strip_prefix("trivial(").and_then(|s| s.strip_suffix(')')) {
        let d: usize = inner.trim().parse().map_err(|_| unknown())?;
        return trivial_code(d);
    }
    if let Some(m) = name.strip_prefix("phase") {
        let m: usize = m.parse().map_err(|_| unknown())?;
        return repetition_phase_code(m);
    }
    Err(unknown())
}

/// Names accepted by [`builtin_code`] that ship as fixtures.
pub const BUILTIN_CODES: [&str; 6] = ["phase3", "phase5", "pair", "trivial", "trivial(3)", "phase1"];

/// The identity embedding of a `d`-dimensional space.
pub fn trivial_code(d: usize) -> Result<QuantumCode> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::param("d", format!("must satisfy 1 ≤ d ≤ {MAX_DIM}")));
    }
    let basis = (0..d).map(|i| basis_vector(d, i)).collect();
    let shape = if d.is_power_of_two() {
        Some(qubit_shape(d.trailing_zeros() as usize))
    } else {
        Some(vec![d])
    };
    QuantumCode::new(basis, shape, format!("trivial({d})"), &Tolerances::default())
}

/// `|0_L⟩ = |+⟩^{⊗m}`, `|1_L⟩ = |−⟩^{⊗m}` for odd `m ≤ 7`.
pub fn repetition_phase_code(m: usize) -> Result<QuantumCode> {
    if m % 2 == 0 || m > 7 {
        return Err(Error::param("m", "must be odd and at most 7"));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [c(h), c(h)];
    let minus = [c(h), c(-h)];
    let power = |v: &[C64]| (1..m).fold(v.to_vec(), |acc, _| kron_vec(&acc, v));
    QuantumCode::new(
        vec![power(&plus), power(&minus)],
        Some(qubit_shape(m)),
        format!("phase{m}"),
        &Tolerances::default(),
    )
}

/// A Haar-random `k`-dimensional subspace of `C^n`, drawn from the seeded
/// generator. Powers of two get a qubit shape.
pub fn random_code(n: usize, k: usize, seed: u64) -> Result<QuantumCode> {
    let mut r = rng(seed);
    random_code_from(&mut r, n, k).map(|c| c.with_label(format!("random({n},{k}; seed={seed})")))
}

pub fn random_code_from<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<QuantumCode> {
    if k == 0 || k > n || n > MAX_DIM {
        return Err(Error::param("k", format!("must satisfy 1 ≤ k ≤ n ≤ {MAX_DIM}")));
    }
    let shape = n.is_power_of_two().then(|| qubit_shape(n.trailing_zeros() as usize));
    QuantumCode::new(random_orthonormal(rng, n, k), shape, format!("random({n},{k})"), &Tolerances::default())
}
