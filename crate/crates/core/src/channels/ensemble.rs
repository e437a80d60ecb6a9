use crate::linalg::{largest_eigenvalue, ComplexMatrix, DensityMatrix, QubitSubset};
use crate::{Error, Result, Tolerances, MAX_DIM};

/// Upper bound on `operators × dim²` for any constructed ensemble.
pub const MAX_ENSEMBLE_ENTRIES: usize = 1 << 24;

/// A finite family of interaction operators `{A_a}` on one space.
///
/// Operator 0 is, by convention, the identity-like or dominant element for
/// channels that have one.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorEnsemble {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    label: String,
    is_superoperator: bool,
}

impl OperatorEnsemble {
    /// All operators must be square with a common dimension; the
    /// superoperator flag is evaluated with `tol.structure`.
    pub fn new(operators: Vec<ComplexMatrix>, label: impl Into<String>, tol: &Tolerances) -> Result<Self> {
        let dim = match operators.first() {
            Some(op) => op.rows(),
            None => return Err(Error::param("operators", "ensemble must contain at least one operator")),
        };
        for op in &operators {
            if !op.is_square() || op.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if op.rows() != dim { op.rows() } else { op.cols() },
                });
            }
            if !op.is_finite() {
                return Err(Error::param("operators", "entries must be finite"));
            }
        }
        check_capacity(dim, operators.len())?;
        let mut e = Self {
            dim,
            operators,
            label: label.into(),
            is_superoperator: false,
        };
        e.validate_superoperator(tol);
        Ok(e)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
            label: format!("identity({dim})"),
            is_superoperator: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_superoperator(&self) -> bool {
        self.is_superoperator
    }

    /// `Σ_a A_a†A_a`
    pub fn gram_sum(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.operators {
            sum = &sum + &a.adjoint_mul(a).expect("square");
        }
        sum
    }

    /// `‖Σ_a A_a†A_a − I‖_max`
    pub fn completeness_residual(&self) -> f64 {
        self.gram_sum().max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Recomputes the completeness residual and refreshes the cached flag.
    pub fn validate_superoperator(&mut self, tol: &Tolerances) -> f64 {
        let r = self.completeness_residual();
        self.is_superoperator = r < tol.structure;
        r
    }

    /// Fails with [`Error::NotSuperoperator`] unless completeness holds.
    pub fn require_superoperator(&self, tol: &Tolerances) -> Result<()> {
        let residual = self.completeness_residual();
        if residual < tol.structure {
            Ok(())
        } else {
            Err(Error::NotSuperoperator { residual })
        }
    }

    /// `ρ ↦ Σ_a A_a ρ A_a†`
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.operators {
            let ar = a.matmul(rho.matrix())?;
            out = &out + &ar.matmul(&a.adjoint())?;
        }
        DensityMatrix::from_matrix_unchecked(out, rho.shape().map(<[usize]>::to_vec))
    }

    /// `sup_x Σ ⟨x|A†A|x⟩`, the largest eigenvalue of `Σ A†A`.
    pub fn strength(&self) -> f64 {
        largest_eigenvalue(&self.gram_sum())
    }

    /// `{A_i ⊗ B_j}` in row-major `(i, j)` order.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        check_capacity(self.dim * other.dim, self.len() * other.len())?;
        let operators = self
            .operators
            .iter()
            .flat_map(|a| other.operators.iter().map(move |b| a.kron(b)))
            .collect();
        let mut e = Self {
            dim: self.dim * other.dim,
            operators,
            label: format!("{} ⊗ {}", self.label, other.label),
            is_superoperator: false,
        };
        e.validate_superoperator(&Tolerances::default());
        Ok(e)
    }

    /// `{B_r A_a}`: apply `self` first, then `after`. Ordered `r`-major.
    pub fn then(&self, after: &Self) -> Result<Self> {
        if self.dim != after.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: after.dim,
            });
        }
        check_capacity(self.dim, self.len() * after.len())?;
        let mut operators = Vec::with_capacity(self.len() * after.len());
        for r in &after.operators {
            for a in &self.operators {
                operators.push(r.matmul(a)?);
            }
        }
        let mut e = Self {
            dim: self.dim,
            operators,
            label: format!("{} ∘ {}", after.label, self.label),
            is_superoperator: false,
        };
        e.validate_superoperator(&Tolerances::default());
        Ok(e)
    }

    /// Restrict to the listed operator indices (in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut ops = Vec::with_capacity(indices.len());
        for &i in indices {
            ops.push(
                self.operators
                    .get(i)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.len() })?,
            );
        }
        Self::new(ops, format!("{}[subset]", self.label), &Tolerances::default())
    }
}

fn check_capacity(dim: usize, count: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::Capacity {
            what: "dimension",
            requested: dim,
            limit: MAX_DIM,
        });
    }
    let entries = count.saturating_mul(dim * dim);
    if entries > MAX_ENSEMBLE_ENTRIES {
        return Err(Error::Capacity {
            what: "ensemble entries",
            requested: entries,
            limit: MAX_ENSEMBLE_ENTRIES,
        });
    }
    Ok(())
}

/// `e^{⊗r}`: every `r`-fold tensor product of the one-site operators.
pub fn tensor_power(e: &OperatorEnsemble, r: usize) -> Result<OperatorEnsemble> {
    if r == 0 {
        return Err(Error::param("r", "tensor power must be at least 1"));
    }
    let dim = e
        .dim
        .checked_pow(r as u32)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::Capacity {
            what: "dimension",
            requested: e.dim.saturating_pow(r as u32),
            limit: MAX_DIM,
        })?;
    check_capacity(dim, e.len().saturating_pow(r as u32))?;
    let mut acc = e.clone();
    for _ in 1..r {
        acc = acc.kron(e)?;
    }
    acc.label = format!("({})^⊗{r}", e.label);
    acc.validate_superoperator(&Tolerances::default());
    Ok(acc)
}

/// All `r`-fold tensor products in which at most `max_errors` factors differ
/// from operator 0 of `basis`.
///
/// Products are enumerated by error weight, then by the lexicographic set of
/// affected positions, then by the lexicographic choice of non-zero factor
/// indices. Each index tuple appears once, so the count is
/// `Σ_{w≤e} C(r,w)·(m−1)^w`.
pub fn e_error_family(basis: &OperatorEnsemble, r: usize, max_errors: usize) -> Result<OperatorEnsemble> {
    if r == 0 {
        return Err(Error::param("r", "need at least one site"));
    }
    if max_errors > r {
        return Err(Error::param("max_errors", format!("must not exceed the number of sites ({r})")));
    }
    let dim = basis
        .dim
        .checked_pow(r as u32)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::Capacity {
            what: "dimension",
            requested: basis.dim.saturating_pow(r as u32),
            limit: MAX_DIM,
        })?;
    let m = basis.len();
    let tuples = error_index_tuples(r, m, max_errors);
    check_capacity(dim, tuples.len())?;
    let operators = tuples
        .iter()
        .map(|t| {
            t.iter()
                .skip(1)
                .fold(basis.operators[t[0]].clone(), |acc, &i| acc.kron(&basis.operators[i]))
        })
        .collect();
    let mut e = OperatorEnsemble {
        dim,
        operators,
        label: format!("{}: ≤{max_errors} errors on {r} sites", basis.label),
        is_superoperator: false,
    };
    e.validate_superoperator(&Tolerances::default());
    Ok(e)
}

/// Factor-index tuples (length `r`, entries in `0..m`) with at most
/// `max_errors` nonzero entries, in the order used by [`e_error_family`].
pub fn error_index_tuples(r: usize, m: usize, max_errors: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for w in 0..=max_errors.min(r) {
        if w > 0 && m < 2 {
            break;
        }
        for positions in QubitSubset::all_of_size(r, w) {
            // odometer over (m−1)^w choices of non-identity factors
            let mut choice = vec![1usize; w];
            loop {
                let mut t = vec![0usize; r];
                for (&p, &c) in positions.indices().iter().zip(&choice) {
                    t[p] = c;
                }
                out.push(t);
                let mut k = w;
                while k > 0 && choice[k - 1] + 1 == m {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                choice[k - 1] += 1;
                for c in &mut choice[k..] {
                    *c = 1;
                }
            }
        }
    }
    out
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on `site` of `n_sites` sites of dimension
/// `op.rows()`.
pub fn embed(op: &ComplexMatrix, site: usize, n_sites: usize) -> Result<ComplexMatrix> {
    if site >= n_sites {
        return Err(Error::IndexOutOfRange {
            index: site,
            len: n_sites,
        });
    }
    let d = op.rows();
    let mut acc = ComplexMatrix::identity(1);
    for s in 0..n_sites {
        acc = if s == site {
            acc.kron(op)
        } else {
            acc.kron(&ComplexMatrix::identity(d))
        };
    }
    if acc.rows() > MAX_DIM {
        return Err(Error::Capacity {
            what: "dimension",
            requested: acc.rows(),
            limit: MAX_DIM,
        });
    }
    Ok(acc)
}
