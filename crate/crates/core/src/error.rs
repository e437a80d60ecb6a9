use thiserror::Error;

use crate::codes::KlReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires tensor-factor shape metadata")]
    ShapeRequired,

    #[error("qubit shape required, got factor {0}")]
    NotQubitShape(usize),

    #[error("index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("vectors are not orthonormal (max violation {violation:.3e})")]
    NotOrthonormal { violation: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not a valid state (min eigenvalue {min_eigenvalue:.3e}, hermiticity {hermiticity:.3e})")]
    NotAState { min_eigenvalue: f64, hermiticity: f64 },

    #[error("invalid parameter `{name}`: {constraint}")]
    InvalidParameter { name: String, constraint: String },

    #[error("capacity exceeded: {what} {requested} > limit {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("ensemble is not a superoperator (completeness residual {residual:.3e})")]
    NotSuperoperator { residual: f64 },

    #[error("code does not correct the ensemble (diag {:.3e}, offdiag {:.3e})", .0.max_diag_violation, .0.max_offdiag_violation)]
    NotCorrectable(Box<KlReport>),

    #[error("unknown built-in code `{0}`")]
    UnknownCode(String),

    #[error("state lies outside the code (residual {residual:.3e})")]
    NotInCode { residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &str, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            constraint: constraint.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    }
}
