//! Report envelopes and the trajectory CSV format.
//!
//! Codes, channels and recovery operators carry their own JSON readers and
//! writers (`QuantumCode::from_json`, `ChannelSpec::from_json`,
//! `RecoveryOperator::from_json`). This module adds what every report
//! shares: a reproducibility header and full-precision CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::fidelity::FidelityConfig;
use crate::{Error, Result, Tolerances};

pub const TOOL_NAME: &str = "qec-verify";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproducibilityHeader {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub tolerances: Tolerances,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityConfig>,
    /// Input files or built-in names, in argument order.
    #[serde(default)]
    pub inputs: Vec<String>,
}

impl ReproducibilityHeader {
    pub fn new(command: impl Into<String>, tolerances: Tolerances, seed: u64) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.into(),
            tolerances,
            seed,
            fidelity: None,
            inputs: Vec::new(),
        }
    }
}

/// A result together with its reproducibility header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub header: ReproducibilityHeader,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header of the trajectory CSV.
pub const TRAJECTORY_HEADER: &str = "cycle,fidelity,bound";

/// Trajectory CSV: `cycle,fidelity,bound`, one row per cycle, optionally
/// followed by extra named columns. A missing bound leaves its cell empty.
pub fn trajectory_csv(fidelity: &[f64], bound: Option<&[f64]>, extra: &[(&str, &[f64])]) -> Result<String> {
    let rows = fidelity.len();
    if let Some(b) = bound {
        if b.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: b.len(),
            });
        }
    }
    for (_, col) in extra {
        if col.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: col.len(),
            });
        }
    }
    let mut out = String::from(TRAJECTORY_HEADER);
    for (name, _) in extra {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for t in 0..rows {
        let bound_cell = bound.map(|b| format_real(b[t])).unwrap_or_default();
        write!(out, "{t},{},{bound_cell}", format_real(fidelity[t])).expect("string write");
        for (_, col) in extra {
            write!(out, ",{}", format_real(col[t])).expect("string write");
        }
        out.push('\n');
    }
    Ok(out)
}
