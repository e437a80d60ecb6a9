//! Resolution of CODE / CHANNEL / RECOVERY arguments.

use std::fs;
use std::path::Path;

use qec_verify::channels::{build_channel, ChannelKind, ChannelSpec, OperatorEnsemble};
use qec_verify::codes::{builtin_code, QuantumCode};
use qec_verify::recovery::RecoveryOperator;
use qec_verify::Tolerances;

use crate::cli::ChannelArgs;
use crate::fixtures::{channel_fixture, CODE_FIXTURES};
use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn looks_like_path(arg: &str) -> bool {
    arg.ends_with(".json") || arg.contains('/') || Path::new(arg).exists()
}

pub fn resolve_code(arg: &str, tol: &Tolerances) -> Result<QuantumCode, CliError> {
    if looks_like_path(arg) {
        let text = read(Path::new(arg))?;
        return QuantumCode::from_json(&text, tol).map_err(|e| CliError::input(format!("{arg}: {e}")));
    }
    let name = CODE_FIXTURES.iter().find(|(stem, _)| *stem == arg).map_or(arg, |(_, n)| n);
    builtin_code(name).map_err(|e| CliError::input(e.to_string()))
}

fn apply_overrides(mut spec: ChannelSpec, args: &ChannelArgs) -> ChannelSpec {
    for (name, value) in [("gamma", args.gamma), ("p", args.p), ("q", args.q)] {
        if let Some(v) = value {
            if spec.kind.parameter() == Some(name) {
                spec = spec.param(name, v);
            }
        }
    }
    if let Some(r) = args.qubits {
        spec = spec.on_qubits(r);
    }
    if let Some(e) = args.max_errors {
        spec = spec.max_errors(e);
    }
    spec
}

/// The channel specification named by `arg`, with flag overrides applied.
pub fn resolve_channel_spec(arg: &str, args: &ChannelArgs) -> Result<ChannelSpec, CliError> {
    let spec = if looks_like_path(arg) {
        let text = read(Path::new(arg))?;
        ChannelSpec::from_json(&text).map_err(|e| CliError::input(format!("{arg}: {e}")))?
    } else if let Some(spec) = channel_fixture(arg) {
        spec
    } else if let Some(kind) = ChannelKind::from_name(arg) {
        let mut spec = ChannelSpec::new(kind);
        if let Some(name) = kind.parameter() {
            let value = match name {
                "gamma" => args.gamma,
                "p" => args.p,
                _ => args.q,
            };
            let value = value.ok_or_else(|| CliError::input(format!("channel kind `{arg}` needs --{name}")))?;
            spec = spec.param(name, value);
        }
        spec
    } else {
        return Err(CliError::input(format!("`{arg}` is neither a file, a fixture nor a channel kind")));
    };
    Ok(apply_overrides(spec, args))
}

pub fn resolve_channel(arg: &str, args: &ChannelArgs, tol: &Tolerances) -> Result<OperatorEnsemble, CliError> {
    let spec = resolve_channel_spec(arg, args)?;
    build_channel(&spec, tol).map_err(|e| CliError::input(format!("{arg}: {e}")))
}

pub fn resolve_recovery(path: &Path, tol: &Tolerances) -> Result<RecoveryOperator, CliError> {
    let text = read(path)?;
    RecoveryOperator::from_json(&text, tol).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}
