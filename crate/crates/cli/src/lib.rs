//! The `qecv` command-line front end, as a library so it can be tested
//! without spawning processes.

pub mod cli;
pub mod fixtures;
mod inputs;
mod render;

use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use qec_verify::channels::{build_channel, ChannelKind, ChannelSpec, OperatorEnsemble};
use qec_verify::codes::{kl_check, naive_counting_bound, qubit_lower_bound, reduced_dm_check, QuantumCode, BUILTIN_CODES};
use qec_verify::fidelity::{entangled_fidelity, independent_error_bound, min_fidelity, FidelityConfig};
use qec_verify::io::{trajectory_csv, ReproducibilityHeader, Report};
use qec_verify::linalg::PureState;
use qec_verify::memory::{run_memory, BoundParameters, MemoryOptions};
use qec_verify::recovery::{composite, synthesize_recovery, verify_recovery, RecoveryOperator, SynthesisOptions};
use qec_verify::{Error, Tolerances, C64};

use cli::{ChannelArgs, Cli, Command, Format, GlobalArgs};
use inputs::{resolve_channel, resolve_channel_spec, resolve_code, resolve_recovery};

/// Exit status for a passed check.
pub const EXIT_PASS: i32 = 0;
/// Exit status for a failed check.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for unusable input.
pub const EXIT_INPUT: i32 = 2;

/// An error that ends the command with a diagnostic on standard error.
#[derive(Debug)]
pub struct CliError {
    pub exit: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            exit: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = if matches!(e, Error::NotCorrectable(_)) { EXIT_FAIL } else { EXIT_INPUT };
        Self {
            exit,
            message: e.to_string(),
        }
    }
}

/// What a command produced: the exit status and the report text.
#[derive(Debug)]
pub struct Outcome {
    pub exit: i32,
    pub output: String,
}

struct Context {
    tol: Tolerances,
    fidelity: FidelityConfig,
    header: ReproducibilityHeader,
    format: Format,
}

impl Context {
    fn report<T: Serialize>(&self, result: &T) -> String {
        let report = Report {
            header: self.header.clone(),
            result,
        };
        match self.format {
            Format::Json => report.to_json() + "\n",
            Format::Text => render::text(&serde_json::to_value(&report).expect("reports serialize")),
        }
    }
}

fn context(global: &GlobalArgs, command: &str, inputs: Vec<String>) -> Result<Context, CliError> {
    let mut tol = Tolerances::default();
    if let Some(t) = global.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::input(format!("tolerance must be positive and finite, got {t}")));
        }
        tol = tol.with_decision_tol(t);
    }
    let fidelity = FidelityConfig {
        seed: global.seed,
        ..FidelityConfig::default()
    };
    let mut header = ReproducibilityHeader::new(command, tol, global.seed);
    header.inputs = inputs;
    if matches!(command, "fidelity" | "memory") {
        header.fidelity = Some(fidelity.clone());
    }
    Ok(Context {
        tol,
        fidelity,
        header,
        format: global.format,
    })
}

/// Run a parsed command line and write its report to `--out` or return it.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let outcome = dispatch(&cli)?;
    if let Some(path) = &cli.global.out {
        fs::write(path, &outcome.output).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        return Ok(Outcome {
            exit: outcome.exit,
            output: String::new(),
        });
    }
    Ok(outcome)
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Check {
            code,
            channel,
            params,
            reduced,
        } => check(&context(g, "check", vec![code.clone(), channel.clone()])?, code, channel, params, *reduced),
        Command::Synthesize {
            code,
            channel,
            params,
            recovery_out,
        } => synthesize(
            &context(g, "synthesize", vec![code.clone(), channel.clone()])?,
            code,
            channel,
            params,
            recovery_out.as_deref(),
        ),
        Command::Fidelity {
            code,
            channel,
            params,
            recovery,
            entangled,
        } => {
            let mut inputs = vec![code.clone(), channel.clone()];
            inputs.extend(recovery.iter().map(|p| p.display().to_string()));
            fidelity(&context(g, "fidelity", inputs)?, code, channel, params, recovery.as_deref(), *entangled)
        }
        Command::Memory {
            code,
            channel,
            params,
            cycles,
            recovery,
            compare,
            worst_case,
        } => {
            let mut inputs = vec![code.clone()];
            inputs.extend(channel.iter().cloned());
            inputs.extend(recovery.iter().map(|p| p.display().to_string()));
            let ctx = context(g, "memory", inputs)?;
            memory(
                &ctx,
                MemoryRequest {
                    code,
                    channel: channel.as_deref(),
                    params,
                    cycles: *cycles,
                    recovery: recovery.as_deref(),
                    compare: *compare,
                    worst_case: *worst_case,
                },
            )
        }
        Command::Bounds { r, e, k, p } => bounds(&context(g, "bounds", vec![])?, *r, *e, *k, *p),
        Command::Info { name, params } => {
            info(&context(g, "info", name.iter().cloned().collect())?, name.as_deref(), params)
        }
    }
}

fn check(ctx: &Context, code: &str, channel: &str, params: &ChannelArgs, reduced: Option<usize>) -> Result<Outcome, CliError> {
    let code = resolve_code(code, &ctx.tol)?;
    let errors = resolve_channel(channel, params, &ctx.tol)?;
    let kl = kl_check(&code, &errors, ctx.tol.kl)?;
    let reduced = reduced.map(|e| reduced_dm_check(&code, e, ctx.tol.kl)).transpose()?;
    let passed = kl.passed && reduced.as_ref().map_or(true, |r| r.passed);
    let result = json!({
        "passed": passed,
        "code": code.label(),
        "channel": errors.label(),
        "correction_conditions": kl,
        "reduced_density_criterion": reduced,
    });
    Ok(Outcome {
        exit: if passed { EXIT_PASS } else { EXIT_FAIL },
        output: ctx.report(&result),
    })
}

fn synthesize(
    ctx: &Context,
    code: &str,
    channel: &str,
    params: &ChannelArgs,
    recovery_out: Option<&std::path::Path>,
) -> Result<Outcome, CliError> {
    let code = resolve_code(code, &ctx.tol)?;
    let errors = resolve_channel(channel, params, &ctx.tol)?;
    let kl = kl_check(&code, &errors, ctx.tol.kl)?;
    if !kl.passed {
        let result = json!({ "passed": false, "correction_conditions": kl });
        return Ok(Outcome {
            exit: EXIT_FAIL,
            output: ctx.report(&result),
        });
    }
    let rec = synthesize_recovery(&code, &errors, &ctx.tol, SynthesisOptions::default())?;
    let verification = verify_recovery(&code, &errors, &rec, &ctx.tol)?;
    let nontrivial = rec
        .ensemble()
        .operators()
        .iter()
        .filter(|m| m.max_abs() > ctx.tol.structure)
        .count();
    let rec_json = rec.to_json();
    if let Some(path) = recovery_out {
        fs::write(path, rec_json.clone() + "\n").map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    let result = json!({
        "passed": verification.passed,
        "syndrome_dim": rec.syndrome_dim(),
        "complement_dim": rec.complement_dim(),
        "recovery_elements": rec.ensemble().len(),
        "nontrivial_elements": nontrivial,
        "verification": verification,
        "recovery": serde_json::from_str::<Value>(&rec_json).expect("recovery JSON"),
    });
    Ok(Outcome {
        exit: if verification.passed { EXIT_PASS } else { EXIT_FAIL },
        output: ctx.report(&result),
    })
}

fn fidelity(
    ctx: &Context,
    code: &str,
    channel: &str,
    params: &ChannelArgs,
    recovery: Option<&std::path::Path>,
    entangled: bool,
) -> Result<Outcome, CliError> {
    let code = resolve_code(code, &ctx.tol)?;
    let mut ensemble = resolve_channel(channel, params, &ctx.tol)?;
    if let Some(path) = recovery {
        let rec = resolve_recovery(path, &ctx.tol)?;
        ensemble = composite(&ensemble, &rec)?;
    }
    let report = min_fidelity(&code, &ensemble, &ctx.fidelity)?;
    let entangled = entangled
        .then(|| entangled_fidelity(&code, &ensemble, &ctx.fidelity, &ctx.tol))
        .transpose()?;
    let bound_ok = entangled
        .as_ref()
        .and_then(|e| e.bound_check.as_ref())
        .map_or(true, |b| b.satisfied);
    let result = json!({
        "min_fidelity": report.value,
        "pure": report,
        "entangled": entangled,
    });
    Ok(Outcome {
        exit: if bound_ok { EXIT_PASS } else { EXIT_FAIL },
        output: ctx.report(&result),
    })
}

struct MemoryRequest<'a> {
    code: &'a str,
    channel: Option<&'a str>,
    params: &'a ChannelArgs,
    cycles: usize,
    recovery: Option<&'a std::path::Path>,
    compare: bool,
    worst_case: bool,
}

/// Per-qubit noise selected by --gamma or --p.
struct PerQubitNoise {
    kind: ChannelKind,
    name: &'static str,
    value: f64,
    /// Channel acting on an unprotected qubit, for --compare.
    bare: ChannelKind,
    /// `p` of the identity-weight form `{√(1−p) I, …}`.
    error_probability: f64,
}

fn per_qubit_noise(params: &ChannelArgs) -> Result<Option<PerQubitNoise>, CliError> {
    match (params.gamma, params.p) {
        (Some(_), Some(_)) => Err(CliError::input("give either --gamma or --p, not both")),
        (Some(g), None) => Ok(Some(PerQubitNoise {
            kind: ChannelKind::DecoherencePmBasis,
            name: "gamma",
            value: g,
            bare: ChannelKind::Decoherence,
            error_probability: (1.0 - (-g).exp()) / 2.0,
        })),
        (None, Some(p)) => Ok(Some(PerQubitNoise {
            kind: ChannelKind::PhaseFlip,
            name: "p",
            value: p,
            bare: ChannelKind::PhaseFlip,
            error_probability: p,
        })),
        (None, None) => Ok(None),
    }
}

/// The largest `e` whose `e`-error family the code corrects, and the
/// recovery synthesized for it.
fn largest_corrected_family(
    code: &QuantumCode,
    noise: &PerQubitNoise,
    r: usize,
    tol: &Tolerances,
) -> Result<(usize, RecoveryOperator), CliError> {
    for e in (0..=r).rev() {
        let spec = ChannelSpec::new(noise.kind).param(noise.name, noise.value).on_qubits(r).max_errors(e);
        let family = build_channel(&spec, tol)?;
        if kl_check(code, &family, tol.kl)?.passed {
            return Ok((e, synthesize_recovery(code, &family, tol, SynthesisOptions::default())?));
        }
    }
    Err(CliError::input("no error family is corrected, not even the error-free one"))
}

fn uniform_logical_state(code: &QuantumCode, tol: &Tolerances) -> Result<PureState, CliError> {
    let a = C64::new(1.0 / (code.k() as f64).sqrt(), 0.0);
    Ok(code.state(&vec![a; code.k()], tol)?)
}

fn memory(ctx: &Context, req: MemoryRequest<'_>) -> Result<Outcome, CliError> {
    let tol = &ctx.tol;
    let code = resolve_code(req.code, tol)?;
    let noise = per_qubit_noise(req.params)?;
    let (channel, noise_r): (OperatorEnsemble, Option<usize>) = match (req.channel, &noise) {
        (Some(arg), _) => (resolve_channel(arg, req.params, tol)?, None),
        (None, Some(n)) => {
            let r = code.qubits().ok_or_else(|| CliError::input("per-qubit noise needs a qubit code"))?;
            let spec = ChannelSpec::new(n.kind).param(n.name, n.value).on_qubits(r);
            (build_channel(&spec, tol)?, Some(r))
        }
        (None, None) => return Err(CliError::input("memory needs a CHANNEL, --gamma or --p")),
    };
    let (recovery, corrected) = match (req.recovery, &noise, noise_r) {
        (Some(path), _, _) => (resolve_recovery(path, tol)?, None),
        (None, Some(n), Some(r)) => {
            let (e, rec) = largest_corrected_family(&code, n, r, tol)?;
            (rec, Some(e))
        }
        _ => (synthesize_recovery(&code, &channel, tol, SynthesisOptions::default())?, None),
    };
    let bound = match (&noise, noise_r, corrected) {
        (Some(n), Some(r), Some(e)) => Some(BoundParameters {
            r,
            e,
            p: n.error_probability,
        }),
        _ => None,
    };
    let options = MemoryOptions {
        worst_case: req.worst_case || req.compare,
        bound,
        fidelity: ctx.fidelity.clone(),
    };
    let initial = uniform_logical_state(&code, tol)?;
    let run = run_memory(&code, &channel, &recovery, &initial, req.cycles, &options, tol)?;

    let uncoded = if req.compare {
        let n = noise
            .as_ref()
            .ok_or_else(|| CliError::input("--compare needs --gamma or --p"))?;
        let qubit = qec_verify::codes::trivial_code(2)?;
        let bare = build_channel(&ChannelSpec::new(n.bare).param(n.name, n.value), tol)?;
        let bare_run = run_memory(
            &qubit,
            &bare,
            &RecoveryOperator::identity(2),
            &uniform_logical_state(&qubit, tol)?,
            req.cycles,
            &MemoryOptions {
                worst_case: true,
                ..MemoryOptions::default()
            },
            tol,
        )?;
        bare_run.worst_case_fidelity
    } else {
        None
    };

    let output = match ctx.format {
        Format::Json | Format::Text if ctx.format == Format::Json => {
            let result = json!({
                "corrected_errors": corrected,
                "run": run,
                "uncoded_worst_case": uncoded,
            });
            ctx.report(&result)
        }
        _ => {
            let mut extra: Vec<(&str, &[f64])> = Vec::new();
            if let Some(w) = &run.worst_case_fidelity {
                extra.push(("coded_worst", w));
            }
            if let Some(u) = &uncoded {
                extra.push(("uncoded_worst", u));
            }
            trajectory_csv(&run.per_cycle_fidelity, run.bound_curve.as_deref(), &extra)?
        }
    };
    Ok(Outcome { exit: EXIT_PASS, output })
}

fn bounds(ctx: &Context, r: usize, e: usize, k: usize, p: Option<f64>) -> Result<Outcome, CliError> {
    let lower = qubit_lower_bound(e, k)?;
    let counting = naive_counting_bound(r, e, k)?;
    let independent = p.map(|p| independent_error_bound(r, e, p)).transpose()?;
    let result = json!({
        "r": r,
        "e": e,
        "k": k,
        "qubit_lower_bound": lower,
        "meets_qubit_lower_bound": r >= lower,
        "naive_counting": counting,
        "p": p,
        "independent_error_bound": independent,
    });
    Ok(Outcome {
        exit: EXIT_PASS,
        output: ctx.report(&result),
    })
}

fn code_info(code: &QuantumCode) -> Value {
    json!({
        "type": "code",
        "label": code.label(),
        "n": code.n(),
        "k": code.k(),
        "shape": code.shape(),
        "basis": code.basis(),
    })
}

fn info(ctx: &Context, name: Option<&str>, params: &ChannelArgs) -> Result<Outcome, CliError> {
    let result = match name {
        None => json!({
            "code_fixtures": fixtures::CODE_FIXTURES.iter().map(|(s, _)| *s).collect::<Vec<_>>(),
            "builtin_codes": BUILTIN_CODES,
            "channel_fixtures": fixtures::channel_fixtures().iter().map(|(s, _)| *s).collect::<Vec<_>>(),
            "channel_kinds": ChannelKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(),
        }),
        Some(name) => match resolve_code(name, &ctx.tol) {
            Ok(code) => code_info(&code),
            Err(code_err) => {
                let spec = resolve_channel_spec(name, params).map_err(|e| {
                    CliError::input(format!("{} (as a code: {})", e.message, code_err.message))
                })?;
                let e = build_channel(&spec, &ctx.tol)?;
                json!({
                    "type": "channel",
                    "label": e.label(),
                    "spec": spec,
                    "dim": e.dim(),
                    "operators": e.operators(),
                    "superoperator": e.is_superoperator(),
                    "completeness_residual": e.completeness_residual(),
                    "strength": e.strength(),
                })
            }
        },
    };
    Ok(Outcome {
        exit: EXIT_PASS,
        output: ctx.report(&result),
    })
}
