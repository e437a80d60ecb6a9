use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact verification of quantum error-correcting codes.
///
/// CODE and CHANNEL arguments accept a JSON file path, a built-in fixture
/// name (see `qecv info`), a built-in code name such as `phase3` or
/// `trivial(3)`, or a channel kind such as `decoherence` (parameters from
/// --gamma/--p/--q).
///
/// Exit status: 0 passed, 1 failed, 2 input error.
#[derive(Debug, Parser)]
#[command(name = "qecv", version, about, long_about = None)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Decision tolerance for the correction conditions and verification.
    #[arg(long, global = true, env = "QEC_TOL")]
    pub tol: Option<f64>,
    /// Seed for randomized optimizers; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Parameters for built-in channel kinds and overrides for fixtures.
#[derive(Debug, Args, Default, Clone)]
pub struct ChannelArgs {
    /// Decoherence rate γ.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Error probability p.
    #[arg(long)]
    pub p: Option<f64>,
    /// Overlap parameter q.
    #[arg(long)]
    pub q: Option<f64>,
    /// Apply the channel independently to this many qubits.
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Keep only products with at most this many errors.
    #[arg(long)]
    pub max_errors: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the correction conditions of CODE against CHANNEL.
    Check {
        code: String,
        channel: String,
        #[command(flatten)]
        params: ChannelArgs,
        /// Also run the reduced-density-matrix criterion for this many errors.
        #[arg(long)]
        reduced: Option<usize>,
    },
    /// Construct and verify a recovery operator.
    Synthesize {
        code: String,
        channel: String,
        #[command(flatten)]
        params: ChannelArgs,
        /// Write the recovery operator as JSON to this file.
        #[arg(long)]
        recovery_out: Option<PathBuf>,
    },
    /// Worst-case fidelity of CHANNEL (after RECOVERY, if given) on CODE.
    Fidelity {
        code: String,
        channel: String,
        #[command(flatten)]
        params: ChannelArgs,
        /// Recovery operator file applied after the channel.
        #[arg(long)]
        recovery: Option<PathBuf>,
        /// Also compute entangled-state fidelities and check their bound.
        #[arg(long)]
        entangled: bool,
    },
    /// Iterate noise and recovery on a stored logical state; prints CSV.
    Memory {
        code: String,
        /// Channel on the whole coding space; omit to use --gamma or --p per qubit.
        channel: Option<String>,
        #[command(flatten)]
        params: ChannelArgs,
        #[arg(long, default_value_t = 10)]
        cycles: usize,
        /// Recovery operator file; synthesized when omitted.
        #[arg(long)]
        recovery: Option<PathBuf>,
        /// Also run an unprotected qubit under the same per-qubit noise.
        #[arg(long)]
        compare: bool,
        /// Record the worst case over code states at every cycle.
        #[arg(long)]
        worst_case: bool,
    },
    /// Qubit-count bounds and the independent-error fidelity bound.
    Bounds {
        /// Qubits.
        #[arg(long)]
        r: usize,
        /// Errors corrected.
        #[arg(long)]
        e: usize,
        /// Code dimension.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Per-qubit error probability.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Show a fixture's matrices; lists fixtures when NAME is omitted.
    Info {
        name: Option<String>,
        #[command(flatten)]
        params: ChannelArgs,
    },
}
