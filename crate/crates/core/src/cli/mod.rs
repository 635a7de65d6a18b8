//! Command line front end. Every subcommand writes one CSV table.
//!
//! Exit codes: 0 on success, 2 when arguments or configuration are invalid
//! (nothing is computed in that case), 1 on runtime failures.
//!
//! Output never depends on the worker count: each sample owns a seeded RNG
//! stream and all reductions run in input order.

mod commands;
mod config;
mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::Plan;
pub use table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "entprobe",
    version,
    about = "Entangled probes for Ornstein-Uhlenbeck spectral width estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Closed-form phase variance against Monte Carlo trajectories.
    BetaCheck,
    /// Pointwise QFI tables, closed form and eigendecomposition.
    QfiScan,
    /// Time-optimized GHZ over separable QFI across a width grid.
    RatioScan,
    /// Width above which GHZ probes beat separable ones.
    Threshold,
    /// Time-optimized QFI of Haar-random probes.
    HaarScan,
    /// Optimal probe within the excitation class family.
    FamilyOpt,
    /// Bayesian estimation error against the Cramér-Rao bound.
    BayesSim,
    /// Preparation purity needed to keep the GHZ advantage.
    Robustness,
    /// Quick oracle checks.
    Selftest,
}

/// Flags shared by all subcommands. Flags a subcommand does not use are
/// ignored, so one config file can serve every subcommand.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Flags {
    /// Noise spectral width γ (single value).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Lower end of the logarithmic γ grid.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma_min: Option<f64>,
    /// Upper end of the logarithmic γ grid.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma_max: Option<f64>,
    /// Number of points of the γ grid.
    #[arg(long, global = true, value_parser = parse_count)]
    pub gamma_points: Option<u64>,
    /// Noise coupling Γ.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Qubit counts; repeat or separate with commas.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_count)]
    pub n_qubits: Vec<u64>,
    /// Interaction times; repeat or separate with commas.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub time: Vec<f64>,
    #[arg(long, global = true, value_parser = parse_count)]
    pub seed: Option<u64>,
    /// Monte Carlo trajectories or random states.
    #[arg(long, global = true, value_parser = parse_count)]
    pub samples: Option<u64>,
    /// Random restarts of the family optimizer.
    #[arg(long, global = true, value_parser = parse_count)]
    pub restarts: Option<u64>,
    /// Measurement counts M; repeat or separate with commas.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_count)]
    pub measurements: Vec<u64>,
    /// Repetitions of each simulated experiment.
    #[arg(long, global = true, value_parser = parse_count)]
    pub repetitions: Option<u64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub prior_lo: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub prior_hi: Option<f64>,
    /// Points of the posterior grid.
    #[arg(long, global = true, value_parser = parse_count)]
    pub grid_points: Option<u64>,
    /// Mixing model: depolarized or dephased.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Scale every sample count down ten times.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true, value_parser = parse_count)]
    pub threads: Option<u64>,
    /// File of `key = value` lines mirroring the flag names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Non-negative integer, also accepted in scientific notation (`1e5`).
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code. The table goes to `--out` or `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let flags = match &cli.flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            config::merge(cli.flags.clone(), &text)?
        }
        None => cli.flags.clone(),
    };
    let plan = Plan::new(cli.command, &flags)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = flags.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        builder = builder.num_threads(n as usize);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let table = pool.install(|| plan.execute())?;

    match &flags.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                CliError::Internal(format!("cannot create {}: {e}", path.display()))
            })?;
            table.write_csv(file)
        }
        None => table.write_csv(stdout),
    }
    .map_err(|e| CliError::Internal(format!("writing CSV: {e}")))?;
    if table.failed() {
        return Err(CliError::Internal("one or more checks failed".into()));
    }
    Ok(())
}
