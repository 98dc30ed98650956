//! Batch front-end for `schur-relent`: loads states, runs distributions, estimators and bound
//! checks, and writes deterministic CSV or JSON reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
pub mod output;
mod parallel;
pub mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{write_report, Format};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] schur_relent::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("{failed} of {total} checks failed")]
    Verify { failed: usize, total: usize },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(schur_relent::Error::Parse(_)) => "parse",
            CliError::Core(schur_relent::Error::Json(_)) => "parse",
            CliError::Core(_) => "compute",
            CliError::Usage(_) => "usage",
            CliError::Read { .. } => "io",
            CliError::Write(_) => "io",
            CliError::Verify { .. } => "verify",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify { .. } => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "schur-relent", version, about = "Exact statistics of the Schur-sampling relative entropy estimator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Auto,
    Brute,
    #[value(name = "cycle_poly")]
    CyclePoly,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// State file for ρ.
    #[arg(long)]
    pub rho: PathBuf,
    /// State file for σ (full rank).
    #[arg(long)]
    pub sigma: PathBuf,
}

#[derive(Debug, Args)]
pub struct CopiesArgs {
    /// Number of copies.
    #[arg(long, conflicts_with = "n_range")]
    pub n: Option<usize>,
    /// Copies as `A:B:step`.
    #[arg(long = "n-range")]
    pub n_range: Option<String>,
    #[arg(long, value_enum, default_value = "auto")]
    pub backend: BackendChoice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    #[value(name = "random_mixed")]
    RandomMixed,
    #[value(name = "random_pure_depolarized")]
    RandomPureDepolarized,
    Diagonal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Young indices with their unitary and permutation dimensions.
    Dims {
        #[arg(long, conflicts_with = "n_range")]
        n: Option<usize>,
        #[arg(long = "n-range")]
        n_range: Option<String>,
        /// Local dimension, or a range `A:B:step`.
        #[arg(long)]
        d: String,
    },
    /// Relative entropy, varentropy, fidelity and sandwiched Rényi divergences.
    Divergence {
        #[command(flatten)]
        pair: PairArgs,
        /// Rényi orders, comma separated or `lo:hi:count`.
        #[arg(long, default_value = "0.5,0.9,1.1,2")]
        alpha: String,
    },
    /// The exact outcome distribution with per-outcome estimates.
    Distribution {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "auto")]
        backend: BackendChoice,
    },
    /// Exact mean-square error and bias of the estimate, or Monte Carlo draws with `--samples`.
    Estimate {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        copies: CopiesArgs,
        /// Emit this many sampled outcomes (`draw_index, x, x_star`) instead of the report.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Exact tail masses against the optimised large-deviation bounds.
    Tail {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        copies: CopiesArgs,
        /// Deviations ε, comma separated or `lo:hi:count`.
        #[arg(long, default_value = "0.1,0.2,0.5")]
        epsilon: String,
    },
    /// Kolmogorov–Smirnov distance of the standardised estimate from the normal law.
    Normality {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        copies: CopiesArgs,
    },
    /// Exact tail mass at `n = ⌈c d²⌉` for `σ = I/d` against the sample-complexity bound.
    ComplexityScan {
        /// Dimensions as `A:B:step`.
        #[arg(long, default_value = "2:4")]
        d: String,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Copies per `d²`; by default chosen so the simple bound equals `--target`.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 0.25)]
        target: f64,
        /// Tomography comparison parameter `t` (σ's smallest eigenvalue is at least `e^{−td}`).
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Run the invariant suite over the bundled corpus; exits 1 on any violation.
    Verify {
        /// Extra state pair to include.
        #[arg(long, requires = "sigma")]
        rho: Option<PathBuf>,
        #[arg(long, requires = "rho")]
        sigma: Option<PathBuf>,
    },
    /// Write a reproducible test state.
    GenerateStates {
        #[arg(long, value_enum)]
        kind: StateKind,
        #[arg(long)]
        d: Option<usize>,
        /// Spectrum for `diagonal` and `random_mixed`, comma separated.
        #[arg(long)]
        spectrum: Option<String>,
        /// Depolarising weight for `random_pure_depolarized`.
        #[arg(long)]
        p: Option<f64>,
    },
}

fn structured_error(err: &mut dyn Write, kind: &str, message: &str) {
    let doc = serde_json::json!({"error": {"kind": kind, "message": message}});
    let _ = err.write_all(output::to_json_string(&doc).as_bytes());
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            structured_error(err, "usage", e.to_string().trim());
            return 2;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            structured_error(err, e.kind(), &e.to_string());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let (report, verdict) = commands::dispatch(cli)?;
    match &cli.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_report(&report, cli.format, &mut f)?;
            f.flush()?;
        }
        None => write_report(&report, cli.format, out)?,
    }
    verdict
}

#[cfg(test)]
mod tests;
