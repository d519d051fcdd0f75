//! `aep`: error-probability tables, sweeps, and sample dumps for M-PSK and
//! Gray-coded DQPSK over AWGN and kappa-mu shadowed fading.

mod commands;
mod config;
mod table;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "aep",
    version,
    about = "Error-probability analysis over kappa-mu shadowed fading"
)]
struct Cli {
    /// Optional JSON run configuration; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Default)]
struct CommonOpts {
    /// Dominant-to-scattered power ratio (>= 0).
    #[arg(long)]
    kappa: Option<f64>,

    /// Number of multipath clusters (> 0, real).
    #[arg(long)]
    mu: Option<f64>,

    /// Shadowing shape parameter (> 0, real).
    #[arg(long)]
    m: Option<f64>,

    /// Mean SNR; decibels unless --linear is given.
    #[arg(long = "gamma-bar-db")]
    gamma_bar_db: Option<f64>,

    /// Modulation: `mpsk:M` (M a power of two) or `dqpsk`.
    #[arg(long)]
    scheme: Option<String>,

    /// Sweep grid as `start:stop:step` (inclusive).
    #[arg(long)]
    grid: Option<String>,

    /// Series truncation length.
    #[arg(long = "max-terms")]
    max_terms: Option<usize>,

    /// Series early-stop relative tolerance.
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,

    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,

    /// Number of deterministic RNG substreams.
    #[arg(long)]
    streams: Option<u32>,

    /// Sampler: `physical` (integer mu) or `inverse-cdf`.
    #[arg(long)]
    sampler: Option<String>,

    /// Interpret mean-SNR inputs as linear instead of dB.
    #[arg(long)]
    linear: bool,

    /// Truncation-bound tail weighting: `pochhammer` or `inverse-gamma`.
    #[arg(long = "bound-weight")]
    bound_weight: Option<String>,

    /// Output format: `csv` (default) or `json`.
    #[arg(long)]
    format: Option<String>,

    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact vs approximate M-PSK SEP reference table.
    Table2(CommonOpts),
    /// Exact vs approximate DQPSK BEP reference table.
    Table4(CommonOpts),
    /// Averaged EP vs mean SNR: closed form, asymptote, Monte Carlo, quadrature.
    AepSweep(CommonOpts),
    /// Truncation-error bound vs series length.
    Truncation(CommonOpts),
    /// Diversity order vs mean SNR.
    Diversity(CommonOpts),
    /// Exact vs fitted bound mixing weight over instantaneous SNR.
    Chi(CommonOpts),
    /// Relative error of the approximate DQPSK BEP over instantaneous SNR.
    Relerr(CommonOpts),
    /// Draw SNR samples and write a binary dump plus JSON sidecar.
    Sample(CommonOpts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Table2(_) => "table2",
            Command::Table4(_) => "table4",
            Command::AepSweep(_) => "aep-sweep",
            Command::Truncation(_) => "truncation",
            Command::Diversity(_) => "diversity",
            Command::Chi(_) => "chi",
            Command::Relerr(_) => "relerr",
            Command::Sample(_) => "sample",
        }
    }

    fn opts(&self) -> &CommonOpts {
        match self {
            Command::Table2(o)
            | Command::Table4(o)
            | Command::AepSweep(o)
            | Command::Truncation(o)
            | Command::Diversity(o)
            | Command::Chi(o)
            | Command::Relerr(o)
            | Command::Sample(o) => o,
        }
    }
}

fn exit_code_for(err: &aep_core::Error) -> i32 {
    match err {
        aep_core::Error::Convergence { .. } => 3,
        _ => 2,
    }
}

fn error_kind(err: &aep_core::Error) -> &'static str {
    match err {
        aep_core::Error::Domain(_) => "domain",
        aep_core::Error::Convergence { .. } => "convergence",
        aep_core::Error::Fit(_) => "fit",
        aep_core::Error::Io(_) => "io",
    }
}

fn main() {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match config::RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!(
                    "{}",
                    serde_json::json!({"error": error_kind(&e), "message": e.to_string()})
                );
                std::process::exit(exit_code_for(&e));
            }
        },
        None => config::RunConfig::default(),
    };

    match commands::run(&cli.command, &cfg) {
        Ok(()) => {}
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({"error": error_kind(&e), "message": e.to_string()})
            );
            std::process::exit(exit_code_for(&e));
        }
    }
}
