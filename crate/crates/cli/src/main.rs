//! Command-line driver: forward simulations of the coupled SAW-cavity /
//! transmon device and parameter-extraction fits, with reproducible CSV
//! outputs and run manifests.

mod commands;
mod csvio;
mod manifest;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{FitModel, RunContext};
use qad_core::config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "qad",
    version,
    about = "SAW phonon cavity + transmon simulator and fitter"
)]
struct Cli {
    /// Configuration file (flat `key = value` lines; missing keys use the
    /// built-in device defaults)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override one config key; repeatable
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Output directory (overrides outputs.dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps (0 keeps the default pool)
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,

    /// RNG seed for synthetic noise injection
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Acoustic responses, cavity modes and coupling weights
    Device,
    /// Transmon transition frequencies versus flux
    Transmon,
    /// Transmission map versus flux and probe frequency
    Anticrossing,
    /// Two-tone spectroscopy phase-shift map
    Twotone,
    /// Zero-point coupling and drive-strength estimates
    Estimate,
    /// Fit a model to a dataset file
    Fit {
        /// Input CSV (trace, map, or ridge format depending on the model)
        #[arg(long)]
        input: PathBuf,
        /// Model to fit
        #[arg(long, value_enum)]
        model: FitModel,
        /// Relative peak prominence for branch extraction from maps
        #[arg(long, default_value_t = 0.1)]
        prominence: f64,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let mut cfg = ExperimentConfig::default();
            cfg.apply_text(&text)?;
            cfg
        }
        None => ExperimentConfig::default(),
    };
    for pair in &cli.set {
        let (key, value) = pair
            .split_once('=')
            .with_context(|| format!("--set expects KEY=VALUE, got '{pair}'"))?;
        cfg.set(key.trim(), value.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cfg = load_config(&cli)?;
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    let ctx = RunContext {
        cfg,
        out_dir,
        seed: cli.seed,
        threads: cli.threads,
    };
    match &cli.command {
        Command::Device => commands::run_device(&ctx),
        Command::Transmon => commands::run_transmon(&ctx),
        Command::Anticrossing => commands::run_anticrossing(&ctx),
        Command::Twotone => commands::run_twotone(&ctx),
        Command::Estimate => commands::run_estimate(&ctx),
        Command::Fit {
            input,
            model,
            prominence,
        } => commands::run_fit(&ctx, input, *model, *prominence),
    }
}

/// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure.
fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<qad_core::Error>() {
            return match core {
                qad_core::Error::InvalidInput(_) | qad_core::Error::Config(_) => 2,
                qad_core::Error::Numerical(_) | qad_core::Error::Convergence(_) => 3,
            };
        }
    }
    if err.to_string().contains("did not converge") {
        return 3;
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}
