use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use orbitsieve::{run, AppError, ExperimentConfig, RawConfig, Subcommand};

/// Orbit counting and affine sieve experiments on discrete subgroups of SO(n,1).
#[derive(Parser, Debug)]
#[command(name = "orbitsieve", version)]
struct Cli {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// TOML experiment config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `run.output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, overriding `run.workers`.
    #[arg(long)]
    workers: Option<usize>,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, AppError> {
    let mut raw = match &cli.config {
        Some(path) => RawConfig::load(path)?,
        None => {
            let mut raw = RawConfig::default();
            raw.group.preset = Some("pythagorean_full".into());
            raw
        }
    };
    if let Some(w) = cli.workers {
        raw.run.workers = w;
    }
    if let Some(out) = &cli.out {
        raw.run.output = out.clone();
    }
    Ok(ExperimentConfig::from_raw(raw)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("orbitsieve: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let out = config.output.clone();
    match run(cli.subcommand, &config, &out) {
        Ok(outcome) => match outcome.error {
            None => {
                for a in &outcome.manifest.artifacts {
                    println!("{}", out.join(&a.path).display());
                }
                ExitCode::SUCCESS
            }
            Some(e) => {
                eprintln!("orbitsieve {}: {e}", cli.subcommand.name());
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Err(e) => {
            eprintln!("orbitsieve: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
