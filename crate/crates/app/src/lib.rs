//! Experiment driver for `orbitsieve`: configuration, subcommands, run
//! manifests and the acceptance checks.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::path::{Path, PathBuf};

use orbitsieve_core::measures::MeasureError;
use orbitsieve_core::orbit::OrbitError;
use orbitsieve_core::sieve::SieveError;

pub use config::{ConfigError, ExperimentConfig, RawConfig};
pub use output::{Manifest, RunContext, MANIFEST};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Compute(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl AppError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        AppError::Io {
            path: path.to_owned(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Budget(_) => 3,
            AppError::Verification(_) => 4,
            AppError::Compute(_) | AppError::Io { .. } => 1,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            AppError::Config(_) => "config_error",
            AppError::Budget(_) => "budget_exceeded",
            AppError::Verification(_) => "verification_failed",
            AppError::Compute(_) | AppError::Io { .. } => "error",
        }
    }
}

impl From<OrbitError> for AppError {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::OrbitBudget { .. } | OrbitError::BallBudget { .. } => AppError::Budget(e.to_string()),
            e => AppError::Compute(e.to_string()),
        }
    }
}

impl From<SieveError> for AppError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::ModulusTooLarge { .. }
            | SieveError::NotSaturated { .. }
            | SieveError::FactorizationTimeout(_)
            | SieveError::TooManyDivisors { .. } => AppError::Budget(e.to_string()),
            e => AppError::Compute(e.to_string()),
        }
    }
}

impl From<MeasureError> for AppError {
    fn from(e: MeasureError) -> Self {
        AppError::Compute(e.to_string())
    }
}

/// The CLI subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Orbit,
    Count,
    Exponent,
    Ps,
    SieveLocal,
    SieveRun,
    AlmostPrime,
    Oracle,
    Verify,
}

impl Subcommand {
    pub const ALL: [Subcommand; 9] = [
        Subcommand::Orbit,
        Subcommand::Count,
        Subcommand::Exponent,
        Subcommand::Ps,
        Subcommand::SieveLocal,
        Subcommand::SieveRun,
        Subcommand::AlmostPrime,
        Subcommand::Oracle,
        Subcommand::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Orbit => "orbit",
            Subcommand::Count => "count",
            Subcommand::Exponent => "exponent",
            Subcommand::Ps => "ps",
            Subcommand::SieveLocal => "sieve-local",
            Subcommand::SieveRun => "sieve-run",
            Subcommand::AlmostPrime => "almost-prime",
            Subcommand::Oracle => "oracle",
            Subcommand::Verify => "verify",
        }
    }
}

/// Outcome of [`run`]: the manifest written next to the artifacts.
#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub error: Option<AppError>,
}

/// Runs a subcommand in a worker pool of `config.workers` threads and
/// writes `manifest.json` into `out`, whether or not the run succeeded.
pub fn run(sub: Subcommand, config: &ExperimentConfig, out: &Path) -> Result<RunOutcome, AppError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| AppError::Compute(e.to_string()))?;
    let mut ctx = RunContext::new(out, config.budgets.timeout_secs)?;
    let result = pool.install(|| commands::dispatch(sub, config, &mut ctx));
    let error = result.err();
    let manifest = Manifest {
        tool: "orbitsieve",
        version: env!("CARGO_PKG_VERSION"),
        core_version: orbitsieve_core::VERSION,
        subcommand: sub.name().to_owned(),
        config_sha256: config.raw.hash_hex(),
        preset: config.preset.clone(),
        group: config.group.hash_hex(),
        workers: config.workers,
        seed: config.seed,
        status: error.as_ref().map_or("ok", AppError::status).to_owned(),
        message: error.as_ref().map(ToString::to_string),
        timings: ctx.timings.clone(),
        artifacts: ctx.artifacts.clone(),
    };
    let path = out.join(MANIFEST);
    std::fs::write(&path, output::to_json(&manifest)).map_err(|e| AppError::io(&path, e))?;
    Ok(RunOutcome { manifest, error })
}
