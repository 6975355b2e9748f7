//! Command-line front end: `detect`, `eval`, `synth`, `calibrate`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

pub mod calibrate;
pub mod config;
pub mod detect;
pub mod eval;
pub mod synth;

pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn from_core(e: acontrario::Error) -> Self {
        if e.is_data_error() {
            Self::Data(e.to_string())
        } else {
            Self::Usage(e.to_string())
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
        }
    }
}

impl From<acontrario::Error> for CliError {
    fn from(e: acontrario::Error) -> Self {
        Self::from_core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "acontrario",
    version,
    about = "A contrario small-target detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect targets in every image of a manifest.
    Detect(RunArgs),
    /// Score a detections CSV against ground truth.
    Eval(RunArgs),
    /// Write a seeded synthetic dataset.
    Synth(synth::SynthArgs),
    /// Monte Carlo audit of the false-alarm guarantee.
    Calibrate(calibrate::CalibrateArgs),
}

/// Flags shared by `detect` and `eval`; each overrides the matching config key.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// INI-style `key = value` file applied before flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    pub print_config: bool,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Detections CSV (eval).
    #[arg(long)]
    pub detections: Option<PathBuf>,
    /// Ground-truth CSV (eval); without it boxes come from manifest masks.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// empirical, robust or known.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub ridge: Option<f64>,
    #[arg(long)]
    pub model_mean: Option<String>,
    #[arg(long)]
    pub model_cov: Option<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub iou_min: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    /// 4 or 8.
    #[arg(long)]
    pub connectivity: Option<String>,
    /// Bright targets only (single channel).
    #[arg(long)]
    pub one_sided: bool,
    #[arg(long)]
    pub scales: Option<usize>,
    /// Comma-separated, one per scale.
    #[arg(long)]
    pub scale_weights: Option<String>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write per-image significance rasters.
    #[arg(long)]
    pub save_maps: bool,
}

impl RunArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            c.load_file(path)?;
        }
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let pairs: [(&str, Option<String>); 17] = [
            ("manifest", path(&self.manifest)),
            ("detections", path(&self.detections)),
            ("ground_truth", path(&self.gt)),
            ("out", path(&self.out)),
            ("method", self.method.clone()),
            ("ridge", self.ridge.map(|v| v.to_string())),
            ("model_mean", self.model_mean.clone()),
            ("model_cov", self.model_cov.clone()),
            ("epsilon", self.epsilon.map(|v| v.to_string())),
            ("iou_min", self.iou_min.map(|v| v.to_string())),
            ("alpha", self.alpha.map(|v| v.to_string())),
            ("tau", self.tau.map(|v| v.to_string())),
            ("connectivity", self.connectivity.clone()),
            ("scales", self.scales.map(|v| v.to_string())),
            ("scale_weights", self.scale_weights.clone()),
            ("jobs", self.jobs.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                c.set(k, &v)?;
            }
        }
        if self.one_sided {
            c.one_sided = true;
        }
        if self.save_maps {
            c.save_maps = true;
        }
        c.validate()?;
        Ok(c)
    }
}

pub(crate) fn thread_pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::Data(format!("create {}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Data(format!("write {}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the command. Messages go to
/// `out` and `err`; the return value is the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Detect(a) => detect::run(a, out),
        Command::Eval(a) => eval::run(a, out),
        Command::Synth(a) => synth::run(a, out),
        Command::Calibrate(a) => calibrate::run(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
