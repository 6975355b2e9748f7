//! `calibrate`: false alarms on pure noise against the `<= epsilon` bound.
//!
//! Trial `t` draws one image with seed `derive_seed(seed, t)`. Each image is
//! scored twice, with the true model and with the model estimated from the
//! image itself. A false alarm is a pixel with `NFA <= epsilon`; connected
//! groups of them are reported as detections.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use acontrario::background::{estimate_background, BackgroundModel, DEFAULT_RIDGE};
use acontrario::detect::{connected_components, threshold_mask};
use acontrario::nfa::{nfa_gaussian_map, NfaMap};
use acontrario::rng::derive_seed;
use acontrario::synth::gen_noise_image;
use acontrario::{Connectivity, EstimationMethod};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::parse_list;
use crate::{create_dir, thread_pool, write_file, CliError, CliResult};

pub const MIN_TRIALS: usize = 30;

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, default_value_t = 256)]
    pub height: usize,
    #[arg(long, default_value_t = 256)]
    pub width: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value = "0.1,1,10")]
    pub epsilons: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub mean: String,
    #[arg(long, default_value = "1")]
    pub cov: String,
    #[arg(long, default_value_t = DEFAULT_RIDGE)]
    pub ridge: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Directory for `calibration.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationRow {
    pub model: &'static str,
    pub epsilon: f64,
    pub trials: usize,
    pub mean_false_alarms: f64,
    pub standard_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_detections: f64,
    /// `ci_low <= epsilon`: the observed mean is compatible with the bound.
    pub pass: bool,
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `(false alarms, detections)` per epsilon.
fn counts(map: &NfaMap, epsilons: &[f64]) -> acontrario::Result<Vec<(f64, f64)>> {
    epsilons
        .iter()
        .map(|&eps| {
            let mask = threshold_mask(map, eps)?;
            let comps = connected_components(&mask, Connectivity::Eight).len();
            Ok((mask.count() as f64, comps as f64))
        })
        .collect()
}

pub fn calibration_table(args: &CalibrateArgs) -> CliResult<Vec<CalibrationRow>> {
    let usage = |m: String| CliError::Usage(m);
    if args.trials < MIN_TRIALS {
        return Err(usage(format!("--trials must be at least {MIN_TRIALS}")));
    }
    let epsilons = parse_list(&args.epsilons).map_err(|e| usage(format!("--epsilons: {e}")))?;
    if epsilons.is_empty() || epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(usage("--epsilons must be positive and finite".into()));
    }
    let mean = parse_list(&args.mean).map_err(|e| usage(format!("--mean: {e}")))?;
    let cov = parse_list(&args.cov).map_err(|e| usage(format!("--cov: {e}")))?;
    let eta = (args.height * args.width) as u64;
    let known = BackgroundModel::known(mean.clone(), cov.clone(), eta)?;

    let pool = thread_pool(args.jobs)?;
    let per_trial: Vec<[Vec<(f64, f64)>; 2]> = pool.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|t| -> CliResult<[Vec<(f64, f64)>; 2]> {
                let seed = derive_seed(args.seed, t as u64);
                let img = gen_noise_image(args.height, args.width, &mean, &cov, seed)?;
                let est = estimate_background(&img, EstimationMethod::Empirical, args.ridge)?;
                Ok([
                    counts(&nfa_gaussian_map(&img, &known)?, &epsilons)?,
                    counts(&nfa_gaussian_map(&img, &est)?, &epsilons)?,
                ])
            })
            .collect::<CliResult<_>>()
    })?;

    let mut rows = Vec::new();
    for (m, name) in ["known", "estimated"].into_iter().enumerate() {
        for (e, &eps) in epsilons.iter().enumerate() {
            let fa: Vec<f64> = per_trial.iter().map(|t| t[m][e].0).collect();
            let det: Vec<f64> = per_trial.iter().map(|t| t[m][e].1).collect();
            let (mean_fa, se) = mean_se(&fa);
            let ci_low = mean_fa - 3.0 * se;
            rows.push(CalibrationRow {
                model: name,
                epsilon: eps,
                trials: args.trials,
                mean_false_alarms: mean_fa,
                standard_error: se,
                ci_low,
                ci_high: mean_fa + 3.0 * se,
                mean_detections: mean_se(&det).0,
                pass: ci_low <= eps,
            });
        }
    }
    Ok(rows)
}

pub const TABLE_HEADER: &str =
    "model,epsilon,trials,mean_false_alarms,standard_error,ci_low,ci_high,mean_detections,pass";

pub fn format_table(rows: &[CalibrationRow]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(
            s,
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            r.model,
            r.epsilon,
            r.trials,
            r.mean_false_alarms,
            r.standard_error,
            r.ci_low,
            r.ci_high,
            r.mean_detections,
            r.pass
        )
        .expect("string write");
    }
    s
}

pub fn run(args: &CalibrateArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = calibration_table(args)?;
    let table = format_table(&rows);
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_file(&dir.join("calibration.csv"), table.as_bytes())?;
    }
    write!(out, "{table}")?;
    Ok(())
}
