//! `eval`: precision, recall, F1 and AP of a detections CSV.
//!
//! Ground truth comes from `--gt` or, failing that, from the masks of
//! `--manifest`. Writes `eval_report.json` and `pr.csv`.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use acontrario::dataset::read_manifest;
use acontrario::eval::{
    f1_at_epsilon, read_detections_csv, read_ground_truth_csv, write_pr_csv, EvalReport,
    GroundTruthBox, ScoredDetection,
};
use serde::Serialize;

use crate::{create_dir, write_file, CliError, CliResult, RunArgs, RunConfig};

#[derive(Debug, Serialize)]
struct Report<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    config_ini: String,
    detections: usize,
    ground_truth: usize,
    #[serde(flatten)]
    metrics: &'a EvalReport,
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_ground_truth(cfg: &RunConfig) -> CliResult<Vec<GroundTruthBox>> {
    if let Some(path) = &cfg.ground_truth {
        return Ok(read_ground_truth_csv(open(path)?)?);
    }
    let manifest = cfg
        .manifest
        .as_ref()
        .ok_or_else(|| CliError::Usage("eval needs --gt or --manifest".into()))?;
    let mut gts = Vec::new();
    for rec in read_manifest(manifest)? {
        gts.extend(rec.ground_truth()?);
    }
    Ok(gts)
}

pub fn run(args: &RunArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = args.resolve()?;
    if args.print_config {
        write!(out, "{}", cfg.to_ini())?;
        return Ok(());
    }
    let det_path = cfg
        .detections
        .as_ref()
        .ok_or_else(|| CliError::Usage("eval needs --detections".into()))?;
    let dets: Vec<ScoredDetection> = read_detections_csv(open(det_path)?)?
        .iter()
        .map(|r| r.to_scored())
        .collect::<Result<_, _>>()?;
    let gts = load_ground_truth(&cfg)?;
    let metrics = f1_at_epsilon(&dets, &gts, cfg.iou_min);

    create_dir(&cfg.out)?;
    let report = Report {
        command: "eval",
        version: env!("CARGO_PKG_VERSION"),
        config: &cfg,
        config_ini: cfg.to_ini(),
        detections: dets.len(),
        ground_truth: gts.len(),
        metrics: &metrics,
    };
    write_file(
        &cfg.out.join("eval_report.json"),
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;
    let mut pr = Vec::new();
    write_pr_csv(&mut pr, &metrics.pr_samples)?;
    write_file(&cfg.out.join("pr.csv"), &pr)?;
    writeln!(
        out,
        "tp {} fp {} fn {} precision {:.6} recall {:.6} f1 {:.6} ap {:.6}",
        metrics.tp,
        metrics.fp,
        metrics.fn_,
        metrics.precision,
        metrics.recall,
        metrics.f1,
        metrics.ap
    )?;
    Ok(())
}
