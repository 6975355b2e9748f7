//! `detect`: run the pipeline over a manifest.
//!
//! Writes `detections.csv` (all images, sorted by `image_id`, each image's
//! rows in ascending NFA) and `run_report.json`. With `--save-maps` also
//! writes `maps/<image_id>.sig` significance rasters.

use std::io::Write;
use std::time::Instant;

use acontrario::dataset::{load_image, read_manifest, DatasetRecord};
use acontrario::detect::{components_to_detections, connected_components, threshold_mask};
use acontrario::eval::{write_detections_csv, DetectionRecord};
use acontrario::{raster, DetectConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::{
    create_dir, sha256_hex, thread_pool, write_file, CliError, CliResult, RunArgs, RunConfig,
};

#[derive(Debug, Serialize)]
struct ImageEntry {
    image_id: String,
    height: usize,
    width: usize,
    channels: usize,
    detections: usize,
    seconds: f64,
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    config_ini: String,
    images: Vec<ImageEntry>,
    total_detections: usize,
    detections_sha256: String,
}

struct ImageResult {
    entry: ImageEntry,
    rows: Vec<DetectionRecord>,
    map: Option<Vec<u8>>,
}

fn process(rec: &DatasetRecord, cfg: &DetectConfig, save_map: bool) -> CliResult<ImageResult> {
    let start = Instant::now();
    let wrap = |e: acontrario::Error| {
        let c = CliError::from_core(e);
        match c {
            CliError::Data(m) => CliError::Data(format!("{}: {m}", rec.image_id)),
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", rec.image_id)),
        }
    };
    let image = load_image(&rec.image_path).map_err(wrap)?;
    let sig = acontrario::detect::significance(&image, cfg).map_err(wrap)?;
    let nfa = sig.to_nfa_map().map_err(wrap)?;
    let mask = threshold_mask(&nfa, cfg.epsilon).map_err(wrap)?;
    let comps = connected_components(&mask, cfg.connectivity);
    let dets = components_to_detections(&comps, &nfa, cfg.alpha, cfg.tau).map_err(wrap)?;
    let map = if save_map {
        let mut buf = Vec::new();
        raster::write_significance_map(&mut buf, &sig).map_err(wrap)?;
        Some(buf)
    } else {
        None
    };
    Ok(ImageResult {
        entry: ImageEntry {
            image_id: rec.image_id.clone(),
            height: image.height(),
            width: image.width(),
            channels: image.channels(),
            detections: dets.len(),
            seconds: start.elapsed().as_secs_f64(),
        },
        rows: dets
            .iter()
            .map(|d| DetectionRecord::from_detection(&rec.image_id, d))
            .collect(),
        map,
    })
}

pub fn run(args: &RunArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = args.resolve()?;
    if args.print_config {
        write!(out, "{}", cfg.to_ini())?;
        return Ok(());
    }
    let manifest = cfg
        .manifest
        .as_ref()
        .ok_or_else(|| CliError::Usage("detect needs --manifest".into()))?;
    let records = read_manifest(manifest)?;
    let detect_cfg = cfg.detect_config()?;

    let pool = thread_pool(cfg.jobs)?;
    let results: Vec<CliResult<ImageResult>> = pool.install(|| {
        records
            .par_iter()
            .map(|r| process(r, &detect_cfg, cfg.save_maps))
            .collect()
    });
    let mut results = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    results.sort_by(|a, b| a.entry.image_id.cmp(&b.entry.image_id));

    create_dir(&cfg.out)?;
    let rows: Vec<DetectionRecord> = results
        .iter()
        .flat_map(|r| r.rows.iter().cloned())
        .collect();
    let mut csv = Vec::new();
    write_detections_csv(&mut csv, &rows)?;
    write_file(&cfg.out.join("detections.csv"), &csv)?;

    if cfg.save_maps {
        let dir = cfg.out.join("maps");
        create_dir(&dir)?;
        for r in &results {
            if let Some(m) = &r.map {
                write_file(&dir.join(format!("{}.sig", r.entry.image_id)), m)?;
            }
        }
    }

    let report = RunReport {
        command: "detect",
        version: env!("CARGO_PKG_VERSION"),
        config: &cfg,
        config_ini: cfg.to_ini(),
        total_detections: rows.len(),
        detections_sha256: sha256_hex(&csv),
        images: results.into_iter().map(|r| r.entry).collect(),
    };
    write_file(
        &cfg.out.join("run_report.json"),
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;
    writeln!(
        out,
        "{} images, {} detections, sha256 {}",
        report.images.len(),
        report.total_detections,
        report.detections_sha256
    )?;
    Ok(())
}
