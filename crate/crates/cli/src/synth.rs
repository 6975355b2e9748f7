//! `synth`: seeded synthetic dataset on disk.
//!
//! Layout under `--out`: `images/<id>.png` (16-bit; `.raw` float rasters for
//! more than one channel), `masks/<id>.png`, `gt.csv`, `manifest.tsv` and
//! `scenes.json` with parameters, per-image seeds, targets and a digest.

use std::io::Write;
use std::path::PathBuf;

use acontrario::dataset::{save_mask_png, save_png16, write_manifest, DatasetRecord};
use acontrario::eval::{write_ground_truth_csv, GroundTruthBox};
use acontrario::raster;
use acontrario::rng::derive_seed;
use acontrario::synth::{
    dataset_digest, gen_scene, scene_id, SceneParams, SynthScene, Target, TargetCount,
    TargetProfile,
};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::parse_list;
use crate::{create_dir, thread_pool, write_file, CliError, CliResult};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of images.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 256)]
    pub height: usize,
    #[arg(long, default_value_t = 256)]
    pub width: usize,
    /// Background mean, one value per channel.
    #[arg(long, default_value = "1000")]
    pub mean: String,
    /// Background covariance, K×K row-major.
    #[arg(long, default_value = "10000")]
    pub cov: String,
    /// Targets per image.
    #[arg(long, default_value_t = 1)]
    pub targets: usize,
    /// With --targets-max, draw the count uniformly from this range instead.
    #[arg(long, requires = "targets_max")]
    pub targets_min: Option<usize>,
    #[arg(long, requires = "targets_min")]
    pub targets_max: Option<usize>,
    /// Peak contrast in background standard deviations.
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 2)]
    pub radius: u32,
    /// point or gaussian_blob.
    #[arg(long, default_value = "gaussian_blob")]
    pub profile: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "synth")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

impl SynthArgs {
    pub fn params(&self) -> CliResult<SceneParams> {
        let list = |s: &str, what: &str| {
            parse_list(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
        };
        let profile: TargetProfile = self.profile.parse()?;
        let targets = match (self.targets_min, self.targets_max) {
            (Some(min), Some(max)) => TargetCount::Uniform { min, max },
            _ => TargetCount::Fixed {
                count: self.targets,
            },
        };
        Ok(SceneParams {
            height: self.height,
            width: self.width,
            mean: list(&self.mean, "mean")?,
            cov: list(&self.cov, "cov")?,
            targets,
            amplitude: self.amplitude,
            radius: self.radius,
            profile,
        })
    }
}

#[derive(Serialize)]
struct SceneEntry<'a> {
    image_id: &'a str,
    seed: u64,
    targets: &'a [Target],
    gts: &'a [GroundTruthBox],
}

#[derive(Serialize)]
struct ScenesFile<'a> {
    version: &'static str,
    master_seed: u64,
    n_images: usize,
    params: &'a SceneParams,
    digest_sha256: String,
    scenes: Vec<SceneEntry<'a>>,
}

pub fn run(args: &SynthArgs, out: &mut dyn Write) -> CliResult<()> {
    let params = args.params()?;
    if params.height > usize::from(u16::MAX) || params.width > usize::from(u16::MAX) {
        return Err(CliError::Usage(
            "image dimensions must fit in 16 bits".into(),
        ));
    }
    let pool = thread_pool(args.jobs)?;
    let scenes: Vec<SynthScene> = pool.install(|| {
        (0..args.n)
            .into_par_iter()
            .map(|i| gen_scene(&scene_id(i), &params, derive_seed(args.seed, i as u64)))
            .collect::<Result<_, _>>()
    })?;

    let images_dir = args.out.join("images");
    let masks_dir = args.out.join("masks");
    create_dir(&images_dir)?;
    create_dir(&masks_dir)?;
    let multi = params.channels() > 1;
    let records: Vec<DatasetRecord> = pool.install(|| {
        scenes
            .par_iter()
            .map(|s| -> CliResult<DatasetRecord> {
                let image_rel = if multi {
                    PathBuf::from(format!("images/{}.raw", s.image_id))
                } else {
                    PathBuf::from(format!("images/{}.png", s.image_id))
                };
                let mask_rel = PathBuf::from(format!("masks/{}.png", s.image_id));
                let image_path = args.out.join(&image_rel);
                if multi {
                    let mut buf = Vec::new();
                    raster::write_image(&mut buf, &s.image)?;
                    write_file(&image_path, &buf)?;
                } else {
                    save_png16(&image_path, &s.image)?;
                }
                save_mask_png(&args.out.join(&mask_rel), &s.mask())?;
                Ok(DatasetRecord {
                    image_id: s.image_id.clone(),
                    image_path: image_rel,
                    mask_path: Some(mask_rel),
                    split: None,
                })
            })
            .collect::<CliResult<_>>()
    })?;

    let mut manifest = Vec::new();
    write_manifest(&mut manifest, &records)?;
    write_file(&args.out.join("manifest.tsv"), &manifest)?;

    let gts: Vec<GroundTruthBox> = scenes.iter().flat_map(|s| s.gts.iter().cloned()).collect();
    let mut gt_csv = Vec::new();
    write_ground_truth_csv(&mut gt_csv, &gts)?;
    write_file(&args.out.join("gt.csv"), &gt_csv)?;

    let file = ScenesFile {
        version: env!("CARGO_PKG_VERSION"),
        master_seed: args.seed,
        n_images: scenes.len(),
        params: &params,
        digest_sha256: dataset_digest(&scenes),
        scenes: scenes
            .iter()
            .map(|s| SceneEntry {
                image_id: &s.image_id,
                seed: s.seed,
                targets: &s.targets,
                gts: &s.gts,
            })
            .collect(),
    };
    write_file(
        &args.out.join("scenes.json"),
        serde_json::to_string_pretty(&file)?.as_bytes(),
    )?;
    writeln!(
        out,
        "{} images, {} targets, digest {}",
        scenes.len(),
        gts.len(),
        file.digest_sha256
    )?;
    Ok(())
}
