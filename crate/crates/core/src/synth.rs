//! Seeded scenes drawn from the naive model, with optional small targets.
//!
//! Noise: a `ChaCha8Rng` seeded with the image seed draws K standard normals
//! per pixel (row-major, `rand_distr::StandardNormal`), mapped through a
//! factor `F` with `F Fᵀ = cov`. Target placement uses a second stream seeded
//! with `derive_seed(image_seed, 0)`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::detect::Mask;
use crate::error::{Error, Result};
use crate::eval::{BBox, GroundTruthBox};
use crate::image::ImageTensor;
use crate::rng::{derive_seed, rng_from_seed};

/// Largest blob radius; radius 4 already covers 49 pixels, under the
/// 80-pixel small-target bound.
pub const MAX_BLOB_RADIUS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetProfile {
    /// `amplitude · sigma` added to one pixel.
    #[default]
    Point,
    /// `amplitude · sigma · exp(-r² / (2 (radius/2)²))` over the disk `r <= radius`.
    GaussianBlob,
}

impl std::str::FromStr for TargetProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point" => Ok(Self::Point),
            "gaussian_blob" | "blob" => Ok(Self::GaussianBlob),
            other => Err(Error::InvalidParameter(format!(
                "unknown target profile '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for TargetProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Point => "point",
            Self::GaussianBlob => "gaussian_blob",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    /// `(row, col)`.
    pub center: (usize, usize),
    /// Peak contrast in units of the background standard deviation.
    pub amplitude: f64,
    pub radius: u32,
    pub profile: TargetProfile,
}

impl Target {
    /// Offsets `(dr, dc)` covered by the target.
    pub fn support_offsets(&self) -> Vec<(i64, i64)> {
        match self.profile {
            TargetProfile::Point => vec![(0, 0)],
            TargetProfile::GaussianBlob => {
                let r = i64::from(self.radius);
                let mut v = Vec::new();
                for dr in -r..=r {
                    for dc in -r..=r {
                        if dr * dr + dc * dc <= r * r {
                            v.push((dr, dc));
                        }
                    }
                }
                v
            }
        }
    }

    fn gain(&self, dr: i64, dc: i64) -> f64 {
        match self.profile {
            TargetProfile::Point => 1.0,
            TargetProfile::GaussianBlob => {
                let s = f64::from(self.radius) / 2.0;
                let r2 = (dr * dr + dc * dc) as f64;
                if s == 0.0 {
                    if r2 == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (-r2 / (2.0 * s * s)).exp()
                }
            }
        }
    }
}

/// Factor `F` (K×K row-major) with `F Fᵀ = cov`, for positive semidefinite
/// `cov`. Eigenvalues below `-1e-12 · max|lambda|` are rejected.
pub fn psd_factor(cov: &[f64], k: usize) -> Result<Vec<f64>> {
    if cov.len() != k * k {
        return Err(Error::DimensionMismatch {
            expected: k * k,
            got: cov.len(),
        });
    }
    if cov.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite covariance".into()));
    }
    let m = DMatrix::from_row_slice(k, k, cov);
    if (&m - m.transpose()).amax() > 1e-12 * m.amax().max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidParameter(
            "covariance is not symmetric".into(),
        ));
    }
    let eig = SymmetricEigen::new(m);
    let scale = eig.eigenvalues.amax();
    let mut f = vec![0.0; k * k];
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -1e-12 * scale {
            return Err(Error::InvalidParameter(format!(
                "covariance is not positive semidefinite (eigenvalue {lambda})"
            )));
        }
        let s = lambda.max(0.0).sqrt();
        for i in 0..k {
            f[i * k + j] = eig.eigenvectors[(i, j)] * s;
        }
    }
    Ok(f)
}

/// i.i.d. `N(mean, cov)` pixels.
pub fn gen_noise_image(
    height: usize,
    width: usize,
    mean: &[f64],
    cov: &[f64],
    seed: u64,
) -> Result<ImageTensor> {
    let k = mean.len();
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one channel".into()));
    }
    let factor = psd_factor(cov, k)?;
    let mut rng = rng_from_seed(seed);
    let mut z = vec![0.0; k];
    let mut data = Vec::with_capacity(height * width * k);
    for _ in 0..height * width {
        for v in z.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        for i in 0..k {
            let row = &factor[i * k..(i + 1) * k];
            data.push(mean[i] + row.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>());
        }
    }
    ImageTensor::new(height, width, k, data)
}

/// Adds `target` to `image` in place and returns its ground truth: the tight
/// box of the (image-clipped) support and the support size.
///
/// `sigma` holds the per-channel background standard deviation.
pub fn inject_target(
    image: &mut ImageTensor,
    target: &Target,
    sigma: &[f64],
    image_id: &str,
) -> Result<GroundTruthBox> {
    let (row, col) = target.center;
    if row >= image.height() || col >= image.width() {
        return Err(Error::InvalidParameter(format!(
            "target center ({row}, {col}) outside {}x{} image",
            image.height(),
            image.width()
        )));
    }
    if sigma.len() != image.channels() {
        return Err(Error::DimensionMismatch {
            expected: image.channels(),
            got: sigma.len(),
        });
    }
    if target.profile == TargetProfile::GaussianBlob && target.radius > MAX_BLOB_RADIUS {
        return Err(Error::InvalidParameter(format!(
            "blob radius {} exceeds {MAX_BLOB_RADIUS}",
            target.radius
        )));
    }
    if !target.amplitude.is_finite() {
        return Err(Error::InvalidParameter("non-finite amplitude".into()));
    }
    let mut bbox: Option<BBox> = None;
    let mut extent = 0u64;
    for (dr, dc) in target.support_offsets() {
        let r = row as i64 + dr;
        let c = col as i64 + dc;
        if r < 0 || c < 0 || r >= image.height() as i64 || c >= image.width() as i64 {
            continue;
        }
        let (r, c) = (r as usize, c as usize);
        let gain = target.amplitude * target.gain(dr, dc);
        for (v, s) in image.pixel_mut(r, c).iter_mut().zip(sigma) {
            *v += gain * s;
        }
        extent += 1;
        let (r, c) = (r as u32, c as u32);
        bbox = Some(match bbox {
            None => BBox {
                x_min: c,
                y_min: r,
                x_max: c,
                y_max: r,
            },
            Some(b) => BBox {
                x_min: b.x_min.min(c),
                y_min: b.y_min.min(r),
                x_max: b.x_max.max(c),
                y_max: b.y_max.max(r),
            },
        });
    }
    Ok(GroundTruthBox {
        image_id: image_id.to_string(),
        bbox: bbox.expect("center is inside the image"),
        extent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetCount {
    Fixed {
        count: usize,
    },
    /// Uniform on `min..=max`.
    Uniform {
        min: usize,
        max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneParams {
    pub height: usize,
    pub width: usize,
    pub mean: Vec<f64>,
    /// K×K row-major.
    pub cov: Vec<f64>,
    pub targets: TargetCount,
    pub amplitude: f64,
    pub radius: u32,
    pub profile: TargetProfile,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            height: 256,
            width: 256,
            mean: vec![1000.0],
            cov: vec![100.0 * 100.0],
            targets: TargetCount::Fixed { count: 1 },
            amplitude: 4.0,
            radius: 2,
            profile: TargetProfile::GaussianBlob,
        }
    }
}

impl SceneParams {
    pub fn channels(&self) -> usize {
        self.mean.len()
    }

    pub fn sigma(&self) -> Vec<f64> {
        let k = self.channels();
        (0..k)
            .map(|i| self.cov[i * k + i].max(0.0).sqrt())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthScene {
    pub image_id: String,
    pub seed: u64,
    pub params: SceneParams,
    pub image: ImageTensor,
    pub targets: Vec<Target>,
    pub gts: Vec<GroundTruthBox>,
}

const PLACEMENT_ATTEMPTS: usize = 10_000;

fn place_targets(params: &SceneParams, count: usize, rng: &mut impl Rng) -> Result<Vec<Target>> {
    let margin = match params.profile {
        TargetProfile::Point => 0,
        TargetProfile::GaussianBlob => params.radius as usize,
    };
    if params.height <= 2 * margin || params.width <= 2 * margin {
        return Err(Error::InvalidParameter(format!(
            "{}x{} image too small for radius {margin}",
            params.height, params.width
        )));
    }
    let mut targets: Vec<Target> = Vec::with_capacity(count);
    let mut attempts = 0;
    while targets.len() < count {
        attempts += 1;
        if attempts > PLACEMENT_ATTEMPTS {
            return Err(Error::InvalidParameter(format!(
                "could not place {count} non-overlapping targets"
            )));
        }
        let row = rng.random_range(margin..params.height - margin);
        let col = rng.random_range(margin..params.width - margin);
        // supports must be at least one pixel apart
        let gap = 2 * margin + 2;
        let clear = targets
            .iter()
            .all(|t| t.center.0.abs_diff(row) >= gap || t.center.1.abs_diff(col) >= gap);
        if clear {
            targets.push(Target {
                center: (row, col),
                amplitude: params.amplitude,
                radius: params.radius,
                profile: params.profile,
            });
        }
    }
    Ok(targets)
}

/// One scene from its own seed.
pub fn gen_scene(image_id: &str, params: &SceneParams, seed: u64) -> Result<SynthScene> {
    let mut image = gen_noise_image(params.height, params.width, &params.mean, &params.cov, seed)?;
    let mut rng = rng_from_seed(derive_seed(seed, 0));
    let count = match params.targets {
        TargetCount::Fixed { count } => count,
        TargetCount::Uniform { min, max } => {
            if min > max {
                return Err(Error::InvalidParameter(format!(
                    "target range {min}..={max}"
                )));
            }
            rng.random_range(min..=max)
        }
    };
    let targets = place_targets(params, count, &mut rng)?;
    let sigma = params.sigma();
    let gts = targets
        .iter()
        .map(|t| inject_target(&mut image, t, &sigma, image_id))
        .collect::<Result<Vec<_>>>()?;
    Ok(SynthScene {
        image_id: image_id.to_string(),
        seed,
        params: params.clone(),
        image,
        targets,
        gts,
    })
}

impl SynthScene {
    /// Union of the target supports, clipped to the image.
    pub fn mask(&self) -> Mask {
        let (h, w) = (self.image.height(), self.image.width());
        let mut m = Mask::empty(h, w);
        for t in &self.targets {
            for (dr, dc) in t.support_offsets() {
                let r = t.center.0 as i64 + dr;
                let c = t.center.1 as i64 + dc;
                if r >= 0 && c >= 0 && (r as usize) < h && (c as usize) < w {
                    m.set(r as usize, c as usize, true);
                }
            }
        }
        m
    }
}

pub fn scene_id(index: usize) -> String {
    format!("synth_{index:05}")
}

/// `n_images` scenes; scene `i` uses seed `derive_seed(seed, i)`.
pub fn gen_dataset(n_images: usize, params: &SceneParams, seed: u64) -> Result<Vec<SynthScene>> {
    (0..n_images)
        .map(|i| gen_scene(&scene_id(i), params, derive_seed(seed, i as u64)))
        .collect()
}

/// SHA-256 over ids, seeds, pixel bits and ground truth, hex encoded.
pub fn dataset_digest(scenes: &[SynthScene]) -> String {
    let mut h = Sha256::new();
    for s in scenes {
        h.update(s.image_id.as_bytes());
        h.update(s.seed.to_le_bytes());
        for v in s.image.data() {
            h.update(v.to_bits().to_le_bytes());
        }
        for g in &s.gts {
            for v in [g.bbox.x_min, g.bbox.y_min, g.bbox.x_max, g.bbox.y_max] {
                h.update(v.to_le_bytes());
            }
            h.update(g.extent.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}
