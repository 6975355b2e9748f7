//! Dataset ingestion: images, masks, manifests, preprocessing.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use ::image::{DynamicImage, ImageBuffer, ImageReader, Luma};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::detect::{connected_components, Connectivity, Mask};
use crate::error::{Error, Result};
use crate::eval::{BBox, GroundTruthBox};
use crate::image::ImageTensor;
use crate::raster;
use crate::rng::rng_from_seed;

pub const DEFAULT_MAX_EXTENT: u64 = 90;
pub const DEFAULT_SPLIT_RATIOS: [f64; 3] = [0.6, 0.2, 0.2];
pub const KEYS_A: f64 = -0.5;

fn is_raw(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("raw"))
}

fn decode(path: &Path) -> Result<DynamicImage> {
    Ok(ImageReader::open(path)?.with_guessed_format()?.decode()?)
}

/// Loads an 8- or 16-bit single-channel PNG/PGM as raw digital numbers
/// (no rescaling). `.raw` files go through the float raster reader and may
/// carry K > 1.
pub fn load_image(path: &Path) -> Result<ImageTensor> {
    if is_raw(path) {
        let mut f = BufReader::new(fs::File::open(path)?);
        return raster::read_image(&mut f);
    }
    let (h, w, data): (usize, usize, Vec<f64>) = match decode(path)? {
        DynamicImage::ImageLuma8(b) => (
            b.height() as usize,
            b.width() as usize,
            b.into_raw().into_iter().map(f64::from).collect(),
        ),
        DynamicImage::ImageLuma16(b) => (
            b.height() as usize,
            b.width() as usize,
            b.into_raw().into_iter().map(f64::from).collect(),
        ),
        other => {
            return Err(Error::UnsupportedImage(format!(
                "{}: {:?} (need 8- or 16-bit single-channel)",
                path.display(),
                other.color()
            )))
        }
    };
    ImageTensor::new(h, w, 1, data)
}

/// Loads a binary mask: any nonzero value is foreground.
pub fn load_mask(path: &Path) -> Result<Mask> {
    let img = load_image(path)?;
    if img.channels() != 1 {
        return Err(Error::UnsupportedImage(format!(
            "{}: mask has {} channels",
            path.display(),
            img.channels()
        )));
    }
    Mask::new(
        img.height(),
        img.width(),
        img.data().iter().map(|&v| v != 0.0).collect(),
    )
}

/// Writes a K=1 image as 16-bit PNG, rounding to the nearest integer and
/// clamping to `0..=65535`.
pub fn save_png16(path: &Path, image: &ImageTensor) -> Result<()> {
    if image.channels() != 1 {
        return Err(Error::InvalidParameter(format!(
            "PNG output needs one channel, got {}",
            image.channels()
        )));
    }
    let buf: Vec<u16> = image
        .data()
        .iter()
        .map(|v| v.round().clamp(0.0, 65535.0) as u16)
        .collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(image.width() as u32, image.height() as u32, buf)
            .expect("buffer matches dimensions");
    img.save(path)?;
    Ok(())
}

/// Writes a mask as 8-bit PNG, foreground 255.
pub fn save_mask_png(path: &Path, mask: &Mask) -> Result<()> {
    let buf: Vec<u8> = mask
        .data()
        .iter()
        .map(|&b| if b { 255 } else { 0 })
        .collect();
    let img: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(mask.width() as u32, mask.height() as u32, buf)
            .expect("buffer matches dimensions");
    img.save(path)?;
    Ok(())
}

/// Solid mask with every box filled.
pub fn boxes_to_mask(height: usize, width: usize, boxes: &[BBox]) -> Mask {
    let mut m = Mask::empty(height, width);
    for b in boxes {
        for r in b.y_min as usize..=(b.y_max as usize).min(height.saturating_sub(1)) {
            for c in b.x_min as usize..=(b.x_max as usize).min(width.saturating_sub(1)) {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// 8-connected components as tight boxes, in raster order of first pixel.
pub fn mask_to_boxes(mask: &Mask, image_id: &str) -> Vec<GroundTruthBox> {
    connected_components(mask, Connectivity::Eight)
        .into_iter()
        .map(|c| GroundTruthBox {
            image_id: image_id.to_string(),
            bbox: c.bbox(),
            extent: c.pixels.len() as u64,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Self::Train),
            "val" => Ok(Self::Val),
            "test" => Ok(Self::Test),
            other => Err(Error::Malformed(format!("unknown split '{other}'"))),
        }
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Train => "train",
            Self::Val => "val",
            Self::Test => "test",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub image_id: String,
    pub image_path: PathBuf,
    pub mask_path: Option<PathBuf>,
    pub split: Option<Split>,
}

impl DatasetRecord {
    pub fn ground_truth(&self) -> Result<Vec<GroundTruthBox>> {
        let path = self
            .mask_path
            .as_ref()
            .ok_or_else(|| Error::Malformed(format!("{}: no mask", self.image_id)))?;
        Ok(mask_to_boxes(&load_mask(path)?, &self.image_id))
    }
}

/// Parses a manifest: one record per line,
/// `image_id<TAB>image_path<TAB>mask_path<TAB>split`. Trailing fields may be
/// empty or missing. Blank lines and lines starting with `#` are skipped.
/// Relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<DatasetRecord>> {
    let resolve = |p: &str| -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 || fields.len() > 4 {
            return Err(Error::Malformed(format!(
                "manifest line {}: expected 2 to 4 tab-separated fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let id = fields[0];
        if id.is_empty() || fields[1].is_empty() {
            return Err(Error::Malformed(format!(
                "manifest line {}: empty field",
                lineno + 1
            )));
        }
        if !seen.insert(id.to_string()) {
            return Err(Error::Malformed(format!("duplicate image_id '{id}'")));
        }
        let mask = fields.get(2).filter(|s| !s.is_empty()).map(|s| resolve(s));
        let split = match fields.get(3).filter(|s| !s.is_empty()) {
            Some(s) => Some(s.parse()?),
            None => None,
        };
        out.push(DatasetRecord {
            image_id: id.to_string(),
            image_path: resolve(fields[1]),
            mask_path: mask,
            split,
        });
    }
    Ok(out)
}

pub fn read_manifest(path: &Path) -> Result<Vec<DatasetRecord>> {
    let mut text = String::new();
    for line in BufReader::new(fs::File::open(path)?).lines() {
        text.push_str(&line?);
        text.push('\n');
    }
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base)
}

/// Paths are written as given.
pub fn write_manifest(mut w: impl Write, records: &[DatasetRecord]) -> Result<()> {
    for r in records {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            r.image_id,
            r.image_path.display(),
            r.mask_path
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            r.split.map(|s| s.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub kept: Vec<DatasetRecord>,
    pub dropped: Vec<DatasetRecord>,
}

impl FilterOutcome {
    pub fn dropped_fraction(&self) -> f64 {
        let n = self.kept.len() + self.dropped.len();
        if n == 0 {
            0.0
        } else {
            self.dropped.len() as f64 / n as f64
        }
    }
}

/// Drops every record with a component larger than `max_extent`;
/// `extents` yields the component sizes of one record.
pub fn filter_by_extent_with<F>(
    records: &[DatasetRecord],
    max_extent: u64,
    mut extents: F,
) -> Result<FilterOutcome>
where
    F: FnMut(&DatasetRecord) -> Result<Vec<u64>>,
{
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for r in records {
        if extents(r)?.iter().any(|&e| e > max_extent) {
            dropped.push(r.clone());
        } else {
            kept.push(r.clone());
        }
    }
    Ok(FilterOutcome { kept, dropped })
}

/// [`filter_by_extent_with`] reading each record's mask from disk.
pub fn filter_by_extent(records: &[DatasetRecord], max_extent: u64) -> Result<FilterOutcome> {
    filter_by_extent_with(records, max_extent, |r| {
        Ok(r.ground_truth()?.iter().map(|g| g.extent).collect())
    })
}

/// Keys cubic convolution kernel with parameter `a`.
pub fn keys_weight(x: f64, a: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a
    } else {
        0.0
    }
}

/// Source taps and weights for each output index along one axis.
fn axis_taps(n_in: usize, n_out: usize) -> Vec<([usize; 4], [f64; 4])> {
    let scale = n_in as f64 / n_out as f64;
    (0..n_out)
        .map(|o| {
            let src = (o as f64 + 0.5) * scale - 0.5;
            let base = src.floor();
            let mut idx = [0usize; 4];
            let mut wt = [0.0; 4];
            for t in 0..4 {
                let pos = base + t as f64 - 1.0;
                wt[t] = keys_weight(src - pos, KEYS_A);
                idx[t] = (pos.max(0.0) as usize).min(n_in - 1);
            }
            (idx, wt)
        })
        .collect()
}

/// Separable bicubic resampling (Keys, a = -0.5) with pixel-center alignment
/// and clamped edges.
pub fn bicubic_resize(image: &ImageTensor, out_h: usize, out_w: usize) -> Result<ImageTensor> {
    if out_h == 0 || out_w == 0 {
        return Err(Error::InvalidParameter(format!(
            "output size {out_h}x{out_w}"
        )));
    }
    let (h, w, k) = (image.height(), image.width(), image.channels());
    let cols = axis_taps(w, out_w);
    let rows = axis_taps(h, out_h);
    let src = image.data();

    let mut tmp = vec![0.0; h * out_w * k];
    for r in 0..h {
        for (oc, (idx, wt)) in cols.iter().enumerate() {
            for ch in 0..k {
                tmp[(r * out_w + oc) * k + ch] =
                    (0..4).map(|t| wt[t] * src[(r * w + idx[t]) * k + ch]).sum();
            }
        }
    }
    let mut out = vec![0.0; out_h * out_w * k];
    for (or, (idx, wt)) in rows.iter().enumerate() {
        for oc in 0..out_w {
            for ch in 0..k {
                out[(or * out_w + oc) * k + ch] = (0..4)
                    .map(|t| wt[t] * tmp[(idx[t] * out_w + oc) * k + ch])
                    .sum();
            }
        }
    }
    ImageTensor::new(out_h, out_w, k, out)
}

/// Maps a box to a resized grid, rounding outward (floor mins, ceil maxs).
pub fn rescale_box(b: &BBox, in_size: (usize, usize), out_size: (usize, usize)) -> Result<BBox> {
    let sy = out_size.0 as f64 / in_size.0 as f64;
    let sx = out_size.1 as f64 / in_size.1 as f64;
    let lo = |v: u32, s: f64| (f64::from(v) * s).floor() as u32;
    let hi = |v: u32, s: f64, n: usize| {
        let edge = ((f64::from(v) + 1.0) * s).ceil() as u32;
        edge.saturating_sub(1).min(n as u32 - 1)
    };
    BBox::new(
        lo(b.x_min, sx),
        lo(b.y_min, sy),
        hi(b.x_max, sx, out_size.1),
        hi(b.y_max, sy, out_size.0),
    )
}

/// Split sizes: floor for train, floor for val, remainder for test.
pub fn split_sizes(n: usize, ratios: [f64; 3]) -> Result<(usize, usize, usize)> {
    if ratios.iter().any(|r| !r.is_finite() || *r < 0.0)
        || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9
    {
        return Err(Error::InvalidParameter(format!(
            "split ratios {ratios:?} must be non-negative and sum to 1"
        )));
    }
    // the slack keeps exact products such as 10 * 0.6 from flooring down
    let train = ((n as f64 * ratios[0]) + 1e-9).floor() as usize;
    let val = (((n as f64 * ratios[1]) + 1e-9).floor() as usize).min(n - train);
    Ok((train, val, n - train - val))
}

/// Labels records with a seeded shuffle; the input order is kept.
pub fn split_dataset(
    records: &[DatasetRecord],
    ratios: [f64; 3],
    seed: u64,
) -> Result<Vec<DatasetRecord>> {
    let (train, val, _) = split_sizes(records.len(), ratios)?;
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut out = records.to_vec();
    for (rank, &i) in order.iter().enumerate() {
        out[i].split = Some(if rank < train {
            Split::Train
        } else if rank < train + val {
            Split::Val
        } else {
            Split::Test
        });
    }
    Ok(out)
}
