//! From NFA maps to discrete detections.
//!
//! Pixels with `NFA <= epsilon` are grouped into connected components. Each
//! component becomes one [`Detection`] whose NFA is the minimum over its
//! pixels, i.e. the evidence of its most significant pixel.

use serde::{Deserialize, Serialize};

use crate::background::{estimate_background, BackgroundModel, EstimationMethod, DEFAULT_RIDGE};
use crate::error::{Error, Result};
use crate::eval::BBox;
use crate::image::ImageTensor;
use crate::nfa::{self, NfaMap, SignificanceMap, Tail};

/// Binary raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    height: usize,
    width: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn new(height: usize, width: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::DimensionMismatch {
                expected: height * width,
                got: data.len(),
            });
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn empty(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![false; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.data[row * self.width + col] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|b| **b).count()
    }

    /// True where `self` is set implies `other` is set.
    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.data.len() == other.data.len()
            && self.data.iter().zip(&other.data).all(|(a, b)| !a || *b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Connectivity {
    #[serde(rename = "4")]
    Four,
    #[default]
    #[serde(rename = "8")]
    Eight,
}

impl std::str::FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4" => Ok(Self::Four),
            "8" => Ok(Self::Eight),
            other => Err(Error::InvalidParameter(format!(
                "connectivity must be 4 or 8, got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for Connectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Four => "4",
            Self::Eight => "8",
        })
    }
}

/// A maximal connected set of mask pixels, in raster order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub pixels: Vec<(usize, usize)>,
}

impl Component {
    pub fn bbox(&self) -> BBox {
        let mut b = BBox {
            x_min: u32::MAX,
            y_min: u32::MAX,
            x_max: 0,
            y_max: 0,
        };
        for &(r, c) in &self.pixels {
            b.x_min = b.x_min.min(c as u32);
            b.y_min = b.y_min.min(r as u32);
            b.x_max = b.x_max.max(c as u32);
            b.y_max = b.y_max.max(r as u32);
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub bbox: BBox,
    /// Minimum `log10 NFA` over the component.
    pub log10_nfa: f64,
    pub score: f64,
    pub pixel_count: usize,
    /// `(row, col)` of the minimum-NFA pixel (first in raster order on ties).
    pub peak: (usize, usize),
}

/// Pixels with `NFA <= epsilon`.
pub fn threshold_mask(nfa: &NfaMap, epsilon: f64) -> Result<Mask> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} must be > 0"
        )));
    }
    let t = epsilon.log10();
    Mask::new(
        nfa.height(),
        nfa.width(),
        nfa.log10_values().iter().map(|v| *v <= t).collect(),
    )
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // keep the smaller (earlier) label as root
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Two-pass union-find labelling.
///
/// Components are ordered by their first pixel in raster order, i.e. by
/// `(min row, min col within that row)`; pixels inside a component are in
/// raster order.
pub fn connected_components(mask: &Mask, connectivity: Connectivity) -> Vec<Component> {
    let (h, w) = (mask.height, mask.width);
    let mut labels = vec![usize::MAX; h * w];
    let mut parent: Vec<usize> = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !mask.get(r, c) {
                continue;
            }
            let mut neighbours = [usize::MAX; 4];
            if c > 0 {
                neighbours[0] = labels[r * w + c - 1];
            }
            if r > 0 {
                neighbours[1] = labels[(r - 1) * w + c];
                if connectivity == Connectivity::Eight {
                    if c > 0 {
                        neighbours[2] = labels[(r - 1) * w + c - 1];
                    }
                    if c + 1 < w {
                        neighbours[3] = labels[(r - 1) * w + c + 1];
                    }
                }
            }
            let mut label = usize::MAX;
            for &n in neighbours.iter().filter(|n| **n != usize::MAX) {
                if label == usize::MAX {
                    label = n;
                } else {
                    union(&mut parent, label, n);
                }
            }
            if label == usize::MAX {
                label = parent.len();
                parent.push(label);
            }
            labels[r * w + c] = label;
        }
    }

    let mut slot_of_root = vec![usize::MAX; parent.len()];
    let mut components: Vec<Component> = Vec::new();
    for (i, &label) in labels.iter().enumerate() {
        if label == usize::MAX {
            continue;
        }
        let root = find(&mut parent, label);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = components.len();
            components.push(Component { pixels: Vec::new() });
        }
        components[slot_of_root[root]].pixels.push((i / w, i % w));
    }
    components
}

/// One detection per component, sorted by ascending NFA (stable).
pub fn components_to_detections(
    components: &[Component],
    nfa: &NfaMap,
    alpha: f64,
    tau: f64,
) -> Result<Vec<Detection>> {
    let mut out = Vec::with_capacity(components.len());
    for comp in components {
        let mut best = f64::INFINITY;
        let mut peak = None;
        for &(r, c) in &comp.pixels {
            if r >= nfa.height() || c >= nfa.width() {
                return Err(Error::DimensionMismatch {
                    expected: nfa.height() * nfa.width(),
                    got: r * nfa.width() + c,
                });
            }
            let v = nfa.log10_at(r, c);
            let better = match peak {
                None => true,
                Some(p) => v < best || (v == best && (r, c) < p),
            };
            if better {
                best = v;
                peak = Some((r, c));
            }
        }
        let Some(peak) = peak else { continue };
        out.push(Detection {
            bbox: comp.bbox(),
            log10_nfa: best,
            score: nfa::sigm_alpha(-best, alpha, tau),
            pixel_count: comp.pixels.len(),
            peak,
        });
    }
    out.sort_by(|a, b| a.log10_nfa.total_cmp(&b.log10_nfa));
    Ok(out)
}

/// Parameters of the full detection pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    pub method: EstimationMethod,
    pub ridge: f64,
    pub epsilon: f64,
    pub connectivity: Connectivity,
    pub alpha: f64,
    pub tau: f64,
    pub tail: Tail,
    /// Number of pyramid levels (1 = full resolution only).
    pub scales: usize,
    /// One positive weight per level; empty means all ones.
    pub scale_weights: Vec<f64>,
    /// Use this model instead of estimating one from each image.
    pub model: Option<BackgroundModel>,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            method: EstimationMethod::Empirical,
            ridge: DEFAULT_RIDGE,
            epsilon: 1.0,
            connectivity: Connectivity::Eight,
            alpha: 1.0,
            tau: 0.0,
            tail: Tail::TwoSided,
            scales: 1,
            scale_weights: Vec::new(),
            model: None,
        }
    }
}

impl DetectConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon {} must be finite and > 0", self.epsilon));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha {} must be finite and > 0", self.alpha));
        }
        if !self.tau.is_finite() {
            return bad(format!("tau {} must be finite", self.tau));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return bad(format!("ridge {} must be >= 0", self.ridge));
        }
        if self.scales == 0 {
            return bad("scales must be >= 1".into());
        }
        if !self.scale_weights.is_empty() && self.scale_weights.len() != self.scales {
            return bad(format!(
                "{} scale weights for {} scales",
                self.scale_weights.len(),
                self.scales
            ));
        }
        if let Some(w) = self
            .scale_weights
            .iter()
            .find(|w| !(w.is_finite() && **w > 0.0))
        {
            return bad(format!("scale weight {w} must be finite and > 0"));
        }
        if self.model.is_none() && self.method == EstimationMethod::Known {
            return bad("method 'known' requires a supplied model".into());
        }
        Ok(())
    }

    pub fn weights(&self) -> Vec<f64> {
        if self.scale_weights.is_empty() {
            vec![1.0; self.scales]
        } else {
            self.scale_weights.clone()
        }
    }
}

/// Significance of every pixel of `image` at full resolution, fusing the
/// pyramid levels when `config.scales > 1`.
///
/// Level `l` is the 2×2 block average of level `l - 1`. Every level is tested
/// with the full-resolution `eta_test`. With an estimated model each level is
/// estimated from itself; a supplied model is carried down as the model of
/// the mean of `4^l` pixels.
pub fn significance(image: &ImageTensor, config: &DetectConfig) -> Result<SignificanceMap> {
    config.validate()?;
    let eta = image.pixel_count() as u64;
    let mut level = image.clone();
    let mut maps = Vec::with_capacity(config.scales);
    for l in 0..config.scales {
        if l > 0 {
            level = level.block_average_2x2()?;
        }
        let model = match &config.model {
            Some(m) => m.averaged(1 << (2 * l))?.with_eta_test(eta)?,
            None => estimate_background(&level, config.method, config.ridge)?.with_eta_test(eta)?,
        };
        let map = nfa::nfa_gaussian_map_with_tail(&level, &model, config.tail)?;
        maps.push(nfa::significance_map(&map));
    }
    if maps.len() == 1 {
        return Ok(maps.pop().expect("one level"));
    }
    nfa::fuse_scales(&maps, &config.weights(), (image.height(), image.width()))
}

/// Full pipeline: background model, NFA map (optionally multi-scale),
/// threshold at `epsilon`, connected components, scored detections.
pub fn detect(image: &ImageTensor, config: &DetectConfig) -> Result<Vec<Detection>> {
    let nfa = significance(image, config)?.to_nfa_map()?;
    let mask = threshold_mask(&nfa, config.epsilon)?;
    let components = connected_components(&mask, config.connectivity);
    components_to_detections(&components, &nfa, config.alpha, config.tau)
}
