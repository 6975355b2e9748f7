//! Number of False Alarms maps under the Gaussian naive model, significance,
//! score activation, scale fusion and the binomial variant.
//!
//! Maps store `log10` values throughout: NFAs of strong targets underflow
//! `f64` long before their significance stops being meaningful.

use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use crate::background::{whitened_norm_sq, BackgroundModel};
use crate::error::{Error, Result};
use crate::image::ImageTensor;
use crate::special;

/// Which tail of the Gaussian counts as surprising.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// Mahalanobis norm, deviations in any direction (the K-channel form).
    #[default]
    TwoSided,
    /// Bright deviations only, `1 - Phi(z)`. Single-channel models only.
    OneSided,
}

/// Per-pixel `log10(NFA)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NfaMap {
    height: usize,
    width: usize,
    eta_test: u64,
    log10: Vec<f64>,
}

impl NfaMap {
    pub fn new(height: usize, width: usize, eta_test: u64, log10: Vec<f64>) -> Result<Self> {
        if log10.len() != height * width {
            return Err(Error::DimensionMismatch {
                expected: height * width,
                got: log10.len(),
            });
        }
        if eta_test == 0 {
            return Err(Error::InvalidParameter("eta_test must be >= 1".into()));
        }
        let cap = (eta_test as f64).log10();
        if log10.iter().any(|v| v.is_nan() || *v > cap + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "log10 NFA values must be <= log10(eta_test) = {cap}"
            )));
        }
        Ok(Self {
            height,
            width,
            eta_test,
            log10,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn eta_test(&self) -> u64 {
        self.eta_test
    }

    pub fn log10_values(&self) -> &[f64] {
        &self.log10
    }

    pub fn log10_at(&self, row: usize, col: usize) -> f64 {
        self.log10[row * self.width + col]
    }

    /// NFA itself; `0.0` where it underflows.
    pub fn value_at(&self, row: usize, col: usize) -> f64 {
        10f64.powf(self.log10_at(row, col))
    }
}

/// Per-pixel significance `S = -log10(NFA)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceMap {
    height: usize,
    width: usize,
    eta_test: u64,
    values: Vec<f64>,
}

impl SignificanceMap {
    pub fn new(height: usize, width: usize, eta_test: u64, values: Vec<f64>) -> Result<Self> {
        if values.len() != height * width {
            return Err(Error::DimensionMismatch {
                expected: height * width,
                got: values.len(),
            });
        }
        if eta_test == 0 {
            return Err(Error::InvalidParameter("eta_test must be >= 1".into()));
        }
        Ok(Self {
            height,
            width,
            eta_test,
            values,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn eta_test(&self) -> u64 {
        self.eta_test
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn to_nfa_map(&self) -> Result<NfaMap> {
        NfaMap::new(
            self.height,
            self.width,
            self.eta_test,
            self.values.iter().map(|s| -s).collect(),
        )
    }

    /// Nearest-neighbour resampling onto a `height × width` grid. Output pixel
    /// `r` reads source row `floor((r + 0.5) * h / height)`, which is `r >> l`
    /// for a level decimated `l` times by 2.
    pub fn upsample_nearest(&self, height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidParameter(
                "target grid must be non-empty".into(),
            ));
        }
        let rows: Vec<usize> = (0..height)
            .map(|r| nearest_index(r, self.height, height))
            .collect();
        let cols: Vec<usize> = (0..width)
            .map(|c| nearest_index(c, self.width, width))
            .collect();
        let mut values = Vec::with_capacity(height * width);
        for &sr in &rows {
            for &sc in &cols {
                values.push(self.at(sr, sc));
            }
        }
        Self::new(height, width, self.eta_test, values)
    }
}

fn nearest_index(dst: usize, src_len: usize, dst_len: usize) -> usize {
    let s = ((2 * dst + 1) * src_len) / (2 * dst_len);
    s.min(src_len - 1)
}

/// `log10 NFA` for every pixel of `image` against `model`, two-sided.
pub fn nfa_gaussian_map(image: &ImageTensor, model: &BackgroundModel) -> Result<NfaMap> {
    nfa_gaussian_map_with_tail(image, model, Tail::TwoSided)
}

/// `NFA(x) = eta_test · Q(K/2, m²/2)` per pixel, or for the one-sided variant
/// `eta_test · (1 - Phi(z))` with `z` the whitened deviation.
pub fn nfa_gaussian_map_with_tail(
    image: &ImageTensor,
    model: &BackgroundModel,
    tail: Tail,
) -> Result<NfaMap> {
    let k = model.channels();
    if image.channels() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: image.channels(),
        });
    }
    if tail == Tail::OneSided && k != 1 {
        return Err(Error::InvalidParameter(format!(
            "one-sided tail needs a single-channel model, got K = {k}"
        )));
    }
    let l = model.whitener().ok_or(Error::DegenerateModel)?;
    let mean = model.mean();
    let log10_eta = (model.eta_test() as f64).log10();
    let half_k = 0.5 * k as f64;
    let mut y = vec![0.0; k];
    let mut log10 = Vec::with_capacity(image.pixel_count());
    for px in image.pixels() {
        let m2 = whitened_norm_sq(l, mean, px, &mut y);
        let ln_tail = match tail {
            Tail::TwoSided => special::ln_reg_upper_gamma_q(half_k, 0.5 * m2)?,
            Tail::OneSided => ln_upper_normal_tail(y[0])?,
        };
        log10.push((log10_eta + ln_tail / LN_10).min(log10_eta));
    }
    NfaMap::new(image.height(), image.width(), model.eta_test(), log10)
}

/// `ln(1 - Phi(z))`.
fn ln_upper_normal_tail(z: f64) -> Result<f64> {
    // 1 - Phi(z) = erfc(z/√2)/2, and erfc(|z|/√2) = Q(1/2, z²/2).
    let ln_q = special::ln_reg_upper_gamma_q(0.5, 0.5 * z * z)?;
    if z >= 0.0 {
        Ok(special::LN_HALF + ln_q)
    } else {
        Ok((-0.5 * ln_q.exp()).ln_1p())
    }
}

/// Entrywise sign flip of the stored `log10 NFA`.
pub fn significance_map(nfa: &NfaMap) -> SignificanceMap {
    SignificanceMap {
        height: nfa.height,
        width: nfa.width,
        eta_test: nfa.eta_test,
        values: nfa.log10.iter().map(|v| -v).collect(),
    }
}

/// Objectness score `1 / (1 + exp(-alpha (s - tau)))`.
pub fn sigm_alpha(s: f64, alpha: f64, tau: f64) -> f64 {
    let t = alpha * (s - tau);
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log10( n_tests · P(Bin(n, p) >= k) )`.
pub fn log10_nfa_binomial(k: u64, n: u64, p: f64, n_tests: u64) -> Result<f64> {
    check_binomial(n, p, n_tests)?;
    let ln_tail = special::ln_binomial_tail(n, k, p)?;
    Ok((n_tests as f64).log10() + ln_tail / LN_10)
}

fn check_binomial(n: u64, p: f64, n_tests: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("binomial NFA needs n >= 1".into()));
    }
    if n_tests == 0 {
        return Err(Error::InvalidParameter("n_tests must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} not in [0, 1]")));
    }
    Ok(())
}

/// Binomial NFA for binary maps: `n_tests · P(Bin(n, p) >= k)` where `k` of
/// the `n` pixels of a candidate shape are set and `p` is the density of set
/// pixels under the naive model.
pub fn nfa_binomial(k: u64, n: u64, p: f64, n_tests: u64) -> Result<f64> {
    check_binomial(n, p, n_tests)?;
    if k == 0 {
        return Ok(n_tests as f64);
    }
    Ok(10f64.powf(log10_nfa_binomial(k, n, p, n_tests)?))
}

/// Weighted-max fusion of per-scale significance maps onto `target`.
///
/// Each map is resampled by nearest neighbour; the fused value is
/// `max_l weights[l] · S_l`, floored at `-log10(eta_test)` so the result is
/// still a valid significance map. With unit weights this is a plain max.
pub fn fuse_scales(
    maps: &[SignificanceMap],
    weights: &[f64],
    target: (usize, usize),
) -> Result<SignificanceMap> {
    let first = maps
        .first()
        .ok_or_else(|| Error::InvalidParameter("no significance maps to fuse".into()))?;
    if weights.len() != maps.len() {
        return Err(Error::InvalidParameter(format!(
            "{} weights for {} scales",
            weights.len(),
            maps.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "scale weight {w} must be finite and > 0"
        )));
    }
    let eta = first.eta_test;
    if maps.iter().any(|m| m.eta_test != eta) {
        return Err(Error::InvalidParameter(
            "all scales must share the same eta_test".into(),
        ));
    }
    let floor = -(eta as f64).log10();
    let (h, w) = target;
    let mut fused = vec![f64::NEG_INFINITY; h * w];
    for (map, &weight) in maps.iter().zip(weights) {
        let up = if (map.height, map.width) == target {
            map.clone()
        } else {
            map.upsample_nearest(h, w)?
        };
        for (f, s) in fused.iter_mut().zip(&up.values) {
            *f = f.max(weight * s);
        }
    }
    fused.iter_mut().for_each(|f| *f = f.max(floor));
    SignificanceMap::new(h, w, eta, fused)
}
