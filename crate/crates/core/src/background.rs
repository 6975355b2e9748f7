//! Naive background model: per-image Gaussian statistics and whitening.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageTensor;

/// MAD to standard deviation for Gaussian data.
pub const MAD_SCALE: f64 = 1.4826;

/// Default relative ridge: `lambda = ridge * trace(Σ) / K`.
pub const DEFAULT_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimationMethod {
    /// Sample mean and population covariance (divisor N).
    #[default]
    Empirical,
    /// Per-channel median and squared MAD-scaled deviation. Diagonal only.
    Robust,
    /// Parameters supplied by the caller.
    Known,
}

impl std::str::FromStr for EstimationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empirical" => Ok(Self::Empirical),
            "robust" => Ok(Self::Robust),
            "known" => Ok(Self::Known),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

impl std::fmt::Display for EstimationMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Empirical => "empirical",
            Self::Robust => "robust",
            Self::Known => "known",
        })
    }
}

/// Gaussian background hypothesis `N(mean, covariance)` with its whitening
/// factor.
///
/// Matrices are K×K row-major. `whitener` is the lower Cholesky factor `L` of
/// `covariance + lambda I`; it is `None` when that matrix is not positive
/// definite, in which case the model is degenerate and every NFA query fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundModel {
    mean: Vec<f64>,
    covariance: Vec<f64>,
    ridge_lambda: f64,
    whitener: Option<Vec<f64>>,
    eta_test: u64,
    method: EstimationMethod,
}

impl BackgroundModel {
    /// Model with caller-supplied parameters and no ridge.
    pub fn known(mean: Vec<f64>, covariance: Vec<f64>, eta_test: u64) -> Result<Self> {
        Self::from_parts(mean, covariance, 0.0, eta_test, EstimationMethod::Known)
    }

    pub fn from_parts(
        mean: Vec<f64>,
        covariance: Vec<f64>,
        ridge: f64,
        eta_test: u64,
        method: EstimationMethod,
    ) -> Result<Self> {
        let k = mean.len();
        if k == 0 {
            return Err(Error::InvalidParameter("empty mean vector".into()));
        }
        if covariance.len() != k * k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                got: covariance.len(),
            });
        }
        if !(ridge >= 0.0 && ridge.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ridge {ridge} must be >= 0"
            )));
        }
        if eta_test == 0 {
            return Err(Error::InvalidParameter("eta_test must be >= 1".into()));
        }
        if mean.iter().chain(&covariance).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite model parameter".into()));
        }
        for i in 0..k {
            for j in 0..i {
                let (a, b) = (covariance[i * k + j], covariance[j * k + i]);
                if (a - b).abs() > 1e-12 * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
                    return Err(Error::InvalidParameter(
                        "covariance is not symmetric".into(),
                    ));
                }
            }
        }
        let trace: f64 = (0..k).map(|i| covariance[i * k + i]).sum();
        let ridge_lambda = ridge * trace / k as f64;
        let whitener = if trace > 0.0 {
            cholesky_lower(&covariance, k, ridge_lambda)
        } else {
            None
        };
        Ok(Self {
            mean,
            covariance,
            ridge_lambda,
            whitener,
            eta_test,
            method,
        })
    }

    pub fn channels(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Covariance before regularization.
    pub fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    /// `covariance + lambda I`.
    pub fn regularized_covariance(&self) -> Vec<f64> {
        let k = self.channels();
        let mut c = self.covariance.clone();
        for i in 0..k {
            c[i * k + i] += self.ridge_lambda;
        }
        c
    }

    pub fn ridge_lambda(&self) -> f64 {
        self.ridge_lambda
    }

    pub fn whitener(&self) -> Option<&[f64]> {
        self.whitener.as_deref()
    }

    pub fn eta_test(&self) -> u64 {
        self.eta_test
    }

    pub fn method(&self) -> EstimationMethod {
        self.method
    }

    pub fn is_degenerate(&self) -> bool {
        self.whitener.is_none()
    }

    pub fn with_eta_test(mut self, eta_test: u64) -> Result<Self> {
        if eta_test == 0 {
            return Err(Error::InvalidParameter("eta_test must be >= 1".into()));
        }
        self.eta_test = eta_test;
        Ok(self)
    }

    /// Model of the mean of `n` i.i.d. pixels drawn from this one: same mean,
    /// covariance divided by `n`. Used for block-averaged pyramid levels.
    pub fn averaged(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cannot average zero pixels".into()));
        }
        let s = 1.0 / n as f64;
        let mut out = self.clone();
        out.covariance.iter_mut().for_each(|v| *v *= s);
        out.ridge_lambda *= s;
        if let Some(l) = out.whitener.as_mut() {
            l.iter_mut().for_each(|v| *v *= s.sqrt());
        }
        Ok(out)
    }

    /// Squared Mahalanobis distance `(x - mu)ᵀ (Σ + lambda I)⁻¹ (x - mu)`.
    pub fn mahalanobis_sq(&self, pixel: &[f64]) -> Result<f64> {
        let k = self.channels();
        if pixel.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: pixel.len(),
            });
        }
        let l = self.whitener.as_deref().ok_or(Error::DegenerateModel)?;
        let mut scratch = vec![0.0; k];
        Ok(whitened_norm_sq(l, &self.mean, pixel, &mut scratch))
    }

    /// Whitened deviation `L⁻¹ (x - mu)` written into `out`.
    pub fn whiten(&self, pixel: &[f64], out: &mut [f64]) -> Result<()> {
        let k = self.channels();
        if pixel.len() != k || out.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: pixel.len(),
            });
        }
        let l = self.whitener.as_deref().ok_or(Error::DegenerateModel)?;
        forward_substitute(l, &self.mean, pixel, out);
        Ok(())
    }
}

/// Solves `L y = x - mean` by forward substitution.
pub(crate) fn forward_substitute(l: &[f64], mean: &[f64], pixel: &[f64], y: &mut [f64]) {
    let k = mean.len();
    for i in 0..k {
        let mut v = pixel[i] - mean[i];
        for j in 0..i {
            v -= l[i * k + j] * y[j];
        }
        y[i] = v / l[i * k + i];
    }
}

pub(crate) fn whitened_norm_sq(l: &[f64], mean: &[f64], pixel: &[f64], y: &mut [f64]) -> f64 {
    forward_substitute(l, mean, pixel, y);
    y.iter().map(|v| v * v).sum()
}

fn cholesky_lower(cov: &[f64], k: usize, lambda: f64) -> Option<Vec<f64>> {
    let mut m = DMatrix::from_row_slice(k, k, cov);
    for i in 0..k {
        m[(i, i)] += lambda;
    }
    let l = m.cholesky()?.unpack();
    let mut out = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            out[i * k + j] = l[(i, j)];
        }
    }
    if out.iter().any(|v| !v.is_finite()) || (0..k).any(|i| out[i * k + i] <= 0.0) {
        return None;
    }
    Some(out)
}

fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Estimates the background model from all pixels of `image`.
///
/// `eta_test` is set to the pixel count. A constant image yields a degenerate
/// model rather than an error.
pub fn estimate_background(
    image: &ImageTensor,
    method: EstimationMethod,
    ridge: f64,
) -> Result<BackgroundModel> {
    let k = image.channels();
    let n = image.pixel_count();
    if n < k + 1 {
        return Err(Error::InvalidImage(format!(
            "need at least {} pixels to estimate a {k}-channel model, got {n}",
            k + 1
        )));
    }
    let (mean, cov) = match method {
        EstimationMethod::Empirical => empirical_moments(image),
        EstimationMethod::Robust => robust_moments(image),
        EstimationMethod::Known => {
            return Err(Error::InvalidParameter(
                "a known model cannot be estimated; build it with BackgroundModel::known".into(),
            ))
        }
    };
    BackgroundModel::from_parts(mean, cov, ridge, n as u64, method)
}

fn empirical_moments(image: &ImageTensor) -> (Vec<f64>, Vec<f64>) {
    let k = image.channels();
    let n = image.pixel_count() as f64;
    let mut mean = vec![0.0; k];
    for px in image.pixels() {
        for (m, v) in mean.iter_mut().zip(px) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut cov = vec![0.0; k * k];
    let mut d = vec![0.0; k];
    for px in image.pixels() {
        for i in 0..k {
            d[i] = px[i] - mean[i];
        }
        for i in 0..k {
            for j in 0..=i {
                cov[i * k + j] += d[i] * d[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..=i {
            let v = cov[i * k + j] / n;
            cov[i * k + j] = v;
            cov[j * k + i] = v;
        }
    }
    (mean, cov)
}

fn robust_moments(image: &ImageTensor) -> (Vec<f64>, Vec<f64>) {
    let k = image.channels();
    let mut mean = vec![0.0; k];
    let mut cov = vec![0.0; k * k];
    for c in 0..k {
        let mut values = image.channel(c);
        let med = median(&mut values);
        values.iter_mut().for_each(|v| *v = (*v - med).abs());
        let sigma = MAD_SCALE * median(&mut values);
        mean[c] = med;
        cov[c * k + c] = sigma * sigma;
    }
    (mean, cov)
}
