//! Run configuration: defaults, INI-style `key = value` files, flag overrides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use acontrario::background::{BackgroundModel, DEFAULT_RIDGE};
use acontrario::eval::DEFAULT_IOU_MIN;
use acontrario::{Connectivity, DetectConfig, EstimationMethod, Tail};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub detections: Option<PathBuf>,
    pub ground_truth: Option<PathBuf>,
    pub out: PathBuf,
    pub method: EstimationMethod,
    pub ridge: f64,
    pub model_mean: Vec<f64>,
    pub model_cov: Vec<f64>,
    pub epsilon: f64,
    pub connectivity: Connectivity,
    pub alpha: f64,
    pub tau: f64,
    pub one_sided: bool,
    pub scales: usize,
    pub scale_weights: Vec<f64>,
    pub iou_min: f64,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide. Never affects output.
    pub jobs: usize,
    pub save_maps: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifest: None,
            detections: None,
            ground_truth: None,
            out: PathBuf::from("out"),
            method: EstimationMethod::Empirical,
            ridge: DEFAULT_RIDGE,
            model_mean: Vec::new(),
            model_cov: Vec::new(),
            epsilon: 1.0,
            connectivity: Connectivity::Eight,
            alpha: 1.0,
            tau: 0.0,
            one_sided: false,
            scales: 1,
            scale_weights: Vec::new(),
            iou_min: DEFAULT_IOU_MIN,
            seed: 0,
            jobs: 0,
            save_maps: false,
        }
    }
}

pub const KEYS: &[&str] = &[
    "manifest",
    "detections",
    "ground_truth",
    "out",
    "method",
    "ridge",
    "model_mean",
    "model_cov",
    "epsilon",
    "connectivity",
    "alpha",
    "tau",
    "one_sided",
    "scales",
    "scale_weights",
    "iou_min",
    "seed",
    "jobs",
    "save_maps",
];

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}")))
        .collect()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

fn opt_path(s: &str) -> Option<PathBuf> {
    (!s.is_empty()).then(|| PathBuf::from(s))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |e: String| CliError::Usage(format!("config key '{key}': {e}"));
        let num = |v: &str| v.parse::<f64>().map_err(|e| bad(e.to_string()));
        match key {
            "manifest" => self.manifest = opt_path(value),
            "detections" => self.detections = opt_path(value),
            "ground_truth" => self.ground_truth = opt_path(value),
            "out" => self.out = PathBuf::from(value),
            "method" => self.method = value.parse().map_err(|e| bad(format!("{e}")))?,
            "ridge" => self.ridge = num(value)?,
            "model_mean" => self.model_mean = parse_list(value).map_err(bad)?,
            "model_cov" => self.model_cov = parse_list(value).map_err(bad)?,
            "epsilon" => self.epsilon = num(value)?,
            "connectivity" => self.connectivity = value.parse().map_err(|e| bad(format!("{e}")))?,
            "alpha" => self.alpha = num(value)?,
            "tau" => self.tau = num(value)?,
            "one_sided" => self.one_sided = parse_bool(value).map_err(bad)?,
            "scales" => self.scales = value.parse().map_err(|e| bad(format!("{e}")))?,
            "scale_weights" => self.scale_weights = parse_list(value).map_err(bad)?,
            "iou_min" => self.iou_min = num(value)?,
            "seed" => self.seed = value.parse().map_err(|e| bad(format!("{e}")))?,
            "jobs" => self.jobs = value.parse().map_err(|e| bad(format!("{e}")))?,
            "save_maps" => self.save_maps = parse_bool(value).map_err(bad)?,
            _ => return Err(CliError::Usage(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines. `#` and `;` start comments; `[section]`
    /// lines are accepted and ignored.
    pub fn apply_ini(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", i + 1))
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        self.apply_ini(&text)
    }

    /// Every key with its current value, readable back by [`apply_ini`].
    ///
    /// [`apply_ini`]: RunConfig::apply_ini
    pub fn to_ini(&self) -> String {
        let p = |o: &Option<PathBuf>| {
            o.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            if v.is_empty() {
                writeln!(s, "{k} =")
            } else {
                writeln!(s, "{k} = {v}")
            }
            .expect("string write")
        };
        kv("manifest", p(&self.manifest));
        kv("detections", p(&self.detections));
        kv("ground_truth", p(&self.ground_truth));
        kv("out", self.out.display().to_string());
        kv("method", self.method.to_string());
        kv("ridge", self.ridge.to_string());
        kv("model_mean", fmt_list(&self.model_mean));
        kv("model_cov", fmt_list(&self.model_cov));
        kv("epsilon", self.epsilon.to_string());
        kv("connectivity", self.connectivity.to_string());
        kv("alpha", self.alpha.to_string());
        kv("tau", self.tau.to_string());
        kv("one_sided", self.one_sided.to_string());
        kv("scales", self.scales.to_string());
        kv("scale_weights", fmt_list(&self.scale_weights));
        kv("iou_min", self.iou_min.to_string());
        kv("seed", self.seed.to_string());
        kv("jobs", self.jobs.to_string());
        kv("save_maps", self.save_maps.to_string());
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(0.0..=1.0).contains(&self.iou_min) {
            return Err(CliError::Usage(format!(
                "iou_min {} must lie in [0, 1]",
                self.iou_min
            )));
        }
        self.detect_config()?
            .validate()
            .map_err(CliError::from_core)?;
        Ok(())
    }

    pub fn detect_config(&self) -> Result<DetectConfig, CliError> {
        let model = if self.method == EstimationMethod::Known {
            let k = self.model_mean.len();
            if k == 0 {
                return Err(CliError::Usage(
                    "method = known needs model_mean and model_cov".into(),
                ));
            }
            // eta is replaced per image by its pixel count
            Some(
                BackgroundModel::known(self.model_mean.clone(), self.model_cov.clone(), 1)
                    .map_err(CliError::from_core)?,
            )
        } else {
            if !self.model_mean.is_empty() || !self.model_cov.is_empty() {
                return Err(CliError::Usage(
                    "model_mean/model_cov need method = known".into(),
                ));
            }
            None
        };
        Ok(DetectConfig {
            method: self.method,
            ridge: self.ridge,
            epsilon: self.epsilon,
            connectivity: self.connectivity,
            alpha: self.alpha,
            tau: self.tau,
            tail: if self.one_sided {
                Tail::OneSided
            } else {
                Tail::TwoSided
            },
            scales: self.scales,
            scale_weights: self.scale_weights.clone(),
            model,
        })
    }
}
