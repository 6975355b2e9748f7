//! A contrario small-target detection.
//!
//! Pixels are tested against a naive background model (i.i.d. multivariate
//! Gaussian). Each pixel receives a Number of False Alarms,
//!
//! ```text
//! NFA(x) = eta_test * Q(K/2, m²/2),   m² = (x - mu)ᵀ Σ⁻¹ (x - mu)
//! ```
//!
//! where `Q` is the regularized upper incomplete gamma function and
//! `eta_test` the number of tested pixels. Thresholding `NFA <= epsilon`
//! keeps the expected number of false detections per image below `epsilon`
//! regardless of image size.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] owns the gamma / incomplete gamma / erfc / incomplete beta kernels.
//! * [`background`] estimates the naive model and whitens pixels.
//! * [`nfa`] computes NFA and significance maps, score activation, scale fusion
//!   and the binomial variant for binary maps.
//! * [`detect`] groups significant pixels into scored detections.
//! * [`eval`] implements IoU matching, F1 and object-level average precision.
//! * [`synth`] generates seeded scenes under the naive model.
//! * [`dataset`] loads images and masks and applies the dataset preparation rules.
//! * [`raster`] reads and writes the binary float raster format.

pub mod background;
pub mod dataset;
pub mod detect;
pub mod error;
pub mod eval;
pub mod image;
pub mod nfa;
pub mod raster;
pub mod rng;
pub mod special;
pub mod synth;

pub use background::{estimate_background, BackgroundModel, EstimationMethod};
pub use detect::{detect, Connectivity, DetectConfig, Detection};
pub use error::{Error, Result};
pub use eval::{BBox, EvalReport, GroundTruthBox, ScoredDetection};
pub use image::ImageTensor;
pub use nfa::{NfaMap, SignificanceMap, Tail};
