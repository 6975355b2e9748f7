use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// H×W×K image of real intensities.
///
/// Storage is row-major and channel-interleaved: the value of channel `c` at
/// `(row, col)` lives at `(row * width + col) * channels + c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageTensor {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl ImageTensor {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {height}x{width}x{channels}"
            )));
        }
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidImage(format!(
                "non-finite value at index {i}"
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, pixel: &[f64]) -> Result<Self> {
        let data = pixel
            .iter()
            .copied()
            .cycle()
            .take(height * width * pixel.len())
            .collect();
        Self::new(height, width, pixel.len(), data)
    }

    pub fn from_fn(height: usize, width: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self::new(height, width, 1, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixel_count(&self) -> usize {
        self.height * self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn pixel(&self, row: usize, col: usize) -> &[f64] {
        let start = (row * self.width + col) * self.channels;
        &self.data[start..start + self.channels]
    }

    pub fn pixel_mut(&mut self, row: usize, col: usize) -> &mut [f64] {
        let start = (row * self.width + col) * self.channels;
        &mut self.data[start..start + self.channels]
    }

    pub fn pixels(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.channels)
    }

    /// Values of one channel in row-major order.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.pixels().map(|p| p[c]).collect()
    }

    /// 2×2 block average, dropping a trailing odd row or column.
    pub fn block_average_2x2(&self) -> Result<Self> {
        let h = self.height / 2;
        let w = self.width / 2;
        if h == 0 || w == 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot decimate a {}x{} image",
                self.height, self.width
            )));
        }
        let k = self.channels;
        let mut data = vec![0.0; h * w * k];
        for r in 0..h {
            for c in 0..w {
                let out = &mut data[(r * w + c) * k..(r * w + c + 1) * k];
                for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    for (o, v) in out.iter_mut().zip(self.pixel(2 * r + dr, 2 * c + dc)) {
                        *o += v;
                    }
                }
                out.iter_mut().for_each(|o| *o *= 0.25);
            }
        }
        Self::new(h, w, k, data)
    }

    /// Applies `x -> a x + b` per pixel, with `a` a K×K row-major matrix.
    pub fn affine(&self, a: &[f64], b: &[f64]) -> Result<Self> {
        let k = self.channels;
        if a.len() != k * k || b.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                got: a.len(),
            });
        }
        let mut data = Vec::with_capacity(self.data.len());
        for px in self.pixels() {
            for i in 0..k {
                let row = &a[i * k..(i + 1) * k];
                data.push(row.iter().zip(px).map(|(x, y)| x * y).sum::<f64>() + b[i]);
            }
        }
        Self::new(self.height, self.width, k, data)
    }
}
