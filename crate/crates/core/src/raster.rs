//! Binary float rasters.
//!
//! Every file starts with an 8-byte header: a 4-byte magic, then height and
//! width as little-endian `u16`. The payload is row-major little-endian `f32`.
//!
//! | magic      | payload                                 |
//! |------------|-----------------------------------------|
//! | `NFA\0`    | `log10(NFA)` per pixel                  |
//! | `SIG\0`    | significance `-log10(NFA)` per pixel    |
//! | `IMG` + K  | K interleaved channels per pixel (K u8) |
//!
//! Sentinels survive the conversion: `-inf` stays `-inf`. The `NFA`/`SIG`
//! readers need `eta_test`, which is not stored.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::image::ImageTensor;
use crate::nfa::{NfaMap, SignificanceMap};

pub const NFA_MAGIC: [u8; 4] = *b"NFA\0";
pub const SIGNIFICANCE_MAGIC: [u8; 4] = *b"SIG\0";
pub const IMAGE_MAGIC_PREFIX: [u8; 3] = *b"IMG";

fn write_header(w: &mut impl Write, magic: [u8; 4], height: usize, width: usize) -> Result<()> {
    let h = u16::try_from(height)
        .map_err(|_| Error::InvalidParameter(format!("height {height} exceeds u16")))?;
    let wd = u16::try_from(width)
        .map_err(|_| Error::InvalidParameter(format!("width {width} exceeds u16")))?;
    w.write_all(&magic)?;
    w.write_all(&h.to_le_bytes())?;
    w.write_all(&wd.to_le_bytes())?;
    Ok(())
}

fn read_header(r: &mut impl Read) -> Result<([u8; 4], usize, usize)> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Malformed(format!("raster header: {e}")))?;
    let magic = [buf[0], buf[1], buf[2], buf[3]];
    let h = u16::from_le_bytes([buf[4], buf[5]]) as usize;
    let w = u16::from_le_bytes([buf[6], buf[7]]) as usize;
    Ok((magic, h, w))
}

fn write_payload<'a>(w: &mut impl Write, values: impl Iterator<Item = &'a f64>) -> Result<()> {
    for v in values {
        w.write_all(&(*v as f32).to_le_bytes())?;
    }
    Ok(())
}

fn read_payload(r: &mut impl Read, n: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; n * 4];
    r.read_exact(&mut bytes)
        .map_err(|e| Error::Malformed(format!("raster payload truncated: {e}")))?;
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect())
}

pub fn write_nfa_map(w: &mut impl Write, map: &NfaMap) -> Result<()> {
    write_header(w, NFA_MAGIC, map.height(), map.width())?;
    write_payload(w, map.log10_values().iter())
}

pub fn read_nfa_map(r: &mut impl Read, eta_test: u64) -> Result<NfaMap> {
    let (magic, h, w) = read_header(r)?;
    if magic != NFA_MAGIC {
        return Err(Error::Malformed(format!("bad NFA raster magic {magic:?}")));
    }
    let cap = (eta_test as f64).log10();
    // f32 rounding can push log10(eta_test) itself above the cap.
    let values = read_payload(r, h * w)?
        .into_iter()
        .map(|v| v.min(cap))
        .collect();
    NfaMap::new(h, w, eta_test, values)
}

pub fn write_significance_map(w: &mut impl Write, map: &SignificanceMap) -> Result<()> {
    write_header(w, SIGNIFICANCE_MAGIC, map.height(), map.width())?;
    write_payload(w, map.values().iter())
}

pub fn read_significance_map(r: &mut impl Read, eta_test: u64) -> Result<SignificanceMap> {
    let (magic, h, w) = read_header(r)?;
    if magic != SIGNIFICANCE_MAGIC {
        return Err(Error::Malformed(format!(
            "bad significance raster magic {magic:?}"
        )));
    }
    SignificanceMap::new(h, w, eta_test, read_payload(r, h * w)?)
}

pub fn write_image(w: &mut impl Write, image: &ImageTensor) -> Result<()> {
    let k = u8::try_from(image.channels())
        .map_err(|_| Error::InvalidParameter("more than 255 channels".into()))?;
    let magic = [
        IMAGE_MAGIC_PREFIX[0],
        IMAGE_MAGIC_PREFIX[1],
        IMAGE_MAGIC_PREFIX[2],
        k,
    ];
    write_header(w, magic, image.height(), image.width())?;
    write_payload(w, image.data().iter())
}

pub fn read_image(r: &mut impl Read) -> Result<ImageTensor> {
    let (magic, h, w) = read_header(r)?;
    if magic[..3] != IMAGE_MAGIC_PREFIX || magic[3] == 0 {
        return Err(Error::Malformed(format!(
            "bad image raster magic {magic:?}"
        )));
    }
    let k = magic[3] as usize;
    ImageTensor::new(h, w, k, read_payload(r, h * w * k)?)
}
