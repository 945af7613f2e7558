//! Binary matrix dump of an [`ErbSpectrogram`] for golden tests.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic   b"ERBS"
//! u32     bands
//! u32     columns
//! u32     sample_rate
//! u32     hop
//! f32     band center (Hz) x bands
//! f32     level (dB SPL) x bands*columns, row-major by band
//! ```

use std::fs;
use std::path::Path;

use super::ErbSpectrogram;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ERBS";

pub fn write_dump(path: &Path, spec: &ErbSpectrogram) -> Result<()> {
    let mut out = Vec::with_capacity(20 + 4 * (spec.num_bands() * (spec.num_columns() + 1)));
    out.extend_from_slice(MAGIC);
    for v in [
        spec.num_bands() as u32,
        spec.num_columns() as u32,
        spec.sample_rate(),
        spec.hop() as u32,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &f in spec.band_centers().iter().chain(spec.levels()) {
        out.extend_from_slice(&(f as f32).to_le_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_dump(path: &Path) -> Result<ErbSpectrogram> {
    let bytes = fs::read(path)?;
    let bad = |m: &str| Error::Decode {
        path: path.to_path_buf(),
        diagnostic: m.to_string(),
    };
    if bytes.len() < 20 || &bytes[..4] != MAGIC {
        return Err(bad("not an ERBS dump"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    let (bands, columns, rate, hop) = (
        word(0) as usize,
        word(1) as usize,
        word(2),
        word(3) as usize,
    );
    let floats: Vec<f64> = bytes[20..]
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
        .collect();
    if floats.len() != bands * (columns + 1) {
        return Err(bad("payload length does not match header"));
    }
    let (centers, levels) = floats.split_at(bands);
    ErbSpectrogram::from_levels(levels.to_vec(), bands, columns, centers.to_vec(), hop, rate)
}
