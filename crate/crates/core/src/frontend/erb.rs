//! ERB-rate scale, band-center placement and gammatone bin weighting.

use super::FrontendConfig;
use crate::error::{Error, Result};

/// Glasberg-Moore ERB-rate, `21.4 log10(1 + 0.00437 f)`.
pub fn erb_rate(f: f64) -> f64 {
    21.4 * (1.0 + 0.00437 * f).log10()
}

/// Inverse of [`erb_rate`].
pub fn erb_rate_inv(e: f64) -> f64 {
    (10f64.powf(e / 21.4) - 1.0) / 0.00437
}

/// Equivalent rectangular bandwidth in Hz at `fc`.
pub fn erb_bandwidth(fc: f64) -> f64 {
    24.7 * (0.00437 * fc + 1.0)
}

/// Band centers uniformly spaced in ERB-rate between `f_min` and `f_max`,
/// each moved onto an FFT bin center `k * sample_rate / window_len`.
///
/// Bands are placed in ascending order; a band whose nearest bin is already
/// taken moves up to the next free bin, so centers stay strictly increasing.
pub fn erb_band_centers(cfg: &FrontendConfig) -> Result<Vec<f64>> {
    Ok(erb_band_bins(cfg)?
        .into_iter()
        .map(|k| k as f64 * cfg.bin_hz())
        .collect())
}

/// FFT bin index of every band center.
pub fn erb_band_bins(cfg: &FrontendConfig) -> Result<Vec<usize>> {
    cfg.validate()?;
    let lo = erb_rate(cfg.f_min);
    let hi = erb_rate(cfg.f_max);
    let nyquist_bin = cfg.window_len / 2;
    let bin_hz = cfg.bin_hz();
    let n = cfg.num_bands;
    let mut bins = Vec::with_capacity(n);
    let mut prev: Option<usize> = None;
    for band in 0..n {
        let e = if n == 1 {
            lo
        } else {
            lo + (hi - lo) * band as f64 / (n - 1) as f64
        };
        let nearest = ((erb_rate_inv(e) / bin_hz).round() as usize).max(1);
        let k = match prev {
            Some(p) if nearest <= p => p + 1,
            _ => nearest,
        };
        if k > nyquist_bin {
            return Err(Error::BandCollision { band });
        }
        bins.push(k);
        prev = Some(k);
    }
    Ok(bins)
}

/// Power-domain 4th-order gammatone magnitude response,
/// `[1 + ((f - fc) / b)^2]^-4` with `b = 1.019 ERB(fc)`. Equals 1 at `fc`.
pub fn gammatone_weight(center: f64, f: f64) -> f64 {
    let b = 1.019 * erb_bandwidth(center);
    let x = (f - center) / b;
    (1.0 + x * x).powi(-4)
}

pub fn gammatone_weights(center: f64, bins: &[f64]) -> Vec<f64> {
    bins.iter().map(|&f| gammatone_weight(center, f)).collect()
}
