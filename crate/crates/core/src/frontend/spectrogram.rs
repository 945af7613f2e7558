use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::erb::{erb_band_bins, gammatone_weight};
use super::threshold::threshold_in_quiet;
use super::{CalibrationParams, FrontendConfig};
use crate::error::{Error, Result};

/// Weights below this are dropped from a band's support.
const WEIGHT_FLOOR: f64 = 1e-12;

struct Band {
    center_hz: f64,
    first_bin: usize,
    weights: Vec<f64>,
    /// Response to a sine on the center bin relative to `|X(k)|^2`.
    norm: f64,
}

/// Precomputed Hann window, FFT plan and gammatone band weights.
pub struct Filterbank {
    cfg: FrontendConfig,
    window: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    bands: Vec<Band>,
}

impl std::fmt::Debug for Filterbank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Filterbank")
            .field("cfg", &self.cfg)
            .field("bands", &self.bands.len())
            .finish()
    }
}

impl Filterbank {
    pub fn new(cfg: &FrontendConfig) -> Result<Self> {
        let bins = erb_band_bins(cfg)?;
        let n = cfg.window_len;
        let bin_hz = cfg.bin_hz();
        let half = n / 2;
        // periodic Hann: a bin-centered sine leaks only into bins k-1 and k+1
        let window = (0..n)
            .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
            .collect();
        let bands = bins
            .iter()
            .map(|&k| {
                let fc = k as f64 * bin_hz;
                let w = |bin: usize| gammatone_weight(fc, bin as f64 * bin_hz);
                let mut lo = k;
                while lo > 0 && w(lo - 1) >= WEIGHT_FLOOR {
                    lo -= 1;
                }
                let mut hi = k;
                while hi < half && w(hi + 1) >= WEIGHT_FLOOR {
                    hi += 1;
                }
                let side = |bin: Option<usize>| bin.filter(|&b| b <= half).map_or(0.0, w);
                let norm = 1.0 + 0.25 * (side(k.checked_sub(1)) + side(Some(k + 1)));
                Band {
                    center_hz: fc,
                    first_bin: lo,
                    weights: (lo..=hi).map(w).collect(),
                    norm,
                }
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(n);
        Ok(Self {
            cfg: cfg.clone(),
            window,
            fft,
            bands,
        })
    }

    pub fn config(&self) -> &FrontendConfig {
        &self.cfg
    }

    pub fn band_centers(&self) -> Vec<f64> {
        self.bands.iter().map(|b| b.center_hz).collect()
    }

    /// `|X(k)|^2` for `k = 0..=N/2` of one Hann-windowed frame.
    pub fn frame_power(&self, frame: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> = frame
            .iter()
            .zip(&self.window)
            .map(|(x, w)| Complex::new(x * w, 0.0))
            .collect();
        self.fft.process(&mut buf);
        buf[..=self.cfg.window_len / 2]
            .iter()
            .map(|c| c.norm_sqr())
            .collect()
    }

    pub fn power_spectrogram(&self, signal: &[f64]) -> Result<BandPowers> {
        let n = self.cfg.window_len;
        if signal.len() < n {
            return Err(Error::TooShort {
                needed: n,
                got: signal.len(),
            });
        }
        let columns = self.cfg.num_columns(signal.len());
        let nb = self.bands.len();
        let mut power = vec![0.0; nb * columns];
        for col in 0..columns {
            let start = col * self.cfg.hop;
            let spectrum = self.frame_power(&signal[start..start + n]);
            for (b, band) in self.bands.iter().enumerate() {
                let s: f64 = band
                    .weights
                    .iter()
                    .zip(&spectrum[band.first_bin..])
                    .map(|(w, p)| w * p)
                    .sum();
                power[b * columns + col] = s / band.norm;
            }
        }
        Ok(BandPowers {
            power,
            num_bands: nb,
            num_columns: columns,
            band_centers: self.band_centers(),
            window_len: n,
            hop: self.cfg.hop,
            sample_rate: self.cfg.sample_rate,
        })
    }
}

/// Uncalibrated gammatone-weighted band powers, `[bands x columns]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPowers {
    power: Vec<f64>,
    num_bands: usize,
    num_columns: usize,
    band_centers: Vec<f64>,
    window_len: usize,
    hop: usize,
    sample_rate: u32,
}

impl BandPowers {
    pub fn num_bands(&self) -> usize {
        self.num_bands
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn band_centers(&self) -> &[f64] {
        &self.band_centers
    }

    pub fn power(&self, band: usize, col: usize) -> f64 {
        self.power[band * self.num_columns + col]
    }

    /// `10 log10(power) + offset_db` with no gating (`-inf` for silence).
    pub fn levels_db_ungated(&self, offset_db: f64) -> Vec<f64> {
        self.power
            .iter()
            .map(|&p| 10.0 * p.log10() + offset_db)
            .collect()
    }
}

/// Calibrated band levels in dB SPL, `[bands x columns]`, row-major.
///
/// A cell is either 0 (gated: below the threshold in quiet) or at least the
/// threshold at its band center.
#[derive(Debug, Clone, PartialEq)]
pub struct ErbSpectrogram {
    levels: Vec<f64>,
    num_bands: usize,
    num_columns: usize,
    band_centers: Vec<f64>,
    hop: usize,
    sample_rate: u32,
}

impl ErbSpectrogram {
    pub fn from_levels(
        levels: Vec<f64>,
        num_bands: usize,
        num_columns: usize,
        band_centers: Vec<f64>,
        hop: usize,
        sample_rate: u32,
    ) -> Result<Self> {
        if levels.len() != num_bands * num_columns || band_centers.len() != num_bands {
            return Err(Error::InvalidConfig(format!(
                "spectrogram shape {num_bands}x{num_columns} does not match data"
            )));
        }
        Ok(Self {
            levels,
            num_bands,
            num_columns,
            band_centers,
            hop,
            sample_rate,
        })
    }

    pub fn num_bands(&self) -> usize {
        self.num_bands
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn band_centers(&self) -> &[f64] {
        &self.band_centers
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Seconds between columns.
    pub fn column_period(&self) -> f64 {
        self.hop as f64 / f64::from(self.sample_rate)
    }

    pub fn level(&self, band: usize, col: usize) -> f64 {
        self.levels[band * self.num_columns + col]
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

/// Uncalibrated band powers of one channel.
pub fn power_spectrogram(signal: &[f64], cfg: &FrontendConfig) -> Result<BandPowers> {
    Filterbank::new(cfg)?.power_spectrogram(signal)
}

/// Converts band power to dB SPL and zeroes cells below the threshold in quiet.
pub fn calibrate_and_gate(powers: &BandPowers, cal: &CalibrationParams) -> ErbSpectrogram {
    let offset = cal.offset_db(powers.window_len);
    let thresholds: Vec<f64> = powers
        .band_centers
        .iter()
        .map(|&f| threshold_in_quiet(f.clamp(20.0, 20000.0)).expect("clamped into range"))
        .collect();
    let cols = powers.num_columns;
    let levels = powers
        .power
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let level = 10.0 * p.log10() + offset;
            if level.is_finite() && level >= thresholds[i / cols.max(1)] {
                level
            } else {
                0.0
            }
        })
        .collect();
    ErbSpectrogram {
        levels,
        num_bands: powers.num_bands,
        num_columns: cols,
        band_centers: powers.band_centers.clone(),
        hop: powers.hop,
        sample_rate: powers.sample_rate,
    }
}
