//! Auditory frontend: calibrated, threshold-gated ERB-band spectrograms.
//!
//! Each column is a Hann-windowed FFT power spectrum folded into ERB bands
//! with gammatone weights. Band centers sit exactly on FFT bin centers, and
//! every band is normalized to unit gain for a sine on its center bin, so a
//! single calibration offset maps band power to dB SPL for all bands.

mod dump;
mod erb;
mod spectrogram;
mod threshold;

pub use dump::{read_dump, write_dump};
pub use erb::{
    erb_band_bins, erb_band_centers, erb_bandwidth, erb_rate, erb_rate_inv, gammatone_weight,
    gammatone_weights,
};
pub use spectrogram::{
    calibrate_and_gate, power_spectrogram, BandPowers, ErbSpectrogram, Filterbank,
};
pub use threshold::threshold_in_quiet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level mapping between digital full scale and sound pressure level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationParams {
    /// Level of the calibration sine in dBFS (amplitude `10^(dbfs_ref/20)`).
    pub dbfs_ref: f64,
    /// SPL that sine should read in the band on its frequency.
    pub spl_ref: f64,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        Self {
            dbfs_ref: -25.0,
            spl_ref: 85.0,
        }
    }
}

impl CalibrationParams {
    /// Offset added to `10 log10(band power)`.
    ///
    /// A bin-centered sine of amplitude `A` under a periodic Hann window of
    /// length `N` has `|X(k)| = A N / 4`, which is exactly the normalized
    /// band power of the band centered on that bin.
    pub fn offset_db(&self, window_len: usize) -> f64 {
        let amp = 10f64.powf(self.dbfs_ref / 20.0);
        let peak = amp * window_len as f64 / 4.0;
        self.spl_ref - 10.0 * (peak * peak).log10()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontendConfig {
    pub num_bands: usize,
    pub f_min: f64,
    pub f_max: f64,
    /// Analysis window in samples (2048 at 48 kHz, about 42.7 ms).
    pub window_len: usize,
    /// Column stride in samples; `hop * fps == sample_rate`.
    pub hop: usize,
    pub fps: u32,
    pub sample_rate: u32,
    pub calibration: CalibrationParams,
}

impl Default for FrontendConfig {
    fn default() -> Self {
        Self {
            num_bands: 80,
            f_min: 30.0,
            f_max: 18000.0,
            window_len: 2048,
            hop: 1600,
            fps: 30,
            sample_rate: 48000,
            calibration: CalibrationParams::default(),
        }
    }
}

impl FrontendConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.num_bands == 0 {
            return bad("num_bands must be > 0".into());
        }
        if self.window_len < 4 || self.hop == 0 || self.fps == 0 || self.sample_rate == 0 {
            return bad("window_len, hop, fps and sample_rate must be positive".into());
        }
        if self.hop as u64 * u64::from(self.fps) != u64::from(self.sample_rate) {
            return bad(format!(
                "hop {} x fps {} != sample rate {}",
                self.hop, self.fps, self.sample_rate
            ));
        }
        if !(self.f_min > 0.0 && self.f_min < self.f_max) {
            return bad(format!("need 0 < f_min ({}) < f_max ({})", self.f_min, self.f_max));
        }
        if self.f_max > f64::from(self.sample_rate) / 2.0 {
            return bad(format!("f_max {} above Nyquist", self.f_max));
        }
        if self.f_min < 20.0 || self.f_max > 20000.0 {
            return bad("band range must lie within 20 Hz..20 kHz".into());
        }
        Ok(())
    }

    /// FFT bin spacing in Hz.
    pub fn bin_hz(&self) -> f64 {
        f64::from(self.sample_rate) / self.window_len as f64
    }

    /// Number of spectrogram columns for a signal of `len` samples.
    pub fn num_columns(&self, len: usize) -> usize {
        if len < self.window_len {
            0
        } else {
            (len - self.window_len) / self.hop + 1
        }
    }

    pub fn offset_db(&self) -> f64 {
        self.calibration.offset_db(self.window_len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_frame_aligned() {
        let cfg = FrontendConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.bin_hz(), 23.4375);
        assert_eq!(cfg.num_columns(480000), 299);
        assert_eq!(cfg.num_columns(2048), 1);
        assert_eq!(cfg.num_columns(2047), 0);
    }

    #[test]
    fn offset_is_coherent_gain_closed_form() {
        // 85 + 25 - 20 log10(2048 / 4)
        let want = 110.0 - 20.0 * 512f64.log10();
        assert!((FrontendConfig::default().offset_db() - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_misaligned_hop() {
        let cfg = FrontendConfig {
            hop: 1500,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = FrontendConfig {
            f_max: 30000.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
