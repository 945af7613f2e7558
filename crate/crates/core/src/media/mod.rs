//! Audio ingestion: decode, resample, downmix and time-align reference and
//! coded signals so downstream spectrograms are sample-synchronous.

mod align;
mod extract;
mod resample;
mod wav;

pub use align::{cross_correlation, time_align, AlignmentReport, DEFAULT_MAX_LAG_S};
pub use extract::extract_audio;
pub use resample::resample;
pub use wav::{read_wav, write_wav};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelLayout {
    Mono,
    Stereo,
}

impl ChannelLayout {
    pub fn channels(self) -> usize {
        match self {
            ChannelLayout::Mono => 1,
            ChannelLayout::Stereo => 2,
        }
    }
}

/// Multichannel PCM with full scale at 1.0.
///
/// All channels share one length and every sample lies in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    channels: Vec<Vec<f64>>,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(channels: Vec<Vec<f64>>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidAudio("sample rate must be > 0".into()));
        }
        if !(1..=2).contains(&channels.len()) {
            return Err(Error::InvalidAudio(format!(
                "unsupported channel count {} (mono or stereo only)",
                channels.len()
            )));
        }
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(Error::InvalidAudio("channels differ in length".into()));
        }
        if let Some(x) = channels
            .iter()
            .flatten()
            .find(|x| !x.is_finite() || x.abs() > 1.0)
        {
            return Err(Error::InvalidAudio(format!(
                "sample {x} outside [-1, 1]"
            )));
        }
        Ok(Self {
            channels,
            sample_rate,
        })
    }

    /// Like [`AudioBuffer::new`], but clamps samples into `[-1, 1]` first.
    pub fn new_clamped(mut channels: Vec<Vec<f64>>, sample_rate: u32) -> Result<Self> {
        for x in channels.iter_mut().flatten() {
            *x = if x.is_nan() { 0.0 } else { x.clamp(-1.0, 1.0) };
        }
        Self::new(channels, sample_rate)
    }

    pub fn mono(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        Self::new(vec![samples], sample_rate)
    }

    pub fn stereo(left: Vec<f64>, right: Vec<f64>, sample_rate: u32) -> Result<Self> {
        Self::new(vec![left, right], sample_rate)
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn layout(&self) -> ChannelLayout {
        if self.channels.len() == 1 {
            ChannelLayout::Mono
        } else {
            ChannelLayout::Stereo
        }
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / f64::from(self.sample_rate)
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        &self.channels[idx]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    /// The mid signal for stereo, the single channel for mono.
    pub fn mid_or_mono(&self) -> Vec<f64> {
        match self.layout() {
            ChannelLayout::Mono => self.channels[0].clone(),
            ChannelLayout::Stereo => mid(&self.channels[0], &self.channels[1]),
        }
    }

    /// Signals analysed by the frontend, top to bottom in the image:
    /// L, R, M for stereo and the single channel for mono.
    pub fn analysis_signals(&self) -> Vec<Vec<f64>> {
        match self.layout() {
            ChannelLayout::Mono => vec![self.channels[0].clone()],
            ChannelLayout::Stereo => vec![
                self.channels[0].clone(),
                self.channels[1].clone(),
                mid(&self.channels[0], &self.channels[1]),
            ],
        }
    }

    /// Truncates or zero-pads every channel at the end to `len` samples.
    pub fn with_len(mut self, len: usize) -> Self {
        for c in &mut self.channels {
            c.resize(len, 0.0);
        }
        self
    }

    /// Swaps left and right; mono buffers are returned unchanged.
    pub fn swap_channels(mut self) -> Self {
        self.channels.reverse();
        self
    }
}

fn mid(left: &[f64], right: &[f64]) -> Vec<f64> {
    left.iter().zip(right).map(|(l, r)| 0.5 * (l + r)).collect()
}

/// `M[n] = 0.5 (L[n] + R[n])`.
pub fn downmix_mid(buf: &AudioBuffer) -> Result<AudioBuffer> {
    match buf.layout() {
        ChannelLayout::Mono => Err(Error::AlreadyMono),
        ChannelLayout::Stereo => AudioBuffer::mono(
            mid(buf.channel(0), buf.channel(1)),
            buf.sample_rate(),
        ),
    }
}
