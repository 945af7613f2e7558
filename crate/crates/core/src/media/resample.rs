use rubato::audioadapter_buffers::direct::SequentialSliceOfVecs;
use rubato::{Fft, FixedSync, Resampler};

use super::AudioBuffer;
use crate::error::{Error, Result};

const CHUNK: usize = 1024;

/// Band-limited resampling to `target_rate`.
///
/// Output length is `ceil(len * target / source)`; the resampler's startup
/// delay is trimmed so the output stays time-aligned with the input.
pub fn resample(buf: &AudioBuffer, target_rate: u32) -> Result<AudioBuffer> {
    if target_rate == 0 {
        return Err(Error::InvalidConfig("target sample rate must be > 0".into()));
    }
    if buf.sample_rate() == target_rate {
        return Ok(buf.clone());
    }
    let nch = buf.num_channels();
    let len = buf.len();
    if len == 0 {
        return AudioBuffer::new(vec![Vec::new(); nch], target_rate);
    }
    let mut resampler = Fft::<f64>::new(
        buf.sample_rate() as usize,
        target_rate as usize,
        CHUNK,
        nch,
        FixedSync::Input,
    )
    .map_err(|e| Error::InvalidConfig(format!("resampler: {e}")))?;
    let input = SequentialSliceOfVecs::new(buf.channels(), nch, len)
        .map_err(|e| Error::InvalidAudio(format!("resampler input: {e}")))?;
    let out = resampler
        .process_all(&input, len, None)
        .map_err(|e| Error::InvalidAudio(format!("resampler: {e}")))?;
    let data = out.take_data();
    let frames = data.len() / nch;
    let mut channels = vec![Vec::with_capacity(frames); nch];
    for frame in data.chunks_exact(nch) {
        for (c, &s) in channels.iter_mut().zip(frame) {
            c.push(s);
        }
    }
    AudioBuffer::new_clamped(channels, target_rate)
}
