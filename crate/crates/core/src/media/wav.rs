use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::AudioBuffer;
use crate::error::{Error, Result};

fn decode_err(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::Decode {
            path: path.to_path_buf(),
            diagnostic: other.to_string(),
        },
    }
}

/// Reads a PCM (8/16/24/32-bit integer) or 32-bit float WAV file.
///
/// Integer samples are scaled by `2^(bits-1)`; float samples are clamped to
/// `[-1, 1]`.
pub fn read_wav(path: &Path) -> Result<AudioBuffer> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = WavReader::open(path).map_err(|e| decode_err(path, e))?;
    let spec = reader.spec();
    let nch = usize::from(spec.channels);
    if nch == 0 {
        return Err(Error::NoAudioStream {
            path: path.to_path_buf(),
            diagnostic: "WAV header declares zero channels".into(),
        });
    }
    let interleaved: Vec<f64> = match spec.sample_format {
        SampleFormat::Float => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<_, _>>()
            .map_err(|e| decode_err(path, e))?,
        SampleFormat::Int => {
            let scale = f64::from(1u32 << (spec.bits_per_sample - 1));
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| f64::from(v) / scale))
                .collect::<Result<_, _>>()
                .map_err(|e| decode_err(path, e))?
        }
    };
    let frames = interleaved.len() / nch;
    let mut channels = vec![Vec::with_capacity(frames); nch];
    for frame in interleaved.chunks_exact(nch) {
        for (c, &s) in channels.iter_mut().zip(frame) {
            c.push(s);
        }
    }
    AudioBuffer::new_clamped(channels, spec.sample_rate)
}

/// Writes a 32-bit float WAV.
pub fn write_wav(path: &Path, buf: &AudioBuffer) -> Result<()> {
    let spec = WavSpec {
        channels: buf.num_channels() as u16,
        sample_rate: buf.sample_rate(),
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    let mut w = WavWriter::create(path, spec).map_err(|e| decode_err(path, e))?;
    for i in 0..buf.len() {
        for c in buf.channels() {
            w.write_sample(c[i] as f32).map_err(|e| decode_err(path, e))?;
        }
    }
    w.finalize().map_err(|e| decode_err(path, e))
}
