//! Deterministic test signals: a music-like excerpt and the degradations
//! used by the fixtures (white noise at a given SNR, brickwall lowpass).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::media::AudioBuffer;

/// Harmonic notes with decaying envelopes, a bass line and noise bursts,
/// panned across two channels. Peak-normalized to 0.5.
pub fn music_excerpt(seconds: f64, sample_rate: u32, stereo: bool, seed: u64) -> AudioBuffer {
    let fs = sample_rate as f64;
    let len = (seconds * fs).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left = vec![0.0; len];
    let mut right = vec![0.0; len];
    let add = |start: usize, sig: &[f64], pan: f64, left: &mut [f64], right: &mut [f64]| {
        let (gl, gr) = ((1.0 - pan) * 0.5 + 0.25, pan * 0.5 + 0.25);
        for (i, v) in sig.iter().enumerate() {
            if start + i >= len {
                break;
            }
            left[start + i] += gl * v;
            right[start + i] += gr * v;
        }
    };

    let beat = (0.25 * fs) as usize;
    let beats = len / beat + 1;
    for b in 0..beats {
        let start = b * beat;
        // melody note
        let midi = 60 + [0, 2, 4, 5, 7, 9, 11, 12][rng.gen_range(0..8)] + 12 * rng.gen_range(0..2);
        let f0 = 440.0 * 2f64.powf((midi as f64 - 69.0) / 12.0);
        let dur = beat * rng.gen_range(1..4);
        let harmonics = rng.gen_range(6..16);
        let note: Vec<f64> = (0..dur)
            .map(|n| {
                let t = n as f64 / fs;
                let env = (1.0 - (-t * 200.0).exp()) * (-t * 3.0).exp();
                let tone: f64 = (1..=harmonics)
                    .filter(|&h| f0 * h as f64 <= 0.45 * fs)
                    .map(|h| (2.0 * PI * f0 * h as f64 * t).sin() / h as f64)
                    .sum();
                0.3 * env * tone
            })
            .collect();
        let pan = rng.gen_range(0.1..0.9);
        add(start, &note, pan, &mut left, &mut right);

        // bass every other beat
        if b % 2 == 0 {
            let fb = 55.0 * 2f64.powf(rng.gen_range(0..12) as f64 / 12.0);
            let bass: Vec<f64> = (0..2 * beat)
                .map(|n| {
                    let t = n as f64 / fs;
                    0.4 * (-t * 2.0).exp() * ((2.0 * PI * fb * t).sin() + 0.3 * (4.0 * PI * fb * t).sin())
                })
                .collect();
            add(start, &bass, 0.5, &mut left, &mut right);
        }

        // hi-hat style noise burst
        if rng.gen_bool(0.6) {
            let hat: Vec<f64> = (0..beat / 2)
                .map(|n| 0.15 * (-(n as f64) / fs * 40.0).exp() * rng.gen_range(-1.0..1.0))
                .collect();
            let pan = rng.gen_range(0.0..1.0);
            add(start + beat / 2, &hat, pan, &mut left, &mut right);
        }
    }

    let peak = left
        .iter()
        .chain(&right)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let g = 0.5 / peak;
    left.iter_mut().chain(right.iter_mut()).for_each(|v| *v *= g);
    let channels = if stereo {
        vec![left, right]
    } else {
        vec![left.iter().zip(&right).map(|(l, r)| 0.5 * (l + r)).collect()]
    };
    AudioBuffer::new(channels, sample_rate).expect("synthesised excerpt is within range")
}

/// Adds white Gaussian noise at `snr_db` relative to each channel's power.
pub fn add_white_noise(buf: &AudioBuffer, snr_db: f64, seed: u64) -> Result<AudioBuffer> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut channels = Vec::new();
    for ch in buf.channels() {
        let p = ch.iter().map(|v| v * v).sum::<f64>() / ch.len().max(1) as f64;
        if p == 0.0 {
            return Err(Error::SilentSignal);
        }
        let n = Normal::new(0.0, (p / 10f64.powf(snr_db / 10.0)).sqrt())
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        channels.push(ch.iter().map(|v| v + n.sample(&mut rng)).collect());
    }
    AudioBuffer::new_clamped(channels, buf.sample_rate())
}

/// Zeroes every spectral component above `cutoff_hz` (whole-signal FFT).
pub fn brickwall_lowpass(buf: &AudioBuffer, cutoff_hz: f64) -> Result<AudioBuffer> {
    let fs = buf.sample_rate() as f64;
    if !(cutoff_hz > 0.0 && cutoff_hz < fs / 2.0) {
        return Err(Error::InvalidConfig(format!("cutoff {cutoff_hz} Hz outside (0, {})", fs / 2.0)));
    }
    let n = buf.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let channels = buf
        .channels()
        .iter()
        .map(|ch| {
            let mut x: Vec<Complex<f64>> = ch.iter().map(|&v| Complex::new(v, 0.0)).collect();
            fwd.process(&mut x);
            for (k, v) in x.iter_mut().enumerate() {
                let f = k.min(n - k) as f64 * fs / n as f64;
                if f > cutoff_hz {
                    *v = Complex::new(0.0, 0.0);
                }
            }
            inv.process(&mut x);
            x.iter().map(|c| c.re / n as f64).collect()
        })
        .collect();
    AudioBuffer::new_clamped(channels, buf.sample_rate())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excerpt_is_deterministic_and_bounded() {
        let a = music_excerpt(1.0, 48000, true, 3);
        let b = music_excerpt(1.0, 48000, true, 3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 48000);
        assert_eq!(a.num_channels(), 2);
        assert_ne!(a.channel(0), a.channel(1));
        let peak = a.channels().iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((peak - 0.5).abs() < 1e-12);
        assert_ne!(music_excerpt(1.0, 48000, true, 4), a);
        assert_eq!(music_excerpt(1.0, 48000, false, 3).num_channels(), 1);
    }

    #[test]
    fn noise_hits_requested_snr() {
        let x = music_excerpt(2.0, 48000, false, 1);
        let y = add_white_noise(&x, 20.0, 9).unwrap();
        let (s, e): (f64, f64) = x
            .channel(0)
            .iter()
            .zip(y.channel(0))
            .fold((0.0, 0.0), |(s, e), (a, b)| (s + a * a, e + (b - a).powi(2)));
        assert!((10.0 * (s / e).log10() - 20.0).abs() < 0.2);
    }

    #[test]
    fn lowpass_removes_high_tone() {
        let fs = 48000.0;
        let sig: Vec<f64> = (0..4800)
            .map(|n| {
                let t = n as f64 / fs;
                0.3 * (2.0 * PI * 1000.0 * t).sin() + 0.3 * (2.0 * PI * 10000.0 * t).sin()
            })
            .collect();
        let buf = AudioBuffer::mono(sig, 48000).unwrap();
        let lp = brickwall_lowpass(&buf, 3500.0).unwrap();
        // both tones fall on exact bins, so the 1 kHz tone survives untouched
        for (n, v) in lp.channel(0).iter().enumerate() {
            let want = 0.3 * (2.0 * PI * 1000.0 * n as f64 / fs).sin();
            assert!((v - want).abs() < 1e-9);
        }
    }
}
