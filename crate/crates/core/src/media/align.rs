use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::AudioBuffer;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_LAG_S: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    /// Positive when the coded signal lags the reference.
    pub lag_samples: i64,
    pub peak_correlation: f64,
}

/// Normalized cross-correlation `r(lag) = Σ a[n] b[n+lag] / sqrt(Ea Eb)` for
/// `lag` in `-max_lag..=max_lag`; element `i` holds lag `i - max_lag`.
pub fn cross_correlation(a: &[f64], b: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let ea: f64 = a.iter().map(|x| x * x).sum();
    let eb: f64 = b.iter().map(|x| x * x).sum();
    if ea == 0.0 || eb == 0.0 {
        return Err(Error::SilentSignal);
    }
    let size = (a.len() + b.len()).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);

    let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fa.resize(size, Complex::default());
    let mut fb: Vec<Complex<f64>> = b.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fb.resize(size, Complex::default());
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    let mut prod: Vec<Complex<f64>> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    inv.process(&mut prod);

    let norm = 1.0 / (size as f64 * (ea * eb).sqrt());
    let lag_value = |lag: i64| -> f64 {
        if lag >= b.len() as i64 || -lag >= a.len() as i64 {
            return 0.0;
        }
        let idx = if lag >= 0 {
            lag as usize
        } else {
            size - lag.unsigned_abs() as usize
        };
        (prod[idx].re * norm).clamp(-1.0, 1.0)
    };
    let max_lag = max_lag as i64;
    Ok((-max_lag..=max_lag).map(lag_value).collect())
}

/// Aligns `deg` to `reference` by the integer lag maximizing the normalized
/// cross-correlation of their mid (or mono) downmixes.
///
/// The returned buffer is `deg` shifted by `-lag`, zero-padded at the
/// vacated edge, with the same length as `deg`.
pub fn time_align(
    reference: &AudioBuffer,
    deg: &AudioBuffer,
    max_lag_s: f64,
) -> Result<(AudioBuffer, AlignmentReport)> {
    if reference.sample_rate() != deg.sample_rate() {
        return Err(Error::SampleRateMismatch {
            reference: reference.sample_rate(),
            coded: deg.sample_rate(),
        });
    }
    if !(max_lag_s >= 0.0 && max_lag_s.is_finite()) {
        return Err(Error::InvalidConfig(format!("max lag {max_lag_s} s")));
    }
    let max_lag = (max_lag_s * f64::from(reference.sample_rate())).round() as usize;
    let xc = cross_correlation(&reference.mid_or_mono(), &deg.mid_or_mono(), max_lag)?;

    // Search outward from zero so ties resolve to the smallest shift.
    let mut best_lag = 0i64;
    let mut best = xc[max_lag];
    for k in 1..=max_lag {
        for lag in [k as i64, -(k as i64)] {
            let r = xc[(lag + max_lag as i64) as usize];
            if r > best {
                best = r;
                best_lag = lag;
            }
        }
    }

    let shifted = deg
        .channels()
        .iter()
        .map(|c| shift(c, best_lag))
        .collect();
    Ok((
        AudioBuffer::new(shifted, deg.sample_rate())?,
        AlignmentReport {
            lag_samples: best_lag,
            peak_correlation: best,
        },
    ))
}

/// `out[n] = x[n + lag]`, zero where out of range.
fn shift(x: &[f64], lag: i64) -> Vec<f64> {
    let n = x.len() as i64;
    (0..n)
        .map(|i| {
            let j = i + lag;
            if (0..n).contains(&j) {
                x[j as usize]
            } else {
                0.0
            }
        })
        .collect()
}
