//! Waveform-domain baselines: image-quality indices evaluated over 1D windows.
//!
//! SSIM, MS-SSIM, VIFP and the gradient-magnitude pair GMSM/GMSD use the
//! usual 2D constants carried over to signals in `[-1, 1]` (dynamic range 2).
//! Stereo material is reduced to its mid signal before scoring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::AudioBuffer;

const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
const VIF_EPS: f64 = 1e-10;
/// Pixel-domain noise variance of 2 on an 8-bit scale, rescaled to a
/// dynamic range of 2.
pub const VIF_NOISE_VAR: f64 = 2.0 * (2.0 / 255.0) * (2.0 / 255.0);
/// Lower end of the rescaled GMSD range.
const GMSD_FLOOR: f64 = 0.687;
/// Largest population standard deviation of values confined to `[0, 1]`.
const GMS_MAX_STD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Metric1dConfig {
    pub window_len: usize,
    pub sigma: f64,
    pub dynamic_range: f64,
    pub ms_ssim_scales: usize,
    pub vif_scales: usize,
    pub vif_noise_var: f64,
    pub gms_c: f64,
}

impl Default for Metric1dConfig {
    fn default() -> Self {
        Self {
            window_len: 11,
            sigma: 1.5,
            dynamic_range: 2.0,
            ms_ssim_scales: 5,
            vif_scales: 4,
            vif_noise_var: VIF_NOISE_VAR,
            gms_c: 0.0026,
        }
    }
}

impl Metric1dConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.window_len == 0 || self.sigma <= 0.0 {
            return bad("metric window must have positive length and sigma");
        }
        if !(1..=MS_SSIM_WEIGHTS.len()).contains(&self.ms_ssim_scales) {
            return bad("ms_ssim_scales must be within 1..=5");
        }
        if self.vif_scales == 0 || self.vif_scales > 8 {
            return bad("vif_scales must be within 1..=8");
        }
        if self.dynamic_range <= 0.0 || self.vif_noise_var <= 0.0 || self.gms_c <= 0.0 {
            return bad("dynamic_range, vif_noise_var and gms_c must be > 0");
        }
        Ok(())
    }

    pub fn c1(&self) -> f64 {
        (0.01 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (0.03 * self.dynamic_range).powi(2)
    }
}

/// Normalized Gaussian window centred on `(len - 1) / 2`.
pub fn gaussian_window(len: usize, sigma: f64) -> Vec<f64> {
    let mid = (len as f64 - 1.0) / 2.0;
    let w: Vec<f64> = (0..len)
        .map(|i| (-((i as f64 - mid).powi(2)) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Weighted local statistics at every full window position.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMoments {
    pub mu_x: Vec<f64>,
    pub mu_y: Vec<f64>,
    pub var_x: Vec<f64>,
    pub var_y: Vec<f64>,
    pub cov: Vec<f64>,
}

impl LocalMoments {
    pub fn len(&self) -> usize {
        self.mu_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu_x.is_empty()
    }
}

/// `mu = Σ w x`, `var = Σ w x² - mu²`, `cov = Σ w x y - mu_x mu_y` over
/// `x.len() - window.len() + 1` positions.
pub fn local_moments(x: &[f64], y: &[f64], window: &[f64]) -> LocalMoments {
    let positions = (x.len().min(y.len()) + 1).saturating_sub(window.len());
    let mut m = LocalMoments {
        mu_x: Vec::with_capacity(positions),
        mu_y: Vec::with_capacity(positions),
        var_x: Vec::with_capacity(positions),
        var_y: Vec::with_capacity(positions),
        cov: Vec::with_capacity(positions),
    };
    for p in 0..positions {
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (k, &w) in window.iter().enumerate() {
            let (a, b) = (x[p + k], y[p + k]);
            sx += w * a;
            sy += w * b;
            sxx += w * a * a;
            syy += w * b * b;
            sxy += w * a * b;
        }
        m.mu_x.push(sx);
        m.mu_y.push(sy);
        m.var_x.push(sxx - sx * sx);
        m.var_y.push(syy - sy * sy);
        m.cov.push(sxy - sx * sy);
    }
    m
}

fn check_pair(reference: &[f64], deg: &[f64], needed: usize) -> Result<()> {
    if reference.len() != deg.len() {
        return Err(Error::LengthMismatch(reference.len(), deg.len()));
    }
    if reference.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: reference.len(),
        });
    }
    Ok(())
}

/// Mean of the full SSIM map and of its contrast-structure term.
fn ssim_terms(x: &[f64], y: &[f64], window: &[f64], cfg: &Metric1dConfig) -> (f64, f64) {
    let (c1, c2) = (cfg.c1(), cfg.c2());
    let m = local_moments(x, y, window);
    let n = m.len() as f64;
    let (mut ssim, mut cs) = (0.0, 0.0);
    for i in 0..m.len() {
        let l = (2.0 * m.mu_x[i] * m.mu_y[i] + c1)
            / (m.mu_x[i] * m.mu_x[i] + m.mu_y[i] * m.mu_y[i] + c1);
        let c = (2.0 * m.cov[i] + c2) / (m.var_x[i] + m.var_y[i] + c2);
        ssim += l * c;
        cs += c;
    }
    (ssim / n, cs / n)
}

pub fn ssim_1d(reference: &[f64], deg: &[f64], cfg: &Metric1dConfig) -> Result<f64> {
    check_pair(reference, deg, cfg.window_len)?;
    let w = gaussian_window(cfg.window_len, cfg.sigma);
    Ok(ssim_terms(reference, deg, &w, cfg).0)
}

/// Length-2 mean filter followed by decimation by 2.
fn halve(x: &[f64]) -> Vec<f64> {
    x.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub fn ms_ssim_1d(reference: &[f64], deg: &[f64], cfg: &Metric1dConfig) -> Result<f64> {
    let scales = cfg.ms_ssim_scales;
    check_pair(reference, deg, cfg.window_len << (scales - 1))?;
    let weights = &MS_SSIM_WEIGHTS[MS_SSIM_WEIGHTS.len() - scales..];
    let wsum: f64 = weights.iter().sum();
    let w = gaussian_window(cfg.window_len, cfg.sigma);
    let (mut x, mut y) = (reference.to_vec(), deg.to_vec());
    let mut score = 1.0;
    for (j, &weight) in weights.iter().enumerate() {
        let (ssim, cs) = ssim_terms(&x, &y, &w, cfg);
        let term = if j + 1 == scales { ssim } else { cs };
        score *= term.max(0.0).powf(weight / wsum);
        x = halve(&x);
        y = halve(&y);
    }
    Ok(score)
}

fn filter_valid(x: &[f64], window: &[f64]) -> Vec<f64> {
    let positions = (x.len() + 1).saturating_sub(window.len());
    (0..positions)
        .map(|p| window.iter().zip(&x[p..]).map(|(w, v)| w * v).sum())
        .collect()
}

pub fn vifp_1d(reference: &[f64], deg: &[f64], cfg: &Metric1dConfig) -> Result<f64> {
    check_pair(reference, deg, 1)?;
    let sigma_n = cfg.vif_noise_var;
    let (mut x, mut y) = (reference.to_vec(), deg.to_vec());
    let (mut num, mut den) = (0.0, 0.0);
    for scale in 1..=cfg.vif_scales {
        let n = (1usize << (cfg.vif_scales - scale + 1)) + 1;
        let w = gaussian_window(n, n as f64 / 5.0);
        if scale > 1 {
            x = filter_valid(&x, &w).into_iter().step_by(2).collect();
            y = filter_valid(&y, &w).into_iter().step_by(2).collect();
        }
        if x.len() < n {
            return Err(Error::TooShort {
                needed: n,
                got: x.len(),
            });
        }
        let m = local_moments(&x, &y, &w);
        for i in 0..m.len() {
            let var_x = m.var_x[i].max(0.0);
            let var_y = m.var_y[i].max(0.0);
            let cov = m.cov[i];
            let (g, sv) = if var_x < VIF_EPS {
                (0.0, var_y)
            } else if var_y < VIF_EPS {
                (0.0, 0.0)
            } else {
                let g = cov / var_x;
                if g < 0.0 {
                    (0.0, var_y)
                } else {
                    (g, var_y - g * cov)
                }
            };
            let var_x = if var_x < VIF_EPS { 0.0 } else { var_x };
            let sv = sv.max(0.0);
            num += (1.0 + g * g * var_x / (sv + sigma_n)).log2();
            den += (1.0 + var_x / sigma_n).log2();
        }
    }
    if den <= 0.0 {
        return Err(Error::DegenerateReference);
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmsScores {
    pub gmsm: f64,
    pub gmsd_raw: f64,
    /// `1 - gmsd_raw (1 - 0.687) / 0.5`, mapping the raw deviation onto
    /// `[0.687, 1]`.
    pub gmsd_paper_scaled: f64,
}

pub fn gms_1d(reference: &[f64], deg: &[f64], cfg: &Metric1dConfig) -> Result<GmsScores> {
    check_pair(reference, deg, 3)?;
    let grad = |s: &[f64]| -> Vec<f64> { s.windows(3).map(|w| 0.5 * (w[2] - w[0])).collect() };
    let (gr, gd) = (grad(reference), grad(deg));
    let c = cfg.gms_c;
    let gms: Vec<f64> = gr
        .iter()
        .zip(&gd)
        .map(|(&a, &b)| (2.0 * a.abs() * b.abs() + c) / (a * a + b * b + c))
        .collect();
    let n = gms.len() as f64;
    let mean = gms.iter().sum::<f64>() / n;
    let std = (gms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    Ok(GmsScores {
        gmsm: mean,
        gmsd_raw: std,
        gmsd_paper_scaled: 1.0 - std * (1.0 - GMSD_FLOOR) / GMS_MAX_STD,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric1dReport {
    /// Which signal was scored: `mono` or `mid`.
    pub signal: String,
    pub ssim: f64,
    pub ms_ssim: f64,
    pub vifp: f64,
    pub gmsm: f64,
    pub gmsd_raw: f64,
    pub gmsd_paper_scaled: f64,
}

/// All five baselines on a pair of equal-length signals.
pub fn metrics_1d(reference: &[f64], deg: &[f64], cfg: &Metric1dConfig) -> Result<Metric1dReport> {
    cfg.validate()?;
    let gms = gms_1d(reference, deg, cfg)?;
    Ok(Metric1dReport {
        signal: "mono".into(),
        ssim: ssim_1d(reference, deg, cfg)?,
        ms_ssim: ms_ssim_1d(reference, deg, cfg)?,
        vifp: vifp_1d(reference, deg, cfg)?,
        gmsm: gms.gmsm,
        gmsd_raw: gms.gmsd_raw,
        gmsd_paper_scaled: gms.gmsd_paper_scaled,
    })
}

/// Scores buffers on their mid (stereo) or only (mono) channel.
pub fn metrics_for_buffers(
    reference: &AudioBuffer,
    deg: &AudioBuffer,
    cfg: &Metric1dConfig,
) -> Result<Metric1dReport> {
    if reference.layout() != deg.layout() {
        return Err(Error::LayoutMismatch {
            reference: reference.num_channels(),
            coded: deg.num_channels(),
        });
    }
    let mut report = metrics_1d(&reference.mid_or_mono(), &deg.mid_or_mono(), cfg)?;
    if reference.num_channels() == 2 {
        report.signal = "mid".into();
    }
    Ok(report)
}
