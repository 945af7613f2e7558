use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::engine::{run_vmaf, VmafResult};
use super::video::{write_video, VideoInfo};
use crate::compose::compose_stream;
use crate::config::Settings;
use crate::error::{Error, Result, Stage, StageExt};
use crate::frontend::{calibrate_and_gate, ErbSpectrogram, Filterbank, FrontendConfig};
use crate::media::{extract_audio, resample, time_align, AlignmentReport, AudioBuffer, ChannelLayout};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    #[serde(flatten)]
    pub vmaf: VmafResult,
    pub alignment: AlignmentReport,
    pub layout: ChannelLayout,
}

impl ScoreReport {
    pub fn pooled(&self) -> f64 {
        self.vmaf.pooled
    }
}

/// Calibrated spectrograms of every analysed signal (L, R, M or mono).
pub fn analyse(buf: &AudioBuffer, cfg: &FrontendConfig) -> Result<Vec<ErbSpectrogram>> {
    let buf = resample(buf, cfg.sample_rate)?;
    let fb = Filterbank::new(cfg)?;
    buf.analysis_signals()
        .par_iter()
        .map(|s| Ok(calibrate_and_gate(&fb.power_spectrogram(s)?, &cfg.calibration)))
        .collect()
}

/// Full pipeline on media files: extract, resample, align, analyse, render
/// both videos and score them.
pub fn audiovmaf_score(reference: &Path, coded: &Path, settings: &Settings) -> Result<ScoreReport> {
    settings.validate()?;
    let tool = settings.engine.tool();
    let rate = settings.frontend.sample_rate;
    let r = extract_audio(reference, rate, &tool).stage(Stage::Extract)?;
    let c = extract_audio(coded, rate, &tool).stage(Stage::Extract)?;
    score_buffers(&r, &c, settings)
}

/// Pipeline from decoded buffers onward.
pub fn score_buffers(
    reference: &AudioBuffer,
    coded: &AudioBuffer,
    settings: &Settings,
) -> Result<ScoreReport> {
    settings.validate()?;
    let fcfg = &settings.frontend;
    let reference = resample(reference, fcfg.sample_rate).stage(Stage::Extract)?;
    let coded = resample(coded, fcfg.sample_rate).stage(Stage::Extract)?;
    if reference.layout() != coded.layout() {
        return Err(Error::LayoutMismatch {
            reference: reference.num_channels(),
            coded: coded.num_channels(),
        })
        .stage(Stage::Extract);
    }
    let signals = reference.analysis_signals().len();
    settings
        .composer
        .check_tile(fcfg.num_bands * signals)
        .stage(Stage::Compose)?;

    let (aligned, alignment) =
        time_align(&reference, &coded, settings.alignment.max_lag_s).stage(Stage::Align)?;
    let aligned = aligned.with_len(reference.len());

    let ref_specs = analyse(&reference, fcfg).stage(Stage::Frontend)?;
    let deg_specs = analyse(&aligned, fcfg).stage(Stage::Frontend)?;

    let tmp;
    let dir = match &settings.keep_intermediates {
        Some(d) => {
            std::fs::create_dir_all(d).stage(Stage::Video)?;
            d.as_path()
        }
        None => {
            tmp = tempfile::tempdir().stage(Stage::Video)?;
            tmp.path()
        }
    };
    let tool = settings.engine.tool();
    let render = |specs: &[ErbSpectrogram], name: &str| -> Result<VideoInfo> {
        let frames = compose_stream(specs, &settings.composer).stage(Stage::Compose)?;
        write_video(frames, &dir.join(name), fcfg.fps, &tool).stage(Stage::Video)
    };
    let (ref_video, deg_video) = std::thread::scope(|s| {
        let h = s.spawn(|| render(&ref_specs, "reference.mkv"));
        let deg = render(&deg_specs, "coded.mkv");
        (h.join().expect("render thread panicked"), deg)
    });
    let (ref_video, deg_video) = (ref_video?, deg_video?);

    let vmaf = run_vmaf(&ref_video, &deg_video, &settings.engine).stage(Stage::Vmaf)?;
    Ok(ScoreReport {
        vmaf,
        alignment,
        layout: reference.layout(),
    })
}
