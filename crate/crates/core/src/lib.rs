//! Coded-audio quality via perceptual spectrogram videos scored by VMAF.
//!
//! Reference and coded audio are rendered into ERB-band, gammatone-weighted,
//! calibrated spectrogram videos; an external VMAF engine compares the two
//! videos and its pooled score (0-100) is the audio quality prediction.
//! The crate also carries 1D waveform baselines (SSIM, MS-SSIM, VIFP,
//! GMSM/GMSD) and the correlation statistics used to evaluate predictors
//! against listening-test scores.

pub mod compose;
pub mod config;
pub mod error;
pub mod eval;
pub mod frontend;
pub mod media;
pub mod metrics1d;
pub mod synth;
pub mod tool;
pub mod vmaf;

pub use compose::{ComposedFrame, ComposerConfig, Colormap};
pub use config::{Settings, PAPER_DEFAULT};
pub use error::{Error, Result, Stage};
pub use eval::{AnchorFilter, CorrelationReport, EvaluationRecord, LadderReport, LadderVerdict};
pub use frontend::{ErbSpectrogram, FrontendConfig};
pub use media::{AlignmentReport, AudioBuffer, ChannelLayout};
pub use metrics1d::{Metric1dConfig, Metric1dReport};
pub use tool::MediaTool;
pub use vmaf::{audiovmaf_score, score_buffers, EngineConfig, ScoreReport, VmafResult};
