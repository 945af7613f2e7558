//! Spectrogram videos in, VMAF scores out.
//!
//! Frames are written losslessly (FFV1, RGB) and compared by the libvmaf
//! filter of an external ffmpeg build with a pinned model. The pooled score
//! is the mean of the per-frame scores.

mod engine;
mod pipeline;
mod video;

pub use engine::{parse_report, run_vmaf, EngineConfig, VmafResult, DEFAULT_MODEL, MODEL_ENV};
pub use pipeline::{analyse, audiovmaf_score, score_buffers, ScoreReport};
pub use video::{decode_video, probe_video, write_video, VideoInfo, VideoProbe};
