use std::path::{Path, PathBuf};
use std::process::Stdio;

use serde::{Deserialize, Serialize};

use super::video::VideoInfo;
use crate::error::{Error, Result};
use crate::tool::{command_line, diagnostic, MediaTool};

/// Environment variable pointing at a VMAF model JSON file.
pub const MODEL_ENV: &str = "AUDIOVMAF_VMAF_MODEL";

/// Built-in model used when no model file is given.
pub const DEFAULT_MODEL: &str = "vmaf_v0.6.1";

/// Where the engine and its model come from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// ffmpeg executable with the libvmaf filter; `None` uses
    /// `$AUDIOVMAF_FFMPEG` or `ffmpeg` on `PATH`.
    pub ffmpeg: Option<PathBuf>,
    /// VMAF model file; `None` uses `$AUDIOVMAF_VMAF_MODEL` or the built-in
    /// default model.
    pub model_path: Option<PathBuf>,
    /// libvmaf worker threads, 0 for one per available core.
    pub threads: usize,
}

impl EngineConfig {
    pub fn tool(&self) -> MediaTool {
        match &self.ffmpeg {
            Some(p) => MediaTool::new(p),
            None => MediaTool::from_env(),
        }
    }

    pub fn resolved_model_path(&self) -> Option<PathBuf> {
        self.model_path.clone().or_else(|| {
            std::env::var_os(MODEL_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        })
    }

    /// Identifier of the model that will be used.
    pub fn model_id(&self) -> String {
        match self.resolved_model_path() {
            Some(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            None => DEFAULT_MODEL.to_string(),
        }
    }

    fn threads(&self) -> usize {
        if self.threads > 0 {
            self.threads
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}

/// Per-frame and pooled VMAF scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VmafResult {
    /// Arithmetic mean of `per_frame`.
    pub pooled: f64,
    pub per_frame: Vec<f64>,
    pub model_id: String,
    pub engine_version: String,
}

impl VmafResult {
    pub fn from_frames(per_frame: Vec<f64>, model_id: String, engine_version: String) -> Result<Self> {
        if per_frame.is_empty() {
            return Err(Error::ReportParse("report has no frames".into()));
        }
        let pooled = per_frame.iter().sum::<f64>() / per_frame.len() as f64;
        Ok(Self {
            pooled,
            per_frame,
            model_id,
            engine_version,
        })
    }
}

#[derive(Deserialize)]
struct Report {
    version: Option<String>,
    frames: Vec<ReportFrame>,
}

#[derive(Deserialize)]
struct ReportFrame {
    #[serde(rename = "frameNum")]
    frame_num: usize,
    metrics: ReportMetrics,
}

#[derive(Deserialize)]
struct ReportMetrics {
    vmaf: f64,
}

/// Parses a libvmaf JSON log into per-frame scores (ordered by frame number)
/// and the libvmaf version string.
pub fn parse_report(json: &str) -> Result<(Vec<f64>, String)> {
    let mut report: Report =
        serde_json::from_str(json).map_err(|e| Error::ReportParse(e.to_string()))?;
    report.frames.sort_by_key(|f| f.frame_num);
    if report
        .frames
        .iter()
        .enumerate()
        .any(|(i, f)| f.frame_num != i)
    {
        return Err(Error::ReportParse("frame numbers are not contiguous".into()));
    }
    let scores = report.frames.iter().map(|f| f.metrics.vmaf).collect();
    Ok((scores, report.version.unwrap_or_else(|| "unknown".into())))
}

fn escape_filter_value(path: &Path) -> Result<String> {
    let s = path.to_string_lossy();
    if s.contains([':', ',', ';', '[', ']', '\'', '\\', '=']) {
        return Err(Error::InvalidConfig(format!(
            "model path `{s}` contains filtergraph metacharacters"
        )));
    }
    Ok(s.into_owned())
}

/// Scores `deg` against `reference` with the pinned VMAF model.
///
/// Videos are converted to 4:4:4 YUV inside the filter graph; per-frame
/// scores are read from the engine's JSON log and mean-pooled.
pub fn run_vmaf(reference: &VideoInfo, deg: &VideoInfo, engine: &EngineConfig) -> Result<VmafResult> {
    if reference.frames != deg.frames {
        return Err(Error::FrameCountMismatch {
            reference: reference.frames,
            coded: deg.frames,
        });
    }
    if (reference.width, reference.height) != (deg.width, deg.height) {
        return Err(Error::InvalidConfig(format!(
            "video sizes differ: {}x{} vs {}x{}",
            reference.width, reference.height, deg.width, deg.height
        )));
    }
    for v in [reference, deg] {
        if !v.path.exists() {
            return Err(Error::MissingFile(v.path.clone()));
        }
    }
    let model = match engine.resolved_model_path() {
        Some(p) => {
            if !p.is_file() {
                return Err(Error::ModelMissing(p.display().to_string()));
            }
            format!("path={}", escape_filter_value(&p.canonicalize()?)?)
        }
        None => format!("version={DEFAULT_MODEL}"),
    };
    let tool = engine.tool();
    let ffmpeg_version = tool.version()?;

    let work = tempfile::tempdir()?;
    let graph = format!(
        "[0:v]format=yuv444p[dis];[1:v]format=yuv444p[ref];\
         [dis][ref]libvmaf=model={model}:log_fmt=json:log_path=vmaf.json:n_threads={}",
        engine.threads()
    );
    let mut cmd = tool.command();
    cmd.arg("-i")
        .arg(deg.path.canonicalize()?)
        .arg("-i")
        .arg(reference.path.canonicalize()?)
        .arg("-lavfi")
        .arg(&graph)
        .args(["-f", "null", "-"])
        .current_dir(work.path())
        .stdin(Stdio::null());
    let line = command_line(&cmd);
    log::info!("running `{line}`");
    let out = cmd.output().map_err(|e| tool.spawn_error(e))?;
    if !out.status.success() {
        let diag = diagnostic(&out.stderr);
        if diag.contains("libvmaf model") || diag.contains("could not read model") {
            return Err(Error::ModelMissing(diag));
        }
        if diag.contains("No such filter: 'libvmaf'") {
            return Err(Error::EngineNotFound(format!(
                "{} (built without libvmaf)",
                tool.program().display()
            )));
        }
        return Err(Error::Tool {
            command: line,
            diagnostic: diag,
        });
    }
    let json = std::fs::read_to_string(work.path().join("vmaf.json"))
        .map_err(|e| Error::ReportParse(format!("no report written: {e}")))?;
    let (per_frame, libvmaf_version) = parse_report(&json)?;
    if per_frame.len() != reference.frames {
        return Err(Error::ReportParse(format!(
            "report has {} frames, videos have {}",
            per_frame.len(),
            reference.frames
        )));
    }
    VmafResult::from_frames(
        per_frame,
        engine.model_id(),
        format!("{ffmpeg_version}; libvmaf {libvmaf_version}"),
    )
}
