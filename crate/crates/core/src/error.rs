use std::fmt;
use std::path::PathBuf;

/// Pipeline stage, used to label errors surfaced by the end-to-end scorer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Extract,
    Align,
    Frontend,
    Compose,
    Video,
    Vmaf,
    Metrics,
    Evaluate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Extract => "extract",
            Stage::Align => "align",
            Stage::Frontend => "frontend",
            Stage::Compose => "compose",
            Stage::Video => "video",
            Stage::Vmaf => "vmaf",
            Stage::Metrics => "metrics",
            Stage::Evaluate => "evaluate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid audio: {0}")]
    InvalidAudio(String),
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("no audio stream in {}: {diagnostic}", path.display())]
    NoAudioStream { path: PathBuf, diagnostic: String },
    #[error("decoder failure on {}: {diagnostic}", path.display())]
    Decode { path: PathBuf, diagnostic: String },
    #[error("already mono")]
    AlreadyMono,
    #[error("silent signal")]
    SilentSignal,
    #[error("sample rate mismatch: reference {reference} Hz, coded {coded} Hz")]
    SampleRateMismatch { reference: u32, coded: u32 },
    #[error("channel layout mismatch: reference has {reference} channels, coded has {coded}")]
    LayoutMismatch { reference: usize, coded: usize },
    #[error("length mismatch: {0} vs {1} samples")]
    LengthMismatch(usize, usize),
    #[error("too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("band collision: band {band} cannot be placed below the Nyquist bin")]
    BandCollision { band: usize },
    #[error("frequency {0} Hz outside 20..=20000 Hz")]
    FrequencyOutOfRange(f64),
    #[error("frame out of range: frame {frame}, spectrogram has {columns} columns")]
    FrameOutOfRange { frame: usize, columns: usize },
    #[error("tile does not tile image: tile {tile_rows}x{tile_cols}, image {rows}x{cols}")]
    TileMismatch {
        tile_rows: usize,
        tile_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("empty stream")]
    EmptyStream,
    #[error("VMAF engine not found at `{0}`")]
    EngineNotFound(String),
    #[error("VMAF model missing: {0}")]
    ModelMissing(String),
    #[error("frame count mismatch: reference {reference}, coded {coded}")]
    FrameCountMismatch { reference: usize, coded: usize },
    #[error("unparsable VMAF report: {0}")]
    ReportParse(String),
    #[error("external tool failed ({command}): {diagnostic}")]
    Tool { command: String, diagnostic: String },
    #[error("degenerate reference")]
    DegenerateReference,
    #[error("zero variance")]
    ZeroVariance,
    #[error("dataset lacks confidence intervals")]
    MissingConfidenceIntervals,
    #[error("malformed dataset row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("excerpt set mismatch: {0}")]
    ExcerptMismatch(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stage label of a wrapped error, if any.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| match e {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        })
    }
}

impl<T> StageExt<T> for std::io::Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(Error::from).stage(stage)
    }
}
