//! One configuration layer for every tunable, with the reference settings as
//! the `paper-default` preset.
//!
//! Config files are TOML; every section and key is optional and falls back
//! to the preset:
//!
//! ```toml
//! [frontend]
//! num_bands = 80
//! f_min = 30.0
//! f_max = 18000.0
//! window_len = 2048
//! hop = 1600
//! fps = 30
//! sample_rate = 48000
//! calibration = { dbfs_ref = -25.0, spl_ref = 85.0 }
//!
//! [composer]
//! columns_per_frame = 32
//! image_height = 480
//! image_width = 640
//! dynamic_range_db = 70.0
//! replication = true
//! colormap = "hsv"        # or "grayscale"
//! db_ceiling = 110.0
//!
//! [alignment]
//! max_lag_s = 0.25
//!
//! [engine]
//! ffmpeg = "/usr/bin/ffmpeg"
//! model_path = "/path/to/vmaf_v0.6.1.json"
//! threads = 0
//!
//! [metrics1d]
//! window_len = 11
//! sigma = 1.5
//! dynamic_range = 2.0
//! ms_ssim_scales = 5
//! vif_scales = 4
//! vif_noise_var = 1.2302960399846212e-4   # 2.0 on an 8-bit scale
//! gms_c = 0.0026
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::compose::ComposerConfig;
use crate::error::{Error, Result};
use crate::frontend::FrontendConfig;
use crate::media::DEFAULT_MAX_LAG_S;
use crate::metrics1d::Metric1dConfig;
use crate::vmaf::EngineConfig;

pub const PAPER_DEFAULT: &str = "paper-default";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlignmentConfig {
    pub max_lag_s: f64,
}

impl Default for AlignmentConfig {
    fn default() -> Self {
        Self {
            max_lag_s: DEFAULT_MAX_LAG_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub frontend: FrontendConfig,
    pub composer: ComposerConfig,
    pub alignment: AlignmentConfig,
    pub engine: EngineConfig,
    pub metrics1d: Metric1dConfig,
    /// Directory in which to keep the spectrogram videos; temporary if unset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keep_intermediates: Option<PathBuf>,
}

impl Settings {
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            PAPER_DEFAULT => Ok(Self::default()),
            other => Err(Error::InvalidConfig(format!("unknown preset `{other}`"))),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.frontend.validate()?;
        self.composer.validate()?;
        // a mono tile must fit; stereo is checked once the layout is known
        self.composer.check_tile(self.frontend.num_bands)?;
        if !(self.alignment.max_lag_s >= 0.0 && self.alignment.max_lag_s.is_finite()) {
            return Err(Error::InvalidConfig("max_lag_s must be >= 0".into()));
        }
        self.metrics1d.validate()
    }
}
