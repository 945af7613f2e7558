//! Spectrogram columns to colormapped 480x640 RGB frames.
//!
//! Frame `t` shows the 32 columns ending at column `t` (zero-filled before
//! the start), one [bands x 32] block per analysed signal stacked top to
//! bottom, high bands at the top. The stacked tile is quantized to 256
//! levels over a 70 dB range, tiled to fill the image, and mapped through a
//! 256-entry colormap.

mod colormap;
mod frame;
mod tile;

pub use colormap::{grayscale_lut, hsv_lut, Rgb};
pub use frame::{compose_frame, compose_frames, compose_stream, ComposedFrame, FrameStream};
pub use tile::{assemble_tile, quantize_db, replicate, Grid};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colormap {
    Hsv,
    /// Monotone ablation: pixel `(q, q, q)` for index `q`.
    Grayscale,
}

impl Colormap {
    pub fn lut(self) -> [Rgb; 256] {
        match self {
            Colormap::Hsv => hsv_lut(),
            Colormap::Grayscale => grayscale_lut(),
        }
    }
}

impl std::str::FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hsv" => Ok(Colormap::Hsv),
            "grayscale" | "gray" | "grey" => Ok(Colormap::Grayscale),
            other => Err(Error::InvalidConfig(format!("unknown colormap `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComposerConfig {
    pub columns_per_frame: usize,
    pub image_height: usize,
    pub image_width: usize,
    pub dynamic_range_db: f64,
    pub replication: bool,
    pub colormap: Colormap,
    /// dB SPL mapped to index 255.
    pub db_ceiling: f64,
}

impl Default for ComposerConfig {
    fn default() -> Self {
        Self {
            columns_per_frame: 32,
            image_height: 480,
            image_width: 640,
            dynamic_range_db: 70.0,
            replication: true,
            colormap: Colormap::Hsv,
            db_ceiling: 110.0,
        }
    }
}

impl ComposerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.columns_per_frame == 0 || self.image_height == 0 || self.image_width == 0 {
            return Err(Error::InvalidConfig("frame geometry must be positive".into()));
        }
        if !(self.dynamic_range_db > 0.0 && self.dynamic_range_db.is_finite()) {
            return Err(Error::InvalidConfig("dynamic_range_db must be > 0".into()));
        }
        if !self.db_ceiling.is_finite() {
            return Err(Error::InvalidConfig("db_ceiling must be finite".into()));
        }
        Ok(())
    }

    /// Checks that a tile of `tile_rows` rows tiles the image exactly.
    pub fn check_tile(&self, tile_rows: usize) -> Result<()> {
        self.validate()?;
        let tile_cols = self.columns_per_frame;
        if tile_rows == 0
            || !self.image_height.is_multiple_of(tile_rows)
            || !self.image_width.is_multiple_of(tile_cols)
        {
            return Err(Error::TileMismatch {
                tile_rows,
                tile_cols,
                rows: self.image_height,
                cols: self.image_width,
            });
        }
        Ok(())
    }
}
