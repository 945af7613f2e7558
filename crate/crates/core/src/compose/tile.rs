use super::ComposerConfig;
use crate::error::{Error, Result};
use crate::frontend::ErbSpectrogram;

/// Row-major 2D array.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidConfig(format!(
                "grid {rows}x{cols} given {} cells",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Stacks the `columns_per_frame` columns ending at `t` of every signal.
///
/// Signals are stacked in the given order top to bottom; within a block the
/// highest band is row 0. Columns before the first are zero.
pub fn assemble_tile(
    specs: &[ErbSpectrogram],
    t: usize,
    columns_per_frame: usize,
) -> Result<Grid<f64>> {
    let first = specs
        .first()
        .ok_or_else(|| Error::InvalidConfig("no spectrograms to assemble".into()))?;
    let (nb, ncols) = (first.num_bands(), first.num_columns());
    if specs
        .iter()
        .any(|s| s.num_bands() != nb || s.num_columns() != ncols)
    {
        return Err(Error::InvalidConfig(
            "channel spectrograms differ in shape".into(),
        ));
    }
    if t >= ncols {
        return Err(Error::FrameOutOfRange {
            frame: t,
            columns: ncols,
        });
    }
    let width = columns_per_frame;
    let mut data = Vec::with_capacity(specs.len() * nb * width);
    for spec in specs {
        for row in 0..nb {
            let band = nb - 1 - row;
            for j in 0..width {
                let src = (t + j) as i64 - (width as i64 - 1);
                data.push(if src < 0 {
                    0.0
                } else {
                    spec.level(band, src as usize)
                });
            }
        }
    }
    Grid::new(specs.len() * nb, width, data)
}

/// Tiles `tile` over the image; with replication off the tile sits top-left
/// and the rest is `T::default()` (level 0, i.e. gated).
pub fn replicate<T: Copy + Default>(tile: &Grid<T>, cfg: &ComposerConfig) -> Result<Grid<T>> {
    cfg.check_tile(tile.rows())?;
    if tile.cols() != cfg.columns_per_frame {
        return Err(Error::TileMismatch {
            tile_rows: tile.rows(),
            tile_cols: tile.cols(),
            rows: cfg.image_height,
            cols: cfg.image_width,
        });
    }
    let (h, w) = (cfg.image_height, cfg.image_width);
    let (th, tw) = tile.shape();
    let mut data = Vec::with_capacity(h * w);
    for r in 0..h {
        for c in 0..w {
            data.push(if cfg.replication {
                tile.get(r % th, c % tw)
            } else if r < th && c < tw {
                tile.get(r, c)
            } else {
                T::default()
            });
        }
    }
    Grid::new(h, w, data)
}

/// Linear map of `[db_ceiling - range, db_ceiling]` onto `0..=255`.
pub fn quantize_level(level: f64, cfg: &ComposerConfig) -> u8 {
    if level == 0.0 {
        return 0;
    }
    let floor = cfg.db_ceiling - cfg.dynamic_range_db;
    let idx = (255.0 * (level - floor) / cfg.dynamic_range_db).round();
    idx.clamp(0.0, 255.0) as u8
}

pub fn quantize_db(levels: &Grid<f64>, cfg: &ComposerConfig) -> Grid<u8> {
    levels.map(|l| quantize_level(l, cfg))
}
