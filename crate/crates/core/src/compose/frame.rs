use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;

use super::colormap::Rgb;
use super::tile::{assemble_tile, quantize_db, replicate};
use super::ComposerConfig;
use crate::error::{Error, Result};
use crate::frontend::ErbSpectrogram;

/// One RGB video frame, 8 bits per channel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedFrame {
    pub frame_index: usize,
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl ComposedFrame {
    pub fn pixel(&self, row: usize, col: usize) -> Rgb {
        let i = 3 * (row * self.width + col);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let file = BufWriter::new(File::create(path)?);
        let mut enc = png::Encoder::new(file, self.width as u32, self.height as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let png_err = |e: png::EncodingError| Error::Io(std::io::Error::other(e));
        let mut w = enc.write_header().map_err(png_err)?;
        w.write_image_data(&self.pixels).map_err(png_err)?;
        w.finish().map_err(png_err)
    }
}

fn check(specs: &[ErbSpectrogram], cfg: &ComposerConfig) -> Result<usize> {
    let first = specs
        .first()
        .ok_or_else(|| Error::InvalidConfig("no spectrograms to compose".into()))?;
    cfg.check_tile(first.num_bands() * specs.len())?;
    Ok(first.num_columns())
}

/// Frame `t`: tile, quantize, replicate and colormap.
pub fn compose_frame(
    specs: &[ErbSpectrogram],
    t: usize,
    cfg: &ComposerConfig,
) -> Result<ComposedFrame> {
    let lut = cfg.colormap.lut();
    compose_with_lut(specs, t, cfg, &lut)
}

fn compose_with_lut(
    specs: &[ErbSpectrogram],
    t: usize,
    cfg: &ComposerConfig,
    lut: &[Rgb; 256],
) -> Result<ComposedFrame> {
    let tile = assemble_tile(specs, t, cfg.columns_per_frame)?;
    let indices = replicate(&quantize_db(&tile, cfg), cfg)?;
    let pixels = indices
        .data()
        .iter()
        .flat_map(|&q| lut[usize::from(q)])
        .collect();
    Ok(ComposedFrame {
        frame_index: t,
        width: cfg.image_width,
        height: cfg.image_height,
        pixels,
    })
}

/// Lazily composed frames, one per spectrogram column, in index order.
pub struct FrameStream<'a> {
    specs: &'a [ErbSpectrogram],
    cfg: ComposerConfig,
    lut: [Rgb; 256],
    next: usize,
    total: usize,
}

impl Iterator for FrameStream<'_> {
    type Item = ComposedFrame;

    fn next(&mut self) -> Option<ComposedFrame> {
        if self.next >= self.total {
            return None;
        }
        let frame = compose_with_lut(self.specs, self.next, &self.cfg, &self.lut)
            .expect("geometry validated when the stream was created");
        self.next += 1;
        Some(frame)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for FrameStream<'_> {}

/// One frame per spectrogram column; geometry is validated up front.
pub fn compose_stream<'a>(
    specs: &'a [ErbSpectrogram],
    cfg: &ComposerConfig,
) -> Result<FrameStream<'a>> {
    let total = check(specs, cfg)?;
    assemble_tile(specs, 0, cfg.columns_per_frame)?;
    Ok(FrameStream {
        specs,
        cfg: cfg.clone(),
        lut: cfg.colormap.lut(),
        next: 0,
        total,
    })
}

/// All frames, composed in parallel and returned in index order.
pub fn compose_frames(specs: &[ErbSpectrogram], cfg: &ComposerConfig) -> Result<Vec<ComposedFrame>> {
    let total = check(specs, cfg)?;
    let lut = cfg.colormap.lut();
    (0..total)
        .into_par_iter()
        .map(|t| compose_with_lut(specs, t, cfg, &lut))
        .collect()
}
