use super::grid::{make_tile_grid, TileGrid, TileRect};
use super::quant::QuantParams;
use super::tile::{decode_tile, encode_tile, plane_dims, TileImage};
use super::CodecError;
use crate::bitstream::{ContainerHeader, TileRecord};
use rayon::prelude::*;

/// Planar 4:2:0 8-bit frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameYUV {
    pub width: usize,
    pub height: usize,
    pub y: Vec<u8>,
    pub u: Vec<u8>,
    pub v: Vec<u8>,
}

impl FrameYUV {
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        let c = (width / 2) * (height / 2);
        Self {
            width,
            height,
            y: vec![value; width * height],
            u: vec![value; c],
            v: vec![value; c],
        }
    }

    /// Bytes per frame in the raw planar layout.
    pub fn raw_size(width: usize, height: usize) -> usize {
        width * height + 2 * (width / 2) * (height / 2)
    }

    pub fn from_raw(bytes: &[u8], width: usize, height: usize) -> Result<Self, CodecError> {
        if bytes.len() != Self::raw_size(width, height) {
            return Err(CodecError::TruncatedInput {
                needed: Self::raw_size(width, height),
                available: bytes.len(),
            });
        }
        let ys = width * height;
        let cs = (width / 2) * (height / 2);
        Ok(Self {
            width,
            height,
            y: bytes[..ys].to_vec(),
            u: bytes[ys..ys + cs].to_vec(),
            v: bytes[ys + cs..].to_vec(),
        })
    }

    pub fn write_raw(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.y);
        out.extend_from_slice(&self.u);
        out.extend_from_slice(&self.v);
    }

    fn plane(&self, p: usize) -> &[u8] {
        match p {
            0 => &self.y,
            1 => &self.u,
            _ => &self.v,
        }
    }

    fn plane_mut(&mut self, p: usize) -> &mut [u8] {
        match p {
            0 => &mut self.y,
            1 => &mut self.u,
            _ => &mut self.v,
        }
    }

    /// Copies the samples under a luma tile rectangle (and its chroma footprint).
    pub fn extract(&self, rect: TileRect) -> TileImage {
        let mut t = TileImage::filled(rect.width, rect.height, 0);
        let frame_dims = plane_dims(self.width, self.height);
        for (p, &(tw, th)) in plane_dims(rect.width, rect.height).iter().enumerate() {
            let (x0, y0) = if p == 0 {
                (rect.x, rect.y)
            } else {
                (rect.x / 2, rect.y / 2)
            };
            let stride = frame_dims[p].0;
            let src = self.plane(p);
            for r in 0..th {
                let s = (y0 + r) * stride + x0;
                t.planes[p][r * tw..(r + 1) * tw].copy_from_slice(&src[s..s + tw]);
            }
        }
        t
    }

    pub fn paste(&mut self, rect: TileRect, tile: &TileImage) {
        let frame_dims = plane_dims(self.width, self.height);
        for (p, &(tw, th)) in plane_dims(rect.width, rect.height).iter().enumerate() {
            let (x0, y0) = if p == 0 {
                (rect.x, rect.y)
            } else {
                (rect.x / 2, rect.y / 2)
            };
            let stride = frame_dims[p].0;
            let dst = self.plane_mut(p);
            for r in 0..th {
                let d = (y0 + r) * stride + x0;
                dst[d..d + tw].copy_from_slice(&tile.planes[p][r * tw..(r + 1) * tw]);
            }
        }
    }
}

/// Splits a raw 4:2:0 byte stream into `count` frames.
pub fn read_raw_frames(
    bytes: &[u8],
    width: usize,
    height: usize,
    count: usize,
) -> Result<Vec<FrameYUV>, CodecError> {
    let size = FrameYUV::raw_size(width, height);
    let needed = size * count;
    if bytes.len() < needed {
        return Err(CodecError::TruncatedInput {
            needed,
            available: bytes.len(),
        });
    }
    bytes
        .chunks_exact(size)
        .take(count)
        .map(|c| FrameYUV::from_raw(c, width, height))
        .collect()
}

pub fn write_raw_frames(frames: &[FrameYUV]) -> Vec<u8> {
    let mut out = Vec::new();
    for f in frames {
        f.write_raw(&mut out);
    }
    out
}

/// Encodes every tile independently; records come back in raster order.
pub fn encode_frame(
    frame: &FrameYUV,
    grid: &TileGrid,
    q: QuantParams,
    tile_classes: &[u8],
) -> Result<Vec<TileRecord>, CodecError> {
    Ok(encode_frame_with_recon(frame, grid, q, tile_classes)?.0)
}

/// Like [`encode_frame`], also returning the decoder-side reconstruction.
pub fn encode_frame_with_recon(
    frame: &FrameYUV,
    grid: &TileGrid,
    q: QuantParams,
    tile_classes: &[u8],
) -> Result<(Vec<TileRecord>, FrameYUV), CodecError> {
    if frame.width != grid.width || frame.height != grid.height {
        return Err(CodecError::DimensionMismatch(format!(
            "frame {}x{} vs grid {}x{}",
            frame.width, frame.height, grid.width, grid.height
        )));
    }
    if tile_classes.len() != grid.len() {
        return Err(CodecError::DimensionMismatch(format!(
            "{} tile classes for {} tiles",
            tile_classes.len(),
            grid.len()
        )));
    }
    let encoded: Vec<_> = (0..grid.len())
        .into_par_iter()
        .map(|i| encode_tile(&frame.extract(grid.rect(i)), q))
        .collect();
    let mut recon = FrameYUV::filled(frame.width, frame.height, 0);
    let mut records = Vec::with_capacity(grid.len());
    for (i, (payload, tile)) in encoded.into_iter().enumerate() {
        recon.paste(grid.rect(i), &tile);
        records.push(TileRecord::new(
            tile_classes[i],
            payload.bytes,
            payload.bit_len,
        ));
    }
    Ok((records, recon))
}

pub fn decode_frame(
    records: &[TileRecord],
    header: &ContainerHeader,
) -> Result<FrameYUV, CodecError> {
    let grid = make_tile_grid(
        header.width as usize,
        header.height as usize,
        header.tile_cols as usize,
        header.tile_rows as usize,
    )?;
    let q = QuantParams::new(header.qp)?;
    if records.len() != grid.len() {
        return Err(CodecError::DimensionMismatch(format!(
            "{} tile records for {} tiles",
            records.len(),
            grid.len()
        )));
    }
    let tiles: Vec<TileImage> = records
        .par_iter()
        .enumerate()
        .map(|(i, rec)| {
            let r = grid.rect(i);
            decode_tile(
                &rec.payload,
                rec.payload_bit_length as u64,
                r.width,
                r.height,
                q,
            )
        })
        .collect::<Result<_, _>>()?;
    let mut frame = FrameYUV::filled(grid.width, grid.height, 0);
    for (i, t) in tiles.iter().enumerate() {
        frame.paste(grid.rect(i), t);
    }
    Ok(frame)
}
