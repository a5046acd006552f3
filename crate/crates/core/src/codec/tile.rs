//! Per-tile block coding: flat DC prediction, transform, quantization and
//! zigzag run-level exp-Golomb syntax.

use super::quant::{dequantize, quantize, QuantParams};
use super::transform::{fwht8_forward, fwht8_inverse, Block};
use super::zigzag::{inverse_zigzag, zigzag_scan};
use super::CodecError;
use crate::bitstream::{BitReader, BitWriter};

/// Dequantized coefficients are clamped here before the inverse transform so
/// scrambled levels cannot overflow; valid streams never come close.
const COEFF_LIMIT: i64 = 1 << 30;

/// One 8x8 block's syntax: differential DC level and zigzag-ordered AC levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffBlock {
    pub dc_delta: i64,
    pub ac: [i64; 63],
}

impl Default for CoeffBlock {
    fn default() -> Self {
        Self {
            dc_delta: 0,
            ac: [0; 63],
        }
    }
}

impl CoeffBlock {
    pub fn nonzero_ac(&self) -> usize {
        self.ac.iter().filter(|&&l| l != 0).count()
    }
}

/// Samples of one tile: luma plus the two quarter-size chroma planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileImage {
    pub width: usize,
    pub height: usize,
    pub planes: [Vec<u8>; 3],
}

impl TileImage {
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        let dims = plane_dims(width, height);
        Self {
            width,
            height,
            planes: dims.map(|(w, h)| vec![value; w * h]),
        }
    }
}

/// Entropy-coded tile payload with its exact bit length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TilePayload {
    pub bytes: Vec<u8>,
    pub bit_len: u64,
}

pub(crate) fn plane_dims(width: usize, height: usize) -> [(usize, usize); 3] {
    [
        (width, height),
        (width / 2, height / 2),
        (width / 2, height / 2),
    ]
}

/// Blocks in coding order for a tile with the given luma size.
pub fn block_count(width: usize, height: usize) -> usize {
    plane_dims(width, height)
        .iter()
        .map(|(w, h)| (w / 8) * (h / 8))
        .sum()
}

fn rounded_mean(block: &[[u8; 8]; 8]) -> i64 {
    let sum: i64 = block.iter().flatten().map(|&v| v as i64).sum();
    (sum + 32) / 64
}

/// Rebuilds one block from its full level scan (DC at index 0).
fn reconstruct_block(scan: &[i64; 64], predictor: i64, q: QuantParams) -> [[u8; 8]; 8] {
    let deq: [i64; 64] =
        std::array::from_fn(|i| dequantize(scan[i], q).clamp(-COEFF_LIMIT, COEFF_LIMIT));
    let residual = fwht8_inverse(&inverse_zigzag(&deq));
    let mut out = [[0u8; 8]; 8];
    for r in 0..8 {
        for c in 0..8 {
            out[r][c] = (residual[r][c] + predictor).clamp(0, 255) as u8;
        }
    }
    out
}

fn read_block(plane: &[u8], stride: usize, bx: usize, by: usize) -> [[u8; 8]; 8] {
    let mut b = [[0u8; 8]; 8];
    for (r, row) in b.iter_mut().enumerate() {
        let start = (by * 8 + r) * stride + bx * 8;
        row.copy_from_slice(&plane[start..start + 8]);
    }
    b
}

fn write_block(plane: &mut [u8], stride: usize, bx: usize, by: usize, b: &[[u8; 8]; 8]) {
    for (r, row) in b.iter().enumerate() {
        let start = (by * 8 + r) * stride + bx * 8;
        plane[start..start + 8].copy_from_slice(row);
    }
}

/// Walks every block in coding order, threading predictor and DC state
/// through each row of blocks. `step` gets the predictor and previous DC level
/// and returns the reconstructed block and its DC level.
fn walk_blocks<F>(width: usize, height: usize, mut step: F) -> Result<TileImage, CodecError>
where
    F: FnMut(usize, usize, usize, i64, i64) -> Result<([[u8; 8]; 8], i64), CodecError>,
{
    let mut recon = TileImage::filled(width, height, 0);
    for (p, &(pw, ph)) in plane_dims(width, height).iter().enumerate() {
        for by in 0..ph / 8 {
            let mut predictor = 128;
            let mut prev_dc = 0;
            for bx in 0..pw / 8 {
                let (block, dc) = step(p, bx, by, predictor, prev_dc)?;
                write_block(&mut recon.planes[p], pw, bx, by, &block);
                predictor = rounded_mean(&block);
                prev_dc = dc;
            }
        }
    }
    Ok(recon)
}

/// Encodes one tile; the returned reconstruction equals what [`decode_tile`] yields.
pub fn encode_tile(tile: &TileImage, q: QuantParams) -> (TilePayload, TileImage) {
    let (blocks, recon) = analyze_tile(tile, q);
    (write_tile_syntax(&blocks), recon)
}

/// Transform and quantization without entropy coding.
pub fn analyze_tile(tile: &TileImage, q: QuantParams) -> (Vec<CoeffBlock>, TileImage) {
    let dims = plane_dims(tile.width, tile.height);
    let mut blocks = Vec::with_capacity(block_count(tile.width, tile.height));
    let recon = walk_blocks(tile.width, tile.height, |p, bx, by, predictor, prev_dc| {
        let src = read_block(&tile.planes[p], dims[p].0, bx, by);
        let mut residual: Block<i64> = [[0; 8]; 8];
        for r in 0..8 {
            for c in 0..8 {
                residual[r][c] = src[r][c] as i64 - predictor;
            }
        }
        let coeffs = fwht8_forward(&residual);
        let mut scan = zigzag_scan(&coeffs);
        for v in scan.iter_mut() {
            *v = quantize(*v, q);
        }
        let mut ac = [0i64; 63];
        ac.copy_from_slice(&scan[1..]);
        blocks.push(CoeffBlock {
            dc_delta: scan[0] - prev_dc,
            ac,
        });
        Ok((reconstruct_block(&scan, predictor, q), scan[0]))
    })
    .expect("analysis never fails");
    (blocks, recon)
}

/// Reconstructs a tile from parsed (possibly scrambled) block syntax.
pub fn reconstruct_tile(
    blocks: &[CoeffBlock],
    width: usize,
    height: usize,
    q: QuantParams,
) -> Result<TileImage, CodecError> {
    let want = block_count(width, height);
    if blocks.len() != want {
        return Err(CodecError::DimensionMismatch(format!(
            "{} blocks for a tile needing {want}",
            blocks.len()
        )));
    }
    let mut next = blocks.iter();
    walk_blocks(width, height, |_, _, _, predictor, prev_dc| {
        let b = next.next().expect("length checked");
        let dc = prev_dc.saturating_add(b.dc_delta);
        let mut scan = [0i64; 64];
        scan[0] = dc;
        scan[1..].copy_from_slice(&b.ac);
        Ok((reconstruct_block(&scan, predictor, q), dc))
    })
}

pub fn write_tile_syntax(blocks: &[CoeffBlock]) -> TilePayload {
    let mut w = BitWriter::with_capacity(blocks.len() * 2);
    for b in blocks {
        w.write_se(b.dc_delta);
        w.write_ue(b.nonzero_ac() as u64);
        let mut run = 0u64;
        for &level in &b.ac {
            if level == 0 {
                run += 1;
            } else {
                w.write_ue(run);
                w.write_se(level);
                run = 0;
            }
        }
    }
    let (bytes, bit_len) = w.finish();
    TilePayload { bytes, bit_len }
}

/// Parses exactly `block_count(width, height)` blocks spanning all `bit_len` bits.
pub fn parse_tile_syntax(
    payload: &[u8],
    bit_len: u64,
    width: usize,
    height: usize,
) -> Result<Vec<CoeffBlock>, CodecError> {
    let n = block_count(width, height);
    let mut r = BitReader::with_bit_len(payload, bit_len);
    let mut blocks = Vec::with_capacity(n);
    for i in 0..n {
        let mut b = CoeffBlock {
            dc_delta: r.read_se()?,
            ..Default::default()
        };
        let count = r.read_ue()?;
        if count > 63 {
            return Err(CodecError::InvalidSyntax(format!(
                "block {i}: {count} nonzero AC levels"
            )));
        }
        let mut pos = 0u64;
        for _ in 0..count {
            pos = pos.saturating_add(r.read_ue()?);
            if pos >= 63 {
                return Err(CodecError::InvalidSyntax(format!(
                    "block {i}: AC run past end of block"
                )));
            }
            b.ac[pos as usize] = r.read_se()?;
            pos += 1;
        }
        blocks.push(b);
    }
    if r.remaining() != 0 {
        return Err(CodecError::InvalidSyntax(format!(
            "{} unused bits after last block",
            r.remaining()
        )));
    }
    Ok(blocks)
}

pub fn decode_tile(
    payload: &[u8],
    bit_len: u64,
    width: usize,
    height: usize,
    q: QuantParams,
) -> Result<TileImage, CodecError> {
    let blocks = parse_tile_syntax(payload, bit_len, width, height)?;
    reconstruct_tile(&blocks, width, height, q)
}
