use super::scramble::element_count;
use super::stream::grid_of;
use super::CryptError;
use crate::bitstream::Container;
use crate::codec::parse_tile_syntax;
use crate::roi::{RoiTimeline, SensitivityClass};
use std::collections::BTreeSet;

/// Bits enciphered per syntax element at the bitstream level.
pub const BITS_PER_ELEMENT: u64 = 16;
/// Bits per pixel of 4:2:0 8-bit video (1.5 bytes).
pub const BITS_PER_PIXEL: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipherMode {
    BitstreamLevel,
    PixelLevel,
}

/// Number of bits a scheme must encipher to protect `classes`.
///
/// Bitstream level counts 16 bits per DC and per nonzero AC level in tiles
/// labeled with one of `classes`. Pixel level counts 12 bits per luma pixel
/// covered by a box of one of `classes`, per frame.
pub fn cipher_cost(
    container: &Container,
    timeline: &RoiTimeline,
    classes: &BTreeSet<SensitivityClass>,
    mode: CipherMode,
) -> Result<u64, CryptError> {
    match mode {
        CipherMode::BitstreamLevel => bitstream_cost(container, classes),
        CipherMode::PixelLevel => pixel_cost(container, timeline, classes),
    }
}

fn bitstream_cost(
    container: &Container,
    classes: &BTreeSet<SensitivityClass>,
) -> Result<u64, CryptError> {
    let grid = grid_of(container)?;
    let mut elements = 0u64;
    for tiles in &container.frames {
        for (t, rec) in tiles.iter().enumerate() {
            if !SensitivityClass::from_id(rec.class_id).is_some_and(|c| classes.contains(&c)) {
                continue;
            }
            let r = grid.rect(t);
            let blocks = parse_tile_syntax(
                &rec.payload,
                rec.payload_bit_length as u64,
                r.width,
                r.height,
            )?;
            elements += element_count(&blocks) as u64;
        }
    }
    Ok(elements * BITS_PER_ELEMENT)
}

fn pixel_cost(
    container: &Container,
    timeline: &RoiTimeline,
    classes: &BTreeSet<SensitivityClass>,
) -> Result<u64, CryptError> {
    let (w, h) = (
        container.header.width as usize,
        container.header.height as usize,
    );
    let mut mask = vec![false; w * h];
    let mut pixels = 0u64;
    for f in 0..container.header.frame_count {
        mask.fill(false);
        for (b, c) in timeline.boxes_at(f)? {
            if !classes.contains(&c) {
                continue;
            }
            if let Some((x0, y0, x1, y1)) = b.clip(w, h) {
                for y in y0..y1 {
                    mask[y * w + x0..y * w + x1].fill(true);
                }
            }
        }
        pixels += mask.iter().filter(|&&m| m).count() as u64;
    }
    Ok(pixels * BITS_PER_PIXEL)
}
