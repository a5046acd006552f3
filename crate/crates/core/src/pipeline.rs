//! Whole-sequence encode/decode on top of the per-frame codec.

use crate::bitstream::{Container, ContainerHeader};
use crate::codec::{
    decode_frame, encode_frame_with_recon, make_tile_grid, FrameYUV, QuantParams, TileGrid,
};
use crate::roi::{boxes_to_tile_classes, RoiTimeline};
use crate::Error;

/// Tile labels for every frame of `timeline` on `grid`.
pub fn label_frames(
    timeline: &RoiTimeline,
    grid: &TileGrid,
    frames: usize,
) -> Result<Vec<Vec<u8>>, Error> {
    (0..frames)
        .map(|f| Ok(boxes_to_tile_classes(&timeline.boxes_at(f as u32)?, grid)))
        .collect()
}

/// Encodes `frames` into a container, labeling tiles from `timeline`.
pub fn encode_sequence(
    frames: &[FrameYUV],
    timeline: &RoiTimeline,
    qp: u8,
    tiles: (usize, usize),
    fps: u8,
    salt: u32,
) -> Result<Container, Error> {
    Ok(encode_sequence_with_recon(frames, timeline, qp, tiles, fps, salt)?.0)
}

pub fn encode_sequence_with_recon(
    frames: &[FrameYUV],
    timeline: &RoiTimeline,
    qp: u8,
    (cols, rows): (usize, usize),
    fps: u8,
    salt: u32,
) -> Result<(Container, Vec<FrameYUV>), Error> {
    let (width, height) = frames
        .first()
        .map(|f| (f.width, f.height))
        .ok_or_else(|| Error::Usage("no frames to encode".into()))?;
    let header = ContainerHeader {
        width: u16::try_from(width)
            .map_err(|_| Error::Usage(format!("width {width} too large")))?,
        height: u16::try_from(height)
            .map_err(|_| Error::Usage(format!("height {height} too large")))?,
        fps,
        qp,
        tile_cols: u8::try_from(cols).map_err(|_| Error::Usage(format!("{cols} tile columns")))?,
        tile_rows: u8::try_from(rows).map_err(|_| Error::Usage(format!("{rows} tile rows")))?,
        frame_count: frames.len() as u32,
        salt,
    };
    header.validate()?;
    let grid = make_tile_grid(width, height, cols, rows)?;
    let q = QuantParams::new(qp)?;
    timeline.validate()?;
    let labels = label_frames(timeline, &grid, frames.len())?;
    let mut out = Vec::with_capacity(frames.len());
    let mut recon = Vec::with_capacity(frames.len());
    for (f, l) in frames.iter().zip(&labels) {
        let (records, r) = encode_frame_with_recon(f, &grid, q, l)?;
        out.push(records);
        recon.push(r);
    }
    Ok((
        Container {
            header,
            frames: out,
        },
        recon,
    ))
}

pub fn decode_sequence(container: &Container) -> Result<Vec<FrameYUV>, Error> {
    container
        .frames
        .iter()
        .map(|records| Ok(decode_frame(records, &container.header)?))
        .collect()
}

/// Class labels stored in the container, per frame.
pub fn stored_labels(container: &Container) -> Vec<Vec<u8>> {
    container
        .frames
        .iter()
        .map(|f| f.iter().map(|t| t.class_id).collect())
        .collect()
}

pub fn grid_for(container: &Container) -> Result<TileGrid, Error> {
    let h = &container.header;
    Ok(make_tile_grid(
        h.width as usize,
        h.height as usize,
        h.tile_cols as usize,
        h.tile_rows as usize,
    )?)
}
