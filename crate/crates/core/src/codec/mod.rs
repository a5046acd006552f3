//! Tile-partitioned intra-frame codec.

mod frame;
mod grid;
mod quant;
mod tile;
mod transform;
mod zigzag;

pub use frame::{
    decode_frame, encode_frame, encode_frame_with_recon, read_raw_frames, write_raw_frames,
    FrameYUV,
};
pub use grid::{make_tile_grid, TileGrid, TileRect};
pub use quant::{dequantize, quantize, QuantParams};
pub use tile::{
    analyze_tile, block_count, decode_tile, encode_tile, parse_tile_syntax, reconstruct_tile,
    write_tile_syntax, CoeffBlock, TileImage, TilePayload,
};
pub use transform::{fwht8_forward, fwht8_inverse, hadamard_rows, Block};
pub use zigzag::{inverse_zigzag, zigzag_order, zigzag_scan};

use crate::bitstream::BitstreamError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("invalid tile grid: {0}")]
    InvalidGrid(String),
    #[error("qp {0} outside [0,51]")]
    InvalidQp(u8),
    #[error("invalid tile syntax: {0}")]
    InvalidSyntax(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("truncated input: need {needed} bytes, have {available}")]
    TruncatedInput { needed: usize, available: usize },
    #[error(transparent)]
    Bitstream(#[from] BitstreamError),
}
