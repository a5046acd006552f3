//! Bit-level I/O and the `.arhe` container format.

mod bits;
mod container;

pub use bits::{code_to_se, se_to_code, BitReader, BitWriter};
pub use container::{
    parse_container, serialize_container, Container, ContainerHeader, TileRecord, FORMAT_VERSION,
    HEADER_LEN, MAGIC,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitstreamError {
    #[error("truncated stream")]
    TruncatedStream,
    #[error("exp-Golomb code exceeds 64-bit range")]
    CodeTooLong,
    #[error("bad magic: expected \"ARHE\"")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("invalid tile record: {0}")]
    InvalidTileRecord(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} trailing bytes after last frame")]
    TrailingData(usize),
}
