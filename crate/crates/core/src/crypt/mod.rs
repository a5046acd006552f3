//! Per-class key hierarchy, keystreams, level scrambling and cipher-cost accounting.

mod cost;
mod keys;
mod keystream;
mod scramble;
mod stream;

pub use cost::{cipher_cost, CipherMode, BITS_PER_ELEMENT, BITS_PER_PIXEL};
pub use keys::{derive_class_key, ClassKey, KeyBundle, KeyFile, MasterKey, KEY_LEN};
pub use keystream::{keystream, NonceLayout};
pub use scramble::{
    element_count, scramble_ac, scramble_dc, scramble_in_place, scramble_tile, BYTES_PER_ELEMENT,
};
pub use stream::{decrypt_stream, encrypt_stream, scramble_record};

use crate::bitstream::BitstreamError;
use crate::codec::CodecError;
use crate::roi::RoiError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CryptError {
    #[error("keystream exhausted: need {needed} bytes, have {available}")]
    KeystreamExhausted { needed: usize, available: usize },
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("key file: {0}")]
    KeyFile(String),
    #[error("scrambled payload of {0} bits does not fit a tile record")]
    PayloadTooLarge(u64),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Roi(#[from] RoiError),
}

impl From<BitstreamError> for CryptError {
    fn from(e: BitstreamError) -> Self {
        CryptError::Codec(e.into())
    }
}
