use super::keys::ClassKey;
use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;

/// Per-tile nonce: big-endian `salt || frame_index || tile_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NonceLayout {
    pub salt: u32,
    pub frame_index: u32,
    pub tile_index: u32,
}

impl NonceLayout {
    pub fn to_bytes(&self) -> [u8; 12] {
        let mut n = [0u8; 12];
        n[..4].copy_from_slice(&self.salt.to_be_bytes());
        n[4..8].copy_from_slice(&self.frame_index.to_be_bytes());
        n[8..].copy_from_slice(&self.tile_index.to_be_bytes());
        n
    }
}

/// ChaCha20 (RFC 8439) keystream starting at block counter 0.
pub fn keystream(key: &ClassKey, nonce: NonceLayout, length: usize) -> Vec<u8> {
    raw_keystream(&key.key, &nonce.to_bytes(), length)
}

pub(crate) fn raw_keystream(key: &[u8; 32], nonce: &[u8; 12], length: usize) -> Vec<u8> {
    let mut out = vec![0u8; length];
    let mut cipher = ChaCha20::new(key.into(), nonce.into());
    cipher.apply_keystream(&mut out);
    out
}
