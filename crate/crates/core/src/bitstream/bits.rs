//! MSB-first bit cursors and exponential-Golomb codes.

use super::BitstreamError;

/// Appends bits MSB-first; the final partial byte is zero padded.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    buf: Vec<u8>,
    /// Pending bits, right-aligned; fewer than 8 between calls.
    acc: u64,
    acc_len: u32,
    bit_len: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bytes: usize) -> Self {
        Self {
            buf: Vec::with_capacity(bytes),
            ..Self::default()
        }
    }

    /// Number of bits written so far.
    pub fn bit_len(&self) -> u64 {
        self.bit_len
    }

    #[inline]
    fn put(&mut self, value: u64, count: u32) {
        debug_assert!(count <= 56);
        if count == 0 {
            return;
        }
        self.acc = (self.acc << count) | (value & ((1u64 << count) - 1));
        self.acc_len += count;
        self.bit_len += count as u64;
        while self.acc_len >= 8 {
            self.acc_len -= 8;
            self.buf.push((self.acc >> self.acc_len) as u8);
        }
        self.acc &= (1u64 << self.acc_len) - 1;
    }

    #[inline]
    pub fn write_bit(&mut self, bit: bool) {
        self.put(bit as u64, 1);
    }

    /// Writes the low `count` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u128, count: u32) {
        debug_assert!(count <= 128);
        let mut left = count;
        while left > 0 {
            let take = left.min(56);
            left -= take;
            self.put((value >> left) as u64, take);
        }
    }

    /// Unsigned exp-Golomb: `floor(log2(n+1))` zeros, then `n+1` in binary.
    pub fn write_ue(&mut self, value: u64) {
        self.write_code(value as u128);
    }

    /// Signed exp-Golomb: `k > 0` maps to `2k-1`, `k <= 0` to `-2k`.
    pub fn write_se(&mut self, value: i64) {
        self.write_code(se_to_code(value));
    }

    #[inline]
    fn write_code(&mut self, code: u128) {
        let v = code + 1;
        let width = 128 - v.leading_zeros();
        if width <= 64 {
            // the leading zeros are just the high bits of a (2w-1)-bit field
            self.write_bits(v, 2 * width - 1);
        } else {
            self.write_bits(0, width - 1);
            self.write_bits(v, width);
        }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.finish().0
    }

    /// Returns the padded bytes together with the exact bit count.
    pub fn finish(mut self) -> (Vec<u8>, u64) {
        if self.acc_len > 0 {
            self.buf.push((self.acc << (8 - self.acc_len)) as u8);
        }
        (self.buf, self.bit_len)
    }
}

/// Reads bits MSB-first from a borrowed buffer, bounded by an explicit bit limit.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    buf: &'a [u8],
    pos: u64,
    limit: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self {
            buf,
            pos: 0,
            limit: buf.len() as u64 * 8,
        }
    }

    /// Reader that refuses to consume past `bit_len` bits (clamped to the buffer).
    pub fn with_bit_len(buf: &'a [u8], bit_len: u64) -> Self {
        Self {
            buf,
            pos: 0,
            limit: bit_len.min(buf.len() as u64 * 8),
        }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.pos
    }

    /// Next 64 bits of the buffer (not the limit), zero filled past its end.
    #[inline]
    fn peek64(&self) -> u64 {
        let byte = (self.pos / 8) as usize;
        let shift = (self.pos % 8) as u32;
        let mut window = [0u8; 9];
        let avail = self.buf.len().saturating_sub(byte).min(9);
        window[..avail].copy_from_slice(&self.buf[byte..byte + avail]);
        let hi = u64::from_be_bytes(window[..8].try_into().unwrap());
        if shift == 0 {
            hi
        } else {
            (hi << shift) | (window[8] as u64 >> (8 - shift))
        }
    }

    #[inline]
    pub fn read_bit(&mut self) -> Result<bool, BitstreamError> {
        if self.pos >= self.limit {
            return Err(BitstreamError::TruncatedStream);
        }
        let byte = self.buf[(self.pos / 8) as usize];
        let bit = (byte >> (7 - (self.pos % 8))) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, count: u32) -> Result<u128, BitstreamError> {
        debug_assert!(count <= 128);
        if count as u64 > self.remaining() {
            return Err(BitstreamError::TruncatedStream);
        }
        let mut v = 0u128;
        let mut left = count;
        while left > 0 {
            let take = left.min(32);
            v = (v << take) | (self.peek64() >> (64 - take)) as u128;
            self.pos += take as u64;
            left -= take;
        }
        Ok(v)
    }

    pub fn read_ue(&mut self) -> Result<u64, BitstreamError> {
        let w = self.peek64();
        if w != 0 {
            let zeros = w.leading_zeros();
            let total = 2 * zeros + 1;
            if total <= 64 && self.pos + total as u64 <= self.limit {
                self.pos += total as u64;
                return Ok((w >> (64 - total)) - 1);
            }
        }
        self.read_ue_slow()
    }

    fn read_ue_slow(&mut self) -> Result<u64, BitstreamError> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 64 {
                return Err(BitstreamError::CodeTooLong);
            }
        }
        let suffix = self.read_bits(zeros)?;
        let code = ((1u128 << zeros) | suffix) - 1;
        u64::try_from(code).map_err(|_| BitstreamError::CodeTooLong)
    }

    pub fn read_se(&mut self) -> Result<i64, BitstreamError> {
        Ok(code_to_se(self.read_ue()?))
    }
}

/// Exp-Golomb code number of a signed value.
pub fn se_to_code(value: i64) -> u128 {
    let v = value as i128;
    if v > 0 {
        (2 * v - 1) as u128
    } else {
        (-2 * v) as u128
    }
}

/// Inverse of [`se_to_code`] over the `u64` code range.
pub fn code_to_se(code: u64) -> i64 {
    if code % 2 == 1 {
        (code / 2) as i64 + 1
    } else {
        -((code / 2) as i64)
    }
}
