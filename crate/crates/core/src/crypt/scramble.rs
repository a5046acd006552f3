//! Format-compliant scrambling of quantized levels.

use super::CryptError;
use crate::bitstream::se_to_code;
use crate::codec::CoeffBlock;

/// Keystream bytes consumed per scrambled syntax element.
pub const BYTES_PER_ELEMENT: usize = 2;

/// Number of scramblable elements: one DC per block plus every nonzero AC level.
pub fn element_count(blocks: &[CoeffBlock]) -> usize {
    blocks.iter().map(|b| 1 + b.nonzero_ac()).sum()
}

fn from_code(code: u128) -> i64 {
    let half = (code / 2) as i128;
    let v = if code % 2 == 1 { half + 1 } else { -half };
    v.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

/// DC: `cn' = cn ^ k16`.
pub fn scramble_dc(level: i64, k16: u16) -> i64 {
    from_code(se_to_code(level) ^ k16 as u128)
}

/// Nonzero AC: `cn' = ((cn - 1) ^ k16) + 1`, so the result stays nonzero.
pub fn scramble_ac(level: i64, k16: u16) -> i64 {
    debug_assert!(level != 0);
    from_code(((se_to_code(level) - 1) ^ k16 as u128) + 1)
}

/// Scrambles every DC and nonzero AC level in coding order, two keystream
/// bytes (big-endian) per element. Zero runs and AC counts are untouched, so
/// the result always re-encodes to a decodable tile; applying it twice with
/// the same keystream is the identity.
pub fn scramble_tile(blocks: &[CoeffBlock], ks: &[u8]) -> Result<Vec<CoeffBlock>, CryptError> {
    let mut out = blocks.to_vec();
    scramble_in_place(&mut out, ks)?;
    Ok(out)
}

pub fn scramble_in_place(blocks: &mut [CoeffBlock], ks: &[u8]) -> Result<(), CryptError> {
    let needed = element_count(blocks) * BYTES_PER_ELEMENT;
    if ks.len() < needed {
        return Err(CryptError::KeystreamExhausted {
            needed,
            available: ks.len(),
        });
    }
    let mut words = ks.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]));
    for b in blocks.iter_mut() {
        b.dc_delta = scramble_dc(b.dc_delta, words.next().unwrap());
        for level in b.ac.iter_mut().filter(|l| **l != 0) {
            *level = scramble_ac(*level, words.next().unwrap());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dc_xor_example() {
        // cn 5 is level +3
        assert_eq!(se_to_code(3), 5);
        let s = scramble_dc(3, 3);
        assert_eq!(se_to_code(s), 6);
        assert_eq!(scramble_dc(s, 3), 3);
    }

    #[test]
    fn ac_example() {
        let s = scramble_ac(3, 3);
        assert_eq!(se_to_code(s), 8);
        assert_eq!(s, -4);
        assert_eq!(scramble_ac(-4, 3), 3);
    }

    #[test]
    fn zero_keystream_is_identity() {
        let mut b = CoeffBlock {
            dc_delta: -7,
            ..Default::default()
        };
        b.ac[0] = 4;
        b.ac[10] = -1;
        let blocks = vec![b, CoeffBlock::default()];
        let ks = vec![0u8; 2 * element_count(&blocks)];
        assert_eq!(scramble_tile(&blocks, &ks).unwrap(), blocks);
    }

    #[test]
    fn exhausted() {
        let mut b = CoeffBlock::default();
        b.ac[3] = 1;
        let err = scramble_tile(&[b], &[0u8; 3]).unwrap_err();
        assert_eq!(
            err,
            CryptError::KeystreamExhausted {
                needed: 4,
                available: 3
            }
        );
    }

    fn arb_block() -> impl Strategy<Value = CoeffBlock> {
        (
            -5000i64..5000,
            proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -300i64..300], 63),
        )
            .prop_map(|(dc, ac)| {
                let mut b = CoeffBlock {
                    dc_delta: dc,
                    ..Default::default()
                };
                b.ac.copy_from_slice(&ac);
                b
            })
    }

    proptest! {
        #[test]
        fn involution_and_structure(
            blocks in proptest::collection::vec(arb_block(), 1..6),
            seed in any::<u64>(),
        ) {
            let n = element_count(&blocks) * 2;
            let ks: Vec<u8> = (0..n as u64).map(|i| (i.wrapping_mul(seed | 1) >> 7) as u8).collect();
            let once = scramble_tile(&blocks, &ks).unwrap();
            for (a, b) in blocks.iter().zip(&once) {
                for (x, y) in a.ac.iter().zip(&b.ac) {
                    prop_assert_eq!(*x == 0, *y == 0);
                }
            }
            prop_assert_eq!(scramble_tile(&once, &ks).unwrap(), blocks);
        }
    }
}
