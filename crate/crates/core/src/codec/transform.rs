//! 8x8 Walsh-Hadamard transform with rows in sequency order.

use crate::scalar::Coefficient;
use std::sync::OnceLock;

pub type Block<T> = [[T; 8]; 8];

/// Sign pattern of the sequency-ordered Hadamard matrix; row `k` has `k` sign changes.
pub fn hadamard_rows() -> &'static [[i8; 8]; 8] {
    static ROWS: OnceLock<[[i8; 8]; 8]> = OnceLock::new();
    ROWS.get_or_init(|| {
        let mut natural: Vec<[i8; 8]> = (0..8u32)
            .map(|i| {
                let mut row = [0i8; 8];
                for (j, v) in row.iter_mut().enumerate() {
                    *v = if (i & j as u32).count_ones().is_multiple_of(2) {
                        1
                    } else {
                        -1
                    };
                }
                row
            })
            .collect();
        natural.sort_by_key(sign_changes);
        let mut out = [[0i8; 8]; 8];
        out.copy_from_slice(&natural);
        out
    })
}

fn sign_changes(row: &[i8; 8]) -> usize {
    row.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `H * X * H^T`
fn sandwich<T: Coefficient>(x: &Block<T>) -> Block<T> {
    let h = hadamard_rows();
    let mut tmp = [[T::zero(); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let mut acc = T::zero();
            for k in 0..8 {
                acc = if h[i][k] > 0 {
                    acc + x[k][j]
                } else {
                    acc - x[k][j]
                };
            }
            tmp[i][j] = acc;
        }
    }
    let mut out = [[T::zero(); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let mut acc = T::zero();
            for k in 0..8 {
                acc = if h[j][k] > 0 {
                    acc + tmp[i][k]
                } else {
                    acc - tmp[i][k]
                };
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn fwht8_forward<T: Coefficient>(block: &Block<T>) -> Block<T> {
    sandwich(block)
}

/// `(H * Y * H^T) / 64`, exact for any output of [`fwht8_forward`].
///
/// Coefficients that did not come from the forward transform (dequantized or
/// scrambled levels) are rounded half up: `floor((v + 32) / 64)`.
pub fn fwht8_inverse<T: Coefficient>(coeffs: &Block<T>) -> Block<T> {
    let s = sandwich(coeffs);
    let half = T::from(32).unwrap();
    let scale = T::from(64).unwrap();
    let mut out = [[T::zero(); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            out[i][j] = floor_div(s[i][j] + half, scale);
        }
    }
    out
}

fn floor_div<T: Coefficient>(a: T, b: T) -> T {
    let q = a / b;
    if (a % b != T::zero()) && (a < T::zero()) {
        q - T::one()
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rows_are_in_sequency_order() {
        let h = hadamard_rows();
        for (k, row) in h.iter().enumerate() {
            assert_eq!(sign_changes(row), k);
        }
        // orthogonality: H H^T = 8 I
        for a in 0..8 {
            for b in 0..8 {
                let dot: i32 = (0..8).map(|k| (h[a][k] * h[b][k]) as i32).sum();
                assert_eq!(dot, if a == b { 8 } else { 0 });
            }
        }
    }

    #[test]
    fn constant_block_energy_in_dc() {
        let y = fwht8_forward(&[[128i32; 8]; 8]);
        for (i, row) in y.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, if i == 0 && j == 0 { 8192 } else { 0 });
            }
        }
    }

    #[test]
    fn zero_block() {
        assert_eq!(fwht8_forward(&[[0i64; 8]; 8]), [[0i64; 8]; 8]);
    }

    #[test]
    fn thousand_random_roundtrips() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let mut x = [[0i32; 8]; 8];
            for v in x.iter_mut().flatten() {
                *v = rng.random_range(-255..=255);
            }
            assert_eq!(fwht8_inverse(&fwht8_forward(&x)), x);
        }
    }

    #[test]
    fn inverse_rounds_non_exact_input() {
        // single DC of 40: H*Y*H^T is 40 everywhere, 40/64 rounds to 1
        let mut y = [[0i32; 8]; 8];
        y[0][0] = 40;
        assert_eq!(fwht8_inverse(&y), [[1; 8]; 8]);
        y[0][0] = -40;
        assert_eq!(fwht8_inverse(&y), [[-1; 8]; 8]);
    }

    proptest! {
        #[test]
        fn roundtrip_is_exact_i64(vals in proptest::collection::vec(-255i64..=255, 64)) {
            let mut x = [[0i64; 8]; 8];
            for (k, v) in vals.iter().enumerate() {
                x[k / 8][k % 8] = *v;
            }
            prop_assert_eq!(fwht8_inverse(&fwht8_forward(&x)), x);
        }
    }
}
