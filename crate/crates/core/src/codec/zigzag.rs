use super::transform::Block;
use std::sync::OnceLock;

/// `(row, col)` visited at each scan index.
pub fn zigzag_order() -> &'static [(usize, usize); 64] {
    static ORDER: OnceLock<[(usize, usize); 64]> = OnceLock::new();
    ORDER.get_or_init(|| {
        let mut order = [(0, 0); 64];
        let mut n = 0;
        for s in 0..15usize {
            let lo = s.saturating_sub(7);
            let hi = s.min(7);
            if s % 2 == 1 {
                for r in lo..=hi {
                    order[n] = (r, s - r);
                    n += 1;
                }
            } else {
                for r in (lo..=hi).rev() {
                    order[n] = (r, s - r);
                    n += 1;
                }
            }
        }
        order
    })
}

pub fn zigzag_scan<T: Copy>(block: &Block<T>) -> [T; 64] {
    let order = zigzag_order();
    std::array::from_fn(|i| block[order[i].0][order[i].1])
}

pub fn inverse_zigzag<T: Copy + Default>(scan: &[T; 64]) -> Block<T> {
    let mut out = [[T::default(); 8]; 8];
    for (i, &(r, c)) in zigzag_order().iter().enumerate() {
        out[r][c] = scan[i];
    }
    out
}
