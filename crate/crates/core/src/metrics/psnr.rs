use super::{Db, MetricsError};
use crate::codec::{FrameYUV, TileGrid};
use crate::scalar::Real;
use std::collections::BTreeSet;

/// Sum of squared differences and sample count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SquaredError {
    pub sse: u64,
    pub count: u64,
}

impl SquaredError {
    pub fn between(a: &[u8], b: &[u8]) -> Result<Self, MetricsError> {
        if a.len() != b.len() {
            return Err(MetricsError::DimensionMismatch(format!(
                "{} vs {} samples",
                a.len(),
                b.len()
            )));
        }
        Ok(Self {
            sse: a
                .iter()
                .zip(b)
                .map(|(&x, &y)| (x.abs_diff(y) as u64).pow(2))
                .sum(),
            count: a.len() as u64,
        })
    }

    pub fn add(&mut self, other: SquaredError) {
        self.sse += other.sse;
        self.count += other.count;
    }

    /// `10 log10(255^2 / MSE)`, infinite when MSE is zero.
    pub fn psnr<T: Real>(&self) -> T {
        if self.sse == 0 {
            return T::infinity();
        }
        let peak = T::from_f64(255.0 * 255.0).unwrap();
        let mse = T::from_u64(self.sse).unwrap() / T::from_u64(self.count).unwrap();
        T::from_f64(10.0).unwrap() * (peak / mse).log10()
    }
}

/// PSNR in the scalar type of the caller's choice.
pub fn psnr_as<T: Real>(reference: &[u8], test: &[u8]) -> Result<T, MetricsError> {
    Ok(SquaredError::between(reference, test)?.psnr())
}

pub fn psnr(reference: &[u8], test: &[u8]) -> Result<Db, MetricsError> {
    psnr_as::<f64>(reference, test).map(Db)
}

/// Squared luma error over the tiles whose label is in `labels` (0 = unlabeled).
pub fn region_error(
    reference: &FrameYUV,
    test: &FrameYUV,
    tile_labels: &[u8],
    grid: &TileGrid,
    labels: &BTreeSet<u8>,
) -> Result<SquaredError, MetricsError> {
    if reference.width != test.width
        || reference.height != test.height
        || reference.width != grid.width
        || reference.height != grid.height
    {
        return Err(MetricsError::DimensionMismatch(
            "frame and grid sizes differ".into(),
        ));
    }
    if tile_labels.len() != grid.len() {
        return Err(MetricsError::DimensionMismatch(format!(
            "{} labels for {} tiles",
            tile_labels.len(),
            grid.len()
        )));
    }
    let mut acc = SquaredError::default();
    for (i, rect) in grid.rects().enumerate() {
        if !labels.contains(&tile_labels[i]) {
            continue;
        }
        for y in rect.y..rect.y + rect.height {
            let s = y * grid.width + rect.x;
            let e =
                SquaredError::between(&reference.y[s..s + rect.width], &test.y[s..s + rect.width])?;
            acc.add(e);
        }
    }
    Ok(acc)
}

/// Luma PSNR restricted to tiles labeled with one of `labels`.
pub fn psnr_region(
    reference: &FrameYUV,
    test: &FrameYUV,
    tile_labels: &[u8],
    grid: &TileGrid,
    labels: &BTreeSet<u8>,
) -> Result<Db, MetricsError> {
    let e = region_error(reference, test, tile_labels, grid, labels)?;
    if e.count == 0 {
        return Err(MetricsError::NoRegion);
    }
    Ok(Db(e.psnr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::make_tile_grid;

    #[test]
    fn identical_is_infinite() {
        let a = vec![9u8; 100];
        assert!(psnr(&a, &a).unwrap().0.is_infinite());
    }

    #[test]
    fn maximal_error_is_zero_db() {
        assert_eq!(psnr(&[0; 64], &[255; 64]).unwrap().0, 0.0);
    }

    #[test]
    fn single_sample_off_by_16() {
        let a = vec![100u8; 96 * 64];
        let mut b = a.clone();
        b[77] = 116;
        // independent evaluation of 10 log10(65025 * 6144 / 256)
        let expect = 10.0 * (65025.0f64 * 6144.0 / 256.0).log10();
        let got = psnr(&a, &b).unwrap().0;
        assert!((got - expect).abs() < 1e-12);
        assert!((got - 61.93).abs() < 0.005);
        let got32: f32 = psnr_as(&a, &b).unwrap();
        assert!((got32 as f64 - expect).abs() < 1e-4);
    }

    #[test]
    fn symmetric() {
        let a: Vec<u8> = (0..=255).collect();
        let b: Vec<u8> = (0..=255).rev().collect();
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn mismatched_sizes() {
        assert!(matches!(
            psnr(&[0; 3], &[0; 4]),
            Err(MetricsError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn region_selection() {
        let grid = make_tile_grid(64, 32, 2, 1).unwrap();
        let a = FrameYUV::filled(64, 32, 100);
        let mut b = a.clone();
        for y in 0..32 {
            for x in 32..64 {
                b.y[y * 64 + x] = 110;
            }
        }
        let labels = [0u8, 1];
        let left = psnr_region(&a, &b, &labels, &grid, &BTreeSet::from([0])).unwrap();
        assert!(left.0.is_infinite());
        let right = psnr_region(&a, &b, &labels, &grid, &BTreeSet::from([1])).unwrap();
        assert!((right.0 - 10.0 * (65025.0f64 / 100.0).log10()).abs() < 1e-12);
        assert_eq!(
            psnr_region(&a, &b, &labels, &grid, &BTreeSet::new()),
            Err(MetricsError::NoRegion)
        );
        assert_eq!(
            psnr_region(&a, &b, &labels, &grid, &BTreeSet::from([3])),
            Err(MetricsError::NoRegion)
        );
    }
}
