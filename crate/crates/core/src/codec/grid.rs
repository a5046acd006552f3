use super::CodecError;

/// Uniform tile partition of a frame; all bounds are luma offsets on a 16-pixel lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrid {
    pub width: usize,
    pub height: usize,
    pub cols: usize,
    pub rows: usize,
    pub col_bounds: Vec<usize>,
    pub row_bounds: Vec<usize>,
}

/// Luma rectangle of one tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileRect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl TileRect {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.x + self.width && y >= self.y && y < self.y + self.height
    }
}

fn bounds(extent: usize, parts: usize) -> Vec<usize> {
    let units = extent / 16;
    (0..=parts).map(|i| i * units / parts * 16).collect()
}

pub fn make_tile_grid(
    width: usize,
    height: usize,
    cols: usize,
    rows: usize,
) -> Result<TileGrid, CodecError> {
    if width == 0 || height == 0 || !width.is_multiple_of(16) || !height.is_multiple_of(16) {
        return Err(CodecError::InvalidGrid(format!(
            "frame {width}x{height} must be nonzero multiples of 16"
        )));
    }
    if cols == 0 || cols > width / 16 || rows == 0 || rows > height / 16 {
        return Err(CodecError::InvalidGrid(format!(
            "{cols}x{rows} tiles do not fit a {width}x{height} frame (max {}x{})",
            width / 16,
            height / 16
        )));
    }
    Ok(TileGrid {
        width,
        height,
        cols,
        rows,
        col_bounds: bounds(width, cols),
        row_bounds: bounds(height, rows),
    })
}

impl TileGrid {
    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rectangle of the tile at raster `index`.
    pub fn rect(&self, index: usize) -> TileRect {
        let (r, c) = (index / self.cols, index % self.cols);
        TileRect {
            x: self.col_bounds[c],
            y: self.row_bounds[r],
            width: self.col_bounds[c + 1] - self.col_bounds[c],
            height: self.row_bounds[r + 1] - self.row_bounds[r],
        }
    }

    pub fn rects(&self) -> impl Iterator<Item = TileRect> + '_ {
        (0..self.len()).map(|i| self.rect(i))
    }

    /// Raster index of the tile containing luma pixel `(x, y)`.
    pub fn tile_at(&self, x: usize, y: usize) -> usize {
        let c = self.col_bounds[1..].partition_point(|&b| b <= x);
        let r = self.row_bounds[1..].partition_point(|&b| b <= y);
        r * self.cols + c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division() {
        let g = make_tile_grid(96, 64, 3, 2).unwrap();
        assert_eq!(g.col_bounds, [0, 32, 64, 96]);
        assert_eq!(g.row_bounds, [0, 32, 64]);
    }

    #[test]
    fn identity_grid() {
        let g = make_tile_grid(96, 64, 1, 1).unwrap();
        assert_eq!(g.col_bounds, [0, 96]);
        assert_eq!(g.row_bounds, [0, 64]);
    }

    #[test]
    fn floor_spacing() {
        let g = make_tile_grid(160, 96, 3, 2).unwrap();
        assert_eq!(g.col_bounds, [0, 48, 96, 160]);
        assert_eq!(g.row_bounds, [0, 48, 96]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(make_tile_grid(100, 64, 1, 1).is_err());
        assert!(make_tile_grid(96, 64, 7, 1).is_err());
        assert!(make_tile_grid(96, 64, 1, 0).is_err());
    }

    #[test]
    fn tile_lookup_matches_rects() {
        let g = make_tile_grid(256, 192, 16, 12).unwrap();
        for (i, r) in g.rects().enumerate() {
            assert_eq!(g.tile_at(r.x, r.y), i);
            assert_eq!(g.tile_at(r.x + r.width - 1, r.y + r.height - 1), i);
        }
    }
}
