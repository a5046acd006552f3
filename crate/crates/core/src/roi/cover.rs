use super::{RoiBox, SensitivityClass};
use crate::codec::TileGrid;

/// Labels each tile with the highest-ranked class whose (clipped) box touches
/// any of its pixels; untouched tiles get 0.
pub fn boxes_to_tile_classes(boxes: &[(RoiBox, SensitivityClass)], grid: &TileGrid) -> Vec<u8> {
    let mut best: Vec<Option<SensitivityClass>> = vec![None; grid.len()];
    for &(b, class) in boxes {
        let Some((x0, y0, x1, y1)) = b.clip(grid.width, grid.height) else {
            continue;
        };
        let first = grid.tile_at(x0, y0);
        let last = grid.tile_at(x1 - 1, y1 - 1);
        let (r0, c0) = (first / grid.cols, first % grid.cols);
        let (r1, c1) = (last / grid.cols, last % grid.cols);
        for r in r0..=r1 {
            for c in c0..=c1 {
                let slot = &mut best[r * grid.cols + c];
                if slot.is_none_or(|cur| cur.importance_rank() < class.importance_rank()) {
                    *slot = Some(class);
                }
            }
        }
    }
    best.into_iter().map(|c| c.map_or(0, |c| c.id())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::make_tile_grid;
    use proptest::prelude::*;
    use SensitivityClass::*;

    #[test]
    fn box_across_boundary() {
        let g = make_tile_grid(96, 64, 3, 2).unwrap();
        let labels = boxes_to_tile_classes(&[(RoiBox::new(30, 10, 10, 10), Face)], &g);
        assert_eq!(labels, [1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn no_boxes() {
        let g = make_tile_grid(96, 64, 3, 2).unwrap();
        assert_eq!(boxes_to_tile_classes(&[], &g), [0; 6]);
    }

    #[test]
    fn highest_rank_wins() {
        let g = make_tile_grid(96, 64, 3, 2).unwrap();
        let boxes = [
            (RoiBox::new(0, 0, 8, 8), IdCard),
            (RoiBox::new(10, 10, 4, 4), Face),
            (RoiBox::new(40, 0, 8, 8), IdCard),
            (RoiBox::new(40, 20, 8, 8), DisplayContent),
        ];
        assert_eq!(boxes_to_tile_classes(&boxes, &g), [1, 2, 0, 0, 0, 0]);
    }

    #[test]
    fn clipped_and_offscreen_boxes() {
        let g = make_tile_grid(96, 64, 3, 2).unwrap();
        let boxes = [
            (RoiBox::new(-10, 60, 15, 100), IdCard),
            (RoiBox::new(200, 0, 5, 5), Face),
        ];
        assert_eq!(boxes_to_tile_classes(&boxes, &g), [0, 0, 0, 3, 0, 0]);
    }

    fn arb_box() -> impl Strategy<Value = (RoiBox, SensitivityClass)> {
        (
            -20i64..180,
            -20i64..120,
            1i64..60,
            1i64..60,
            prop::sample::select(SensitivityClass::ALL.to_vec()),
        )
            .prop_map(|(x, y, w, h, c)| (RoiBox::new(x, y, w, h), c))
    }

    proptest! {
        #[test]
        fn cover_is_sound_and_complete(
            boxes in proptest::collection::vec(arb_box(), 0..5),
            cols in 1usize..=10,
            rows in 1usize..=6,
        ) {
            let g = make_tile_grid(160, 96, cols, rows).unwrap();
            let labels = boxes_to_tile_classes(&boxes, &g);
            let rank = |id: u8| SensitivityClass::from_id(id).map_or(0, |c| c.importance_rank());
            // every box pixel lands in a tile of rank >= its class
            for (b, c) in &boxes {
                if let Some((x0, y0, x1, y1)) = b.clip(160, 96) {
                    for y in y0..y1 {
                        for x in x0..x1 {
                            prop_assert!(rank(labels[g.tile_at(x, y)]) >= c.importance_rank());
                        }
                    }
                }
            }
            // every labeled tile overlaps a box of exactly that class
            for (i, &l) in labels.iter().enumerate() {
                if l == 0 { continue; }
                let r = g.rect(i);
                let hit = boxes.iter().any(|(b, c)| {
                    c.id() == l && b.clip(160, 96).is_some_and(|(x0, y0, x1, y1)| {
                        x0 < r.x + r.width && r.x < x1 && y0 < r.y + r.height && r.y < y1
                    })
                });
                prop_assert!(hit);
            }
        }
    }
}
