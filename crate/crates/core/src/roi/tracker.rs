use super::{Keyframe, RoiBox, RoiError, RoiTrack, SensitivityClass};

/// Search radius of the displacement search, in pixels.
pub const SEARCH_RADIUS: i64 = 8;

/// Borrowed luma plane.
#[derive(Debug, Clone, Copy)]
pub struct LumaPlane<'a> {
    pub data: &'a [u8],
    pub width: usize,
    pub height: usize,
}

fn sad(a: LumaPlane, ab: RoiBox, b: LumaPlane, bb: RoiBox) -> u64 {
    let mut total = 0u64;
    for r in 0..ab.h as usize {
        let ra = (ab.y as usize + r) * a.width + ab.x as usize;
        let rb = (bb.y as usize + r) * b.width + bb.x as usize;
        total += a.data[ra..ra + ab.w as usize]
            .iter()
            .zip(&b.data[rb..rb + bb.w as usize])
            .map(|(&p, &q)| p.abs_diff(q) as u64)
            .sum::<u64>();
    }
    total
}

/// Candidate ordering key: (sad, |dy|, |dx|, dy, dx).
type Rank = (u64, i64, i64, i64, i64);

/// Follows `init` from `start_frame` to `end_frame` (inclusive), returning one
/// box per frame. Each step picks the in-bounds displacement in
/// `[-8, 8]^2` with the lowest SAD against the previous frame's box content;
/// ties prefer smaller |dy|, then smaller |dx|, then negative before positive.
pub fn track_box(
    frames: &[LumaPlane],
    start_frame: usize,
    init: RoiBox,
    end_frame: usize,
) -> Result<Vec<RoiBox>, RoiError> {
    if end_frame <= start_frame || end_frame >= frames.len() {
        return Err(RoiError::InvalidTimeline(format!(
            "tracking range {start_frame}..={end_frame} invalid for {} frames",
            frames.len()
        )));
    }
    let (w, h) = (frames[start_frame].width, frames[start_frame].height);
    if !init.fits(w, h) {
        return Err(RoiError::OutOfBounds(init));
    }
    let mut boxes = vec![init];
    let mut cur = init;
    for f in start_frame + 1..=end_frame {
        let (prev, next) = (frames[f - 1], frames[f]);
        let mut best: Option<(Rank, RoiBox)> = None;
        for dy in -SEARCH_RADIUS..=SEARCH_RADIUS {
            for dx in -SEARCH_RADIUS..=SEARCH_RADIUS {
                let cand = RoiBox {
                    x: cur.x + dx,
                    y: cur.y + dy,
                    ..cur
                };
                if !cand.fits(next.width, next.height) {
                    continue;
                }
                let key = (sad(prev, cur, next, cand), dy.abs(), dx.abs(), dy, dx);
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, cand));
                }
            }
        }
        // (0, 0) is always in bounds, so a winner exists
        cur = best.expect("zero displacement is a candidate").1;
        boxes.push(cur);
    }
    Ok(boxes)
}

/// Runs [`track_box`] and packages the result with one keyframe per frame.
pub fn track_object(
    frames: &[LumaPlane],
    start_frame: usize,
    init: RoiBox,
    end_frame: usize,
    object_id: &str,
    class: SensitivityClass,
) -> Result<RoiTrack, RoiError> {
    let boxes = track_box(frames, start_frame, init, end_frame)?;
    Ok(RoiTrack {
        object_id: object_id.to_string(),
        class,
        keyframes: boxes
            .into_iter()
            .enumerate()
            .map(|(i, bbox)| Keyframe {
                frame: (start_frame + i) as u32,
                bbox,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};

    fn noise_scene(seed: u64, w: usize, h: usize) -> Vec<u8> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..w * h).map(|_| rng.random()).collect()
    }

    /// Frame `k` shows the scene shifted right by `k * dx` and down by `k * dy`.
    fn shifted(scene: &[u8], w: usize, h: usize, k: i64, dx: i64, dy: i64) -> Vec<u8> {
        let mut out = vec![0u8; w * h];
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let sx = (x - k * dx).rem_euclid(w as i64);
                let sy = (y - k * dy).rem_euclid(h as i64);
                out[(y * w as i64 + x) as usize] = scene[(sy * w as i64 + sx) as usize];
            }
        }
        out
    }

    fn planes(frames: &[Vec<u8>], w: usize, h: usize) -> Vec<LumaPlane<'_>> {
        frames
            .iter()
            .map(|d| LumaPlane {
                data: d,
                width: w,
                height: h,
            })
            .collect()
    }

    #[test]
    fn static_scene_stays_put() {
        let scene = noise_scene(1, 64, 48);
        let frames = vec![scene.clone(); 5];
        let init = RoiBox::new(20, 10, 16, 16);
        let boxes = track_box(&planes(&frames, 64, 48), 0, init, 4).unwrap();
        assert!(boxes.iter().all(|&b| b == init));
    }

    #[test]
    fn recovers_translation() {
        let (w, h) = (96, 64);
        let scene = noise_scene(2, w, h);
        let frames: Vec<_> = (0..6).map(|k| shifted(&scene, w, h, k, 3, 0)).collect();
        let boxes = track_box(&planes(&frames, w, h), 0, RoiBox::new(10, 20, 16, 16), 5).unwrap();
        for (k, b) in boxes.iter().enumerate() {
            assert_eq!(b.x, 10 + 3 * k as i64);
            assert_eq!(b.y, 20);
        }
        let frames: Vec<_> = (0..4).map(|k| shifted(&scene, w, h, k, -2, 1)).collect();
        let boxes = track_box(&planes(&frames, w, h), 0, RoiBox::new(40, 20, 12, 12), 3).unwrap();
        assert_eq!(boxes[3], RoiBox::new(34, 23, 12, 12));
    }

    #[test]
    fn flat_frames_pick_zero_displacement() {
        let frames = vec![vec![77u8; 32 * 32]; 3];
        let boxes = track_box(&planes(&frames, 32, 32), 0, RoiBox::new(8, 8, 8, 8), 2).unwrap();
        assert!(boxes.iter().all(|&b| b == RoiBox::new(8, 8, 8, 8)));
    }

    #[test]
    fn init_out_of_bounds() {
        let frames = vec![vec![0u8; 32 * 32]; 3];
        let err = track_box(&planes(&frames, 32, 32), 0, RoiBox::new(30, 0, 8, 8), 2);
        assert!(matches!(err, Err(RoiError::OutOfBounds(_))));
        let err = track_box(&planes(&frames, 32, 32), 1, RoiBox::new(0, 0, 8, 8), 1);
        assert!(matches!(err, Err(RoiError::InvalidTimeline(_))));
    }

    #[test]
    fn track_object_keyframes() {
        let frames = vec![vec![5u8; 32 * 32]; 4];
        let t = track_object(
            &planes(&frames, 32, 32),
            1,
            RoiBox::new(0, 0, 4, 4),
            3,
            "obj",
            SensitivityClass::IdCard,
        )
        .unwrap();
        let idx: Vec<u32> = t.keyframes.iter().map(|k| k.frame).collect();
        assert_eq!(idx, [1, 2, 3]);
    }
}
