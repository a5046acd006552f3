use super::{RoiError, SensitivityClass};
use serde::{Deserialize, Serialize};

/// Axis-aligned box in luma pixels. May extend past the frame; users clip it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoiBox {
    pub x: i64,
    pub y: i64,
    pub w: i64,
    pub h: i64,
}

impl RoiBox {
    pub fn new(x: i64, y: i64, w: i64, h: i64) -> Self {
        Self { x, y, w, h }
    }

    /// Half-open pixel span `[x0, x1) x [y0, y1)` inside the frame, if any.
    pub fn clip(&self, width: usize, height: usize) -> Option<(usize, usize, usize, usize)> {
        let x0 = self.x.max(0);
        let y0 = self.y.max(0);
        let x1 = (self.x + self.w).min(width as i64);
        let y1 = (self.y + self.h).min(height as i64);
        (x1 > x0 && y1 > y0).then_some((x0 as usize, y0 as usize, x1 as usize, y1 as usize))
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.x >= 0
            && self.y >= 0
            && self.w >= 1
            && self.h >= 1
            && self.x + self.w <= width as i64
            && self.y + self.h <= height as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Keyframe {
    pub frame: u32,
    #[serde(flatten)]
    pub bbox: RoiBox,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoiTrack {
    pub object_id: String,
    pub class: SensitivityClass,
    pub keyframes: Vec<Keyframe>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoiTimeline {
    pub frame_count: u32,
    pub tracks: Vec<RoiTrack>,
}

/// `round_half_up(num / den)` for `den > 0`.
fn div_round_half_up(num: i64, den: i64) -> i64 {
    (2 * num + den).div_euclid(2 * den)
}

fn lerp(a: i64, b: i64, t: i64, span: i64) -> i64 {
    div_round_half_up(a * span + (b - a) * t, span)
}

impl RoiTrack {
    pub fn validate(&self) -> Result<(), RoiError> {
        if self.keyframes.is_empty() {
            return Err(RoiError::EmptyTrack(self.object_id.clone()));
        }
        if self.keyframes.windows(2).any(|w| w[0].frame >= w[1].frame) {
            return Err(RoiError::InvalidTimeline(format!(
                "track {:?}: keyframe indices must strictly increase",
                self.object_id
            )));
        }
        if let Some(k) = self.keyframes.iter().find(|k| k.bbox.w < 1 || k.bbox.h < 1) {
            return Err(RoiError::InvalidTimeline(format!(
                "track {:?}: empty box at frame {}",
                self.object_id, k.frame
            )));
        }
        Ok(())
    }

    /// Box at `frame`, interpolated linearly between the bracketing keyframes.
    pub fn interpolate_box(&self, frame: u32) -> Result<RoiBox, RoiError> {
        let ks = &self.keyframes;
        let first = ks
            .first()
            .ok_or_else(|| RoiError::EmptyTrack(self.object_id.clone()))?;
        let last = ks.last().unwrap();
        if frame <= first.frame {
            return Ok(first.bbox);
        }
        if frame >= last.frame {
            return Ok(last.bbox);
        }
        let i = ks.partition_point(|k| k.frame <= frame);
        let (a, b) = (&ks[i - 1], &ks[i]);
        let span = (b.frame - a.frame) as i64;
        let t = (frame - a.frame) as i64;
        Ok(RoiBox {
            x: lerp(a.bbox.x, b.bbox.x, t, span),
            y: lerp(a.bbox.y, b.bbox.y, t, span),
            w: lerp(a.bbox.w, b.bbox.w, t, span),
            h: lerp(a.bbox.h, b.bbox.h, t, span),
        })
    }
}

impl RoiTimeline {
    pub fn empty(frame_count: u32) -> Self {
        Self {
            frame_count,
            tracks: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), RoiError> {
        for t in &self.tracks {
            t.validate()?;
            if let Some(k) = t.keyframes.iter().find(|k| k.frame >= self.frame_count) {
                return Err(RoiError::InvalidTimeline(format!(
                    "track {:?}: keyframe {} beyond frame_count {}",
                    t.object_id, k.frame, self.frame_count
                )));
            }
        }
        Ok(())
    }

    /// Every track's box at `frame`.
    pub fn boxes_at(&self, frame: u32) -> Result<Vec<(RoiBox, SensitivityClass)>, RoiError> {
        self.tracks
            .iter()
            .map(|t| Ok((t.interpolate_box(frame)?, t.class)))
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self, RoiError> {
        let t: Self = serde_json::from_str(text).map_err(|e| RoiError::Json(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("timeline serializes")
    }
}
