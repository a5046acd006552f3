//! Deterministic synthetic test sequences: a smooth gradient background with
//! textured objects, one of which moves at constant velocity.

use crate::codec::FrameYUV;
use crate::roi::{Keyframe, RoiBox, RoiTimeline, RoiTrack, SensitivityClass};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureSpec {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    /// Per-frame displacement of the face object.
    pub motion: (i64, i64),
}

impl FixtureSpec {
    /// 96x64, 30 frames, face moving one pixel right per frame.
    pub fn standard() -> Self {
        Self {
            seed: 1,
            width: 96,
            height: 64,
            frames: 30,
            motion: (1, 0),
        }
    }

    /// Object boxes at frame 0: face, display content, id card. Together they
    /// cover under 10% of the frame.
    pub fn objects(&self) -> [(SensitivityClass, RoiBox); 3] {
        let (w, h) = (self.width as i64, self.height as i64);
        [
            (
                SensitivityClass::Face,
                RoiBox::new(w / 12, h / 8, (w / 6).max(1), (h / 4).max(1)),
            ),
            (
                SensitivityClass::DisplayContent,
                RoiBox::new(w * 5 / 8, h * 9 / 16, (w / 6).max(1), (h * 3 / 16).max(1)),
            ),
            (
                SensitivityClass::IdCard,
                RoiBox::new(w * 3 / 8, h * 5 / 8, (w / 8).max(1), (h / 8).max(1)),
            ),
        ]
    }

    /// Renders the frames and the matching ROI timeline.
    pub fn render(&self) -> (Vec<FrameYUV>, RoiTimeline) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let objects = self.objects();
        let textures: Vec<Texture> = objects
            .iter()
            .enumerate()
            .map(|(i, (_, b))| Texture::new(&mut rng, b.w as usize, b.h as usize, i))
            .collect();

        let background = gradient_frame(self.width, self.height);
        let frames = (0..self.frames)
            .map(|f| {
                let mut frame = background.clone();
                for (i, (class, b)) in objects.iter().enumerate() {
                    let at = self.box_at(*class, *b, f);
                    textures[i].draw(&mut frame, at.x, at.y);
                }
                frame
            })
            .collect();

        let last = self.frames.saturating_sub(1);
        let tracks = objects
            .iter()
            .map(|&(class, b)| {
                let mut keyframes = vec![Keyframe { frame: 0, bbox: b }];
                if class == SensitivityClass::Face && last > 0 {
                    keyframes.push(Keyframe {
                        frame: last as u32,
                        bbox: self.box_at(class, b, last),
                    });
                }
                RoiTrack {
                    object_id: class.name().to_string(),
                    class,
                    keyframes,
                }
            })
            .collect();
        (
            frames,
            RoiTimeline {
                frame_count: self.frames as u32,
                tracks,
            },
        )
    }

    fn box_at(&self, class: SensitivityClass, b: RoiBox, frame: usize) -> RoiBox {
        if class == SensitivityClass::Face {
            RoiBox {
                x: b.x + self.motion.0 * frame as i64,
                y: b.y + self.motion.1 * frame as i64,
                ..b
            }
        } else {
            b
        }
    }
}

/// Smooth luma ramp with gentle chroma ramps.
pub fn gradient_frame(width: usize, height: usize) -> FrameYUV {
    let mut f = FrameYUV::filled(width, height, 128);
    let wd = (width.max(2) - 1) as f64;
    let hd = (height.max(2) - 1) as f64;
    for y in 0..height {
        for x in 0..width {
            f.y[y * width + x] =
                (32.0 + 160.0 * x as f64 / wd + 48.0 * y as f64 / hd).round() as u8;
        }
    }
    let (cw, ch) = (width / 2, height / 2);
    for y in 0..ch {
        for x in 0..cw {
            f.u[y * cw + x] = (112.0 + 32.0 * x as f64 / (cw.max(2) - 1) as f64).round() as u8;
            f.v[y * cw + x] = (144.0 - 32.0 * y as f64 / (ch.max(2) - 1) as f64).round() as u8;
        }
    }
    f
}

/// Amplitude of the per-pixel texture noise.
const NOISE: i32 = 8;

/// Luma/chroma noise pattern rigidly attached to an object.
struct Texture {
    w: usize,
    h: usize,
    luma: Vec<u8>,
    chroma: (u8, u8),
}

impl Texture {
    fn new(rng: &mut ChaCha8Rng, w: usize, h: usize, style: usize) -> Self {
        let luma = (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                let base: i32 = match style {
                    0 => 150,
                    1 => {
                        if (x / 2) % 2 == 0 {
                            70
                        } else {
                            200
                        }
                    }
                    _ => {
                        if y < h / 3 {
                            230
                        } else {
                            90
                        }
                    }
                };
                (base + rng.random_range(-NOISE..=NOISE)).clamp(0, 255) as u8
            })
            .collect();
        Self {
            w,
            h,
            luma,
            chroma: (rng.random_range(60..=200), rng.random_range(60..=200)),
        }
    }

    fn draw(&self, frame: &mut FrameYUV, x0: i64, y0: i64) {
        let (fw, fh) = (frame.width as i64, frame.height as i64);
        for ty in 0..self.h as i64 {
            for tx in 0..self.w as i64 {
                let (x, y) = (x0 + tx, y0 + ty);
                if x < 0 || y < 0 || x >= fw || y >= fh {
                    continue;
                }
                frame.y[(y * fw + x) as usize] = self.luma[(ty * self.w as i64 + tx) as usize];
                if x % 2 == 0 && y % 2 == 0 {
                    let ci = ((y / 2) * (fw / 2) + x / 2) as usize;
                    frame.u[ci] = self.chroma.0;
                    frame.v[ci] = self.chroma.1;
                }
            }
        }
    }
}
