use super::psnr::{psnr, region_error, SquaredError};
use super::report::{GlobalPsnr, MetricsReport};
use crate::bitstream::Container;
use crate::codec::FrameYUV;
use crate::crypt::{cipher_cost, encrypt_stream, CipherMode, MasterKey};
use crate::pipeline::{decode_sequence, encode_sequence, grid_for, stored_labels};
use crate::policy::{encrypt_set, DeviceTier, PolicyMatrix};
use crate::roi::{RoiTimeline, SensitivityClass};
use crate::Error;
use std::collections::BTreeSet;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub qp: u8,
    pub tiles: (usize, usize),
    pub fps: u8,
    pub salt: u32,
    pub master: MasterKey,
    pub repetitions: usize,
}

impl BenchConfig {
    pub fn new(qp: u8, tiles: (usize, usize)) -> Self {
        Self {
            qp,
            tiles,
            fps: 30,
            salt: 0,
            master: MasterKey::new([0x5a; 32]),
            repetitions: 3,
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Quality and cost fields of a report for an already encoded/encrypted clip,
/// seen by a viewer holding no keys. Timing fields are left at zero.
pub fn measure(
    source: &[FrameYUV],
    plain: &Container,
    encrypted: &Container,
    timeline: &RoiTimeline,
    classes: &BTreeSet<SensitivityClass>,
) -> Result<MetricsReport, Error> {
    let decoded = decode_sequence(encrypted)?;
    quality_report(source, &decoded, plain, encrypted, timeline, classes)
}

fn quality_report(
    source: &[FrameYUV],
    decoded: &[FrameYUV],
    plain: &Container,
    encrypted: &Container,
    timeline: &RoiTimeline,
    classes: &BTreeSet<SensitivityClass>,
) -> Result<MetricsReport, Error> {
    if source.len() != decoded.len() {
        return Err(super::MetricsError::DimensionMismatch(format!(
            "{} source frames vs {} decoded",
            source.len(),
            decoded.len()
        ))
        .into());
    }
    let grid = grid_for(encrypted)?;
    let per_frame = source
        .iter()
        .zip(decoded)
        .map(|(s, d)| psnr(&s.y, &d.y))
        .collect::<Result<Vec<_>, _>>()?;
    let labeled: BTreeSet<u8> = SensitivityClass::ALL.iter().map(|c| c.id()).collect();
    let mut roi = SquaredError::default();
    for ((s, d), labels) in source.iter().zip(decoded).zip(stored_labels(encrypted)) {
        roi.add(region_error(s, d, &labels, &grid, &labeled)?);
    }
    Ok(MetricsReport {
        psnr_y_global: GlobalPsnr::from_frames(per_frame),
        psnr_y_roi: (roi.count > 0).then(|| super::Db(roi.psnr())),
        compressed_bits: plain.payload_bits(),
        cipher_bits_bitstream: cipher_cost(plain, timeline, classes, CipherMode::BitstreamLevel)?,
        cipher_bits_pixel: cipher_cost(plain, timeline, classes, CipherMode::PixelLevel)?,
        encode_ms_per_frame: 0.0,
        encrypt_ms_per_frame: 0.0,
        decode_ms_per_frame: 0.0,
    })
}

/// Encodes, encrypts `encrypt_set(policy, tier)` and decodes without keys,
/// `repetitions` times, reporting median per-frame stage times.
pub fn bench(
    frames: &[FrameYUV],
    timeline: &RoiTimeline,
    config: &BenchConfig,
    policy: &PolicyMatrix,
    tier: DeviceTier,
) -> Result<MetricsReport, Error> {
    let classes = encrypt_set(policy, tier)?.clone();
    bench_classes(frames, timeline, config, &classes)
}

/// [`bench`] with an explicit class set.
pub fn bench_classes(
    frames: &[FrameYUV],
    timeline: &RoiTimeline,
    config: &BenchConfig,
    classes: &BTreeSet<SensitivityClass>,
) -> Result<MetricsReport, Error> {
    let reps = config.repetitions.max(1);
    let n = frames.len().max(1) as f64;
    let (mut enc_ms, mut cry_ms, mut dec_ms) = (Vec::new(), Vec::new(), Vec::new());
    let mut last = None;
    for _ in 0..reps {
        let t = Instant::now();
        let plain = encode_sequence(
            frames,
            timeline,
            config.qp,
            config.tiles,
            config.fps,
            config.salt,
        )?;
        enc_ms.push(t.elapsed().as_secs_f64() * 1e3 / n);

        let t = Instant::now();
        let encrypted = encrypt_stream(&plain, classes, &config.master)?;
        cry_ms.push(t.elapsed().as_secs_f64() * 1e3 / n);

        let t = Instant::now();
        let decoded = decode_sequence(&encrypted)?;
        dec_ms.push(t.elapsed().as_secs_f64() * 1e3 / n);

        last = Some((plain, encrypted, decoded));
    }
    let (plain, encrypted, decoded) = last.expect("at least one repetition");
    let mut report = quality_report(frames, &decoded, &plain, &encrypted, timeline, classes)?;
    report.encode_ms_per_frame = median(enc_ms);
    report.encrypt_ms_per_frame = median(cry_ms);
    report.decode_ms_per_frame = median(dec_ms);
    Ok(report)
}
