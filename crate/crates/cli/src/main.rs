use arhe::codec::{read_raw_frames, write_raw_frames, FrameYUV};
use arhe::crypt::{decrypt_stream, encrypt_stream, KeyBundle, KeyFile, MasterKey};
use arhe::fixture::FixtureSpec;
use arhe::metrics::{bench, bench_classes, measure, BenchConfig};
use arhe::pipeline::{decode_sequence, encode_sequence};
use arhe::policy::{
    default_policy, encrypt_set, key_bundle_for, validate_policy, DeviceTier, PolicyMatrix,
};
use arhe::roi::{track_object, LumaPlane, RoiBox, RoiTimeline, SensitivityClass};
use arhe::{Container, MetricsReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Hierarchical ROI video encryption for AR display devices.
#[derive(Debug, Parser)]
#[command(name = "arhe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode raw 4:2:0 video into an .arhe container.
    Encode(EncodeArgs),
    /// Scramble sensitive tiles of a container.
    Encrypt(EncryptArgs),
    /// Unscramble the tiles whose class keys are available.
    Decrypt(DecryptArgs),
    /// Decode a container to raw 4:2:0 video.
    Decode(DecodeArgs),
    /// Print the key bundle a device tier receives.
    Keys(KeysArgs),
    /// Report quality and cipher cost of an encoded clip.
    Metrics(MetricsArgs),
    /// Time encode, encrypt and decode on raw video.
    Bench(BenchArgs),
    /// Track one object through raw video and emit an ROI timeline.
    Track(TrackArgs),
    /// Generate a deterministic synthetic clip and its ROI timeline.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
struct RawInput {
    /// Raw planar 4:2:0 input file.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Luma width in pixels (multiple of 16).
    #[arg(long)]
    width: usize,
    /// Luma height in pixels (multiple of 16).
    #[arg(long)]
    height: usize,
    /// Number of frames to read.
    #[arg(long)]
    frames: usize,
}

#[derive(Debug, Args)]
struct CodingArgs {
    /// Quantization parameter, 0 to 51.
    #[arg(long, default_value_t = 32)]
    qp: u8,
    /// Tile grid as COLSxROWS.
    #[arg(long, default_value = "1x1", value_parser = parse_tiles)]
    tiles: (usize, usize),
    /// Frame rate stored in the header.
    #[arg(long, default_value_t = 30)]
    fps: u8,
    /// Nonce salt; defaults to the first 4 bytes of SHA-256 over the input file.
    #[arg(long)]
    salt: Option<u32>,
    /// ROI timeline JSON; no tiles are labeled when absent.
    #[arg(long, value_name = "FILE")]
    roi: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PolicyArgs {
    /// Policy JSON; tiers it omits keep their default class sets.
    #[arg(long, value_name = "FILE")]
    policy: Option<PathBuf>,
    /// Treat policy nesting violations as errors instead of warnings.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Target {
    /// Encrypt the policy's class set for this device.
    #[arg(long, value_enum)]
    device: Option<Tier>,
    /// Encrypt this comma-separated class list (names or ids; empty for none).
    #[arg(long, value_name = "LIST")]
    classes: Option<String>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[command(flatten)]
    raw: RawInput,
    #[command(flatten)]
    coding: CodingArgs,
    /// Output container.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EncryptArgs {
    /// Input container.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// 32-byte master key as 64 lowercase hex digits.
    #[arg(long, value_name = "HEX")]
    master_key: String,
    #[command(flatten)]
    target: Target,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Output container.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DecryptArgs {
    /// Input container.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Key file to decrypt with.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["master_key", "device"])]
    keys: Option<PathBuf>,
    /// Master key; derives every class key unless --device narrows the bundle.
    #[arg(long, value_name = "HEX", required_unless_present = "keys")]
    master_key: Option<String>,
    /// Use the key bundle this device receives under the policy.
    #[arg(long, value_enum, requires = "master_key")]
    device: Option<Tier>,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Output container.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    /// Input container.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output raw 4:2:0 file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct KeysArgs {
    /// 32-byte master key as 64 lowercase hex digits.
    #[arg(long, value_name = "HEX")]
    master: String,
    /// Device tier whose bundle to print.
    #[arg(long, value_enum)]
    device: Tier,
    #[command(flatten)]
    policy: PolicyArgs,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Raw 4:2:0 source the container was encoded from.
    #[arg(long, value_name = "FILE")]
    source: PathBuf,
    /// Unencrypted container.
    #[arg(long, value_name = "FILE")]
    plain: PathBuf,
    /// Encrypted container, decoded without keys; defaults to --plain.
    #[arg(long, value_name = "FILE")]
    encrypted: Option<PathBuf>,
    /// ROI timeline used for pixel-level cipher cost.
    #[arg(long, value_name = "FILE")]
    roi: Option<PathBuf>,
    #[command(flatten)]
    target: Target,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    raw: RawInput,
    #[command(flatten)]
    coding: CodingArgs,
    #[command(flatten)]
    target: Target,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Master key; a fixed bench key is used when absent.
    #[arg(long, value_name = "HEX")]
    master_key: Option<String>,
    /// Timed runs per stage; the median is reported.
    #[arg(long, default_value_t = 3)]
    repetitions: usize,
    /// Report format.
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct TrackArgs {
    #[command(flatten)]
    raw: RawInput,
    /// Initial box as X,Y,W,H.
    #[arg(long = "box", value_name = "X,Y,W,H", value_parser = parse_box)]
    bbox: RoiBox,
    /// Frame holding the initial box.
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Last frame to track; defaults to the final frame.
    #[arg(long)]
    end: Option<usize>,
    /// Sensitivity class of the object.
    #[arg(long, default_value = "face")]
    class: SensitivityClass,
    /// Object identifier written to the timeline.
    #[arg(long, default_value = "object")]
    id: String,
    /// Output ROI JSON; printed to stdout when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FixtureArgs {
    /// RNG seed for textures.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Luma width in pixels.
    #[arg(long, default_value_t = 96)]
    width: usize,
    /// Luma height in pixels.
    #[arg(long, default_value_t = 64)]
    height: usize,
    /// Number of frames.
    #[arg(long, default_value_t = 30)]
    frames: usize,
    /// Per-frame face displacement as DX,DY.
    #[arg(long, default_value = "1,0", value_parser = parse_motion, allow_hyphen_values = true)]
    motion: (i64, i64),
    /// Output raw 4:2:0 file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Output ROI timeline JSON.
    #[arg(long, value_name = "FILE")]
    roi: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Tier {
    Projector,
    Smartphone,
    Glasses,
}

impl From<Tier> for DeviceTier {
    fn from(t: Tier) -> Self {
        match t {
            Tier::Projector => DeviceTier::Projector,
            Tier::Smartphone => DeviceTier::Smartphone,
            Tier::Glasses => DeviceTier::Glasses,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_tiles(s: &str) -> Result<(usize, usize), String> {
    let (c, r) = s.split_once(['x', 'X']).ok_or("expected COLSxROWS")?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((n(c)?, n(r)?))
}

fn parse_ints<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated integers"));
    }
    let mut out = [0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_motion(s: &str) -> Result<(i64, i64), String> {
    let [dx, dy] = parse_ints(s)?;
    Ok((dx, dy))
}

fn parse_box(s: &str) -> Result<RoiBox, String> {
    let [x, y, w, h] = parse_ints(s)?;
    Ok(RoiBox::new(x, y, w, h))
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(e: impl Display) -> Self {
        Failure::Data(e.to_string())
    }

    fn usage(e: impl Display) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Outcome {
    std::fs::write(path, bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn read_container(path: &Path) -> Result<Container, Failure> {
    Container::from_bytes(&read(path)?)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_container(path: &Path, c: &Container) -> Outcome {
    write(path, c.to_bytes().map_err(Failure::data)?)
}

fn master_key(hex: &str) -> Result<MasterKey, Failure> {
    MasterKey::from_hex(hex).map_err(Failure::usage)
}

fn read_timeline(path: Option<&Path>, frames: usize) -> Result<RoiTimeline, Failure> {
    match path {
        Some(p) => RoiTimeline::from_json(&read_text(p)?).map_err(Failure::data),
        None => Ok(RoiTimeline::empty(frames as u32)),
    }
}

impl RawInput {
    fn load(&self) -> Result<(Vec<u8>, Vec<FrameYUV>), Failure> {
        // dimension checks first so a bad --width is reported as such
        arhe::codec::make_tile_grid(self.width, self.height, 1, 1).map_err(Failure::data)?;
        let bytes = read(&self.input)?;
        let frames =
            read_raw_frames(&bytes, self.width, self.height, self.frames).map_err(Failure::data)?;
        Ok((bytes, frames))
    }
}

impl PolicyArgs {
    fn load(&self) -> Result<PolicyMatrix, Failure> {
        let matrix = match &self.policy {
            Some(p) => PolicyMatrix::from_json(&read_text(p)?).map_err(Failure::data)?,
            None => default_policy(),
        };
        let violations = validate_policy(&matrix);
        for v in &violations {
            eprintln!(
                "{}: policy encrypts {} for {} but not for less safe {}",
                if self.strict { "error" } else { "warning" },
                v.class.name(),
                v.safer.name(),
                v.less_safe.name()
            );
        }
        if self.strict && !violations.is_empty() {
            return Err(Failure::Data(format!(
                "{} policy violations",
                violations.len()
            )));
        }
        Ok(matrix)
    }
}

impl Target {
    /// Class set selected by --device (under `policy`) or --classes.
    fn classes(
        &self,
        policy: &PolicyMatrix,
    ) -> Result<Option<BTreeSet<SensitivityClass>>, Failure> {
        if let Some(t) = self.device {
            return Ok(Some(
                encrypt_set(policy, t.into())
                    .map_err(Failure::data)?
                    .clone(),
            ));
        }
        self.classes.as_deref().map(parse_class_list).transpose()
    }
}

fn parse_class_list(list: &str) -> Result<BTreeSet<SensitivityClass>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(Failure::usage))
        .collect()
}

fn default_salt(input: &[u8]) -> u32 {
    let digest = Sha256::digest(input);
    u32::from_be_bytes([digest[0], digest[1], digest[2], digest[3]])
}

fn print_report(report: &MetricsReport, format: Format) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Table => print!("{}", report.to_table()),
    }
}

fn encode(a: EncodeArgs) -> Outcome {
    let (bytes, frames) = a.raw.load()?;
    let timeline = read_timeline(a.coding.roi.as_deref(), frames.len())?;
    let salt = a.coding.salt.unwrap_or_else(|| default_salt(&bytes));
    let c = encode_sequence(
        &frames,
        &timeline,
        a.coding.qp,
        a.coding.tiles,
        a.coding.fps,
        salt,
    )
    .map_err(Failure::data)?;
    write_container(&a.out, &c)
}

fn encrypt(a: EncryptArgs) -> Outcome {
    let master = master_key(&a.master_key)?;
    let classes = match a.target.classes(&a.policy.load()?)? {
        Some(c) => c,
        None => return Err(Failure::usage("one of --device or --classes is required")),
    };
    let c = read_container(&a.input)?;
    let enc = encrypt_stream(&c, &classes, &master).map_err(Failure::data)?;
    write_container(&a.out, &enc)
}

fn decrypt(a: DecryptArgs) -> Outcome {
    let bundle = if let Some(path) = &a.keys {
        KeyFile::parse(&read_text(path)?)
            .map_err(Failure::data)?
            .bundle
    } else {
        let master = master_key(a.master_key.as_deref().unwrap_or_default())?;
        match a.device {
            Some(t) => {
                key_bundle_for(&a.policy.load()?, t.into(), &master).map_err(Failure::data)?
            }
            None => KeyBundle::full(&master),
        }
    };
    let c = read_container(&a.input)?;
    let dec = decrypt_stream(&c, &bundle).map_err(Failure::data)?;
    write_container(&a.out, &dec)
}

fn decode(a: DecodeArgs) -> Outcome {
    let c = read_container(&a.input)?;
    let frames = decode_sequence(&c).map_err(Failure::data)?;
    write(&a.out, write_raw_frames(&frames))
}

fn keys(a: KeysArgs) -> Outcome {
    let master = master_key(&a.master)?;
    let tier: DeviceTier = a.device.into();
    let bundle = key_bundle_for(&a.policy.load()?, tier, &master).map_err(Failure::data)?;
    let file = KeyFile {
        master: None,
        bundle,
    };
    print!(
        "{}",
        file.render(Some(&format!("arhe key bundle for {}", tier.name())))
    );
    Ok(())
}

fn metrics(a: MetricsArgs) -> Outcome {
    let plain = read_container(&a.plain)?;
    let encrypted = match &a.encrypted {
        Some(p) => read_container(p)?,
        None => plain.clone(),
    };
    let h = plain.header;
    let source = read_raw_frames(
        &read(&a.source)?,
        h.width as usize,
        h.height as usize,
        h.frame_count as usize,
    )
    .map_err(Failure::data)?;
    let timeline = read_timeline(a.roi.as_deref(), source.len())?;
    let classes = a
        .target
        .classes(&a.policy.load()?)?
        .unwrap_or_else(|| SensitivityClass::ALL.into_iter().collect());
    let report =
        measure(&source, &plain, &encrypted, &timeline, &classes).map_err(Failure::data)?;
    print_report(&report, a.format);
    Ok(())
}

fn run_bench(a: BenchArgs) -> Outcome {
    let (bytes, frames) = a.raw.load()?;
    let timeline = read_timeline(a.coding.roi.as_deref(), frames.len())?;
    let policy = a.policy.load()?;
    if a.repetitions == 0 {
        return Err(Failure::usage("--repetitions must be at least 1"));
    }
    let mut cfg = BenchConfig::new(a.coding.qp, a.coding.tiles);
    cfg.fps = a.coding.fps;
    cfg.salt = a.coding.salt.unwrap_or_else(|| default_salt(&bytes));
    cfg.repetitions = a.repetitions;
    if let Some(hex) = &a.master_key {
        cfg.master = master_key(hex)?;
    }
    let report = match (a.target.device, a.target.classes(&policy)?) {
        (Some(t), _) => bench(&frames, &timeline, &cfg, &policy, t.into()),
        (None, Some(classes)) => bench_classes(&frames, &timeline, &cfg, &classes),
        (None, None) => return Err(Failure::usage("one of --device or --classes is required")),
    }
    .map_err(Failure::data)?;
    print_report(&report, a.format);
    Ok(())
}

fn track(a: TrackArgs) -> Outcome {
    let (_, frames) = a.raw.load()?;
    let end = a.end.unwrap_or(frames.len().saturating_sub(1));
    let planes: Vec<LumaPlane> = frames
        .iter()
        .map(|f| LumaPlane {
            data: &f.y,
            width: f.width,
            height: f.height,
        })
        .collect();
    let track =
        track_object(&planes, a.start, a.bbox, end, &a.id, a.class).map_err(Failure::data)?;
    let timeline = RoiTimeline {
        frame_count: frames.len() as u32,
        tracks: vec![track],
    };
    let json = timeline.to_json();
    match &a.out {
        Some(p) => write(p, json),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn fixture(a: FixtureArgs) -> Outcome {
    let spec = FixtureSpec {
        seed: a.seed,
        width: a.width,
        height: a.height,
        frames: a.frames,
        motion: a.motion,
    };
    arhe::codec::make_tile_grid(a.width, a.height, 1, 1).map_err(Failure::data)?;
    let (frames, timeline) = spec.render();
    write(&a.out, write_raw_frames(&frames))?;
    write(&a.roi, timeline.to_json())
}

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("ARHE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "ARHE_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(Failure::data)
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Encode(a) => encode(a),
        Command::Encrypt(a) => encrypt(a),
        Command::Decrypt(a) => decrypt(a),
        Command::Decode(a) => decode(a),
        Command::Keys(a) => keys(a),
        Command::Metrics(a) => metrics(a),
        Command::Bench(a) => run_bench(a),
        Command::Track(a) => track(a),
        Command::Fixture(a) => fixture(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn every_flag_has_help_text() {
        for sub in Cli::command().get_subcommands() {
            assert!(
                sub.get_about().is_some(),
                "{} lacks a summary",
                sub.get_name()
            );
            for arg in sub.get_arguments() {
                assert!(
                    arg.get_help().is_some(),
                    "{} --{} lacks help",
                    sub.get_name(),
                    arg.get_id()
                );
            }
        }
    }

    #[test]
    fn value_parsers() {
        assert_eq!(parse_tiles("16x12"), Ok((16, 12)));
        assert!(parse_tiles("16").is_err());
        assert_eq!(parse_motion("-3,0"), Ok((-3, 0)));
        assert_eq!(parse_box("1,2,3,4"), Ok(RoiBox::new(1, 2, 3, 4)));
        assert!(parse_box("1,2,3").is_err());
    }

    #[test]
    fn class_lists() {
        assert!(matches!(parse_class_list(""), Ok(s) if s.is_empty()));
        let s = parse_class_list("face, 3").ok().unwrap();
        assert_eq!(
            s,
            BTreeSet::from([SensitivityClass::Face, SensitivityClass::IdCard])
        );
        assert!(matches!(parse_class_list("hat"), Err(Failure::Usage(_))));
    }
}
