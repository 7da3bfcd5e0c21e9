use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use csmnn::evalsweep::{self, plot, Parameter, ParameterGrid, SweepSpec};
use csmnn::imagekit::io;
use csmnn::segmenter::{segment as run_segment, train};
use csmnn::synthgen;
use csmnn::{BinaryMask, Point, RasterImage, SegmenterConfig, SynthConfig};
use csmnn_service::Space;

use crate::output::{read_text, write_atomic, write_dir};
use crate::Failure;

fn invalid(msg: impl std::fmt::Display) -> Failure {
    Failure::Invalid(anyhow!("{msg}"))
}

/// Attaches the path to an error while keeping its exit category.
fn at(path: &Path) -> impl Fn(csmnn::Error) -> Failure + '_ {
    move |e| match Failure::from(e) {
        Failure::Invalid(e) => Failure::Invalid(e.context(path.display().to_string())),
        Failure::Io(e) => Failure::Io(e.context(path.display().to_string())),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SpaceArg {
    Native,
    Gray,
    Hsv,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Native => Space::Native,
            SpaceArg::Gray => Space::Gray,
            SpaceArg::Hsv => Space::Hsv,
        }
    }
}

fn load_image(path: &Path, space: SpaceArg) -> Result<RasterImage, Failure> {
    let img = io::read_image(path).map_err(at(path))?;
    Space::from(space).apply(img).map_err(at(path))
}

fn load_mask(path: &Path) -> Result<BinaryMask, Failure> {
    io::read_mask(path).map_err(at(path))
}

fn load_prototypes(path: &Path) -> Result<Vec<Point>, Failure> {
    csmnn::formats::parse_prototypes(&read_text(path)?).map_err(at(path))
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Invalid(e.into()))?;
    text.push('\n');
    Ok(text.into_bytes())
}

/// Reads an optional JSON object file, lays `overrides` over it and deserializes.
fn merged<T: DeserializeOwned + Serialize>(
    file: Option<&Path>,
    default: &T,
    overrides: &[(&str, Option<Value>)],
) -> Result<T, Failure> {
    let mut map: Map<String, Value> = match file {
        Some(path) => {
            let value: Value = serde_json::from_str(&read_text(path)?)
                .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            match value {
                Value::Object(m) => m,
                _ => {
                    return Err(invalid(format!(
                        "{}: expected a JSON object",
                        path.display()
                    )))
                }
            }
        }
        None => match serde_json::to_value(default).expect("config serializes") {
            Value::Object(m) => m,
            _ => unreachable!(),
        },
    };
    for (key, value) in overrides {
        if let Some(v) = value {
            map.insert((*key).to_string(), v.clone());
        }
    }
    serde_json::from_value(Value::Object(map))
        .map_err(|e| invalid(format!("invalid configuration: {e}")))
}

/// Segmentation parameters: an optional JSON file plus per-field flags.
#[derive(Args, Debug)]
pub struct SegOptions {
    /// JSON file with fields D, T, r, a.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Selectivity exponent.
    #[arg(long = "D")]
    selectivity: Option<f64>,
    /// Score threshold in [0, 1].
    #[arg(long = "T")]
    threshold: Option<f64>,
    /// Window radius in pixels.
    #[arg(long = "r")]
    radius: Option<u32>,
    /// Distance decay per pixel.
    #[arg(long = "a")]
    decay: Option<f64>,
}

impl SegOptions {
    fn resolve(&self, default: SegmenterConfig) -> Result<SegmenterConfig, Failure> {
        let f = |v: Option<f64>| v.map(Value::from);
        merged(
            self.config.as_deref(),
            &default,
            &[
                ("D", f(self.selectivity)),
                ("T", f(self.threshold)),
                ("r", self.radius.map(Value::from)),
                ("a", f(self.decay)),
            ],
        )
    }
}

#[derive(Args, Debug)]
pub struct SegmentArgs {
    /// Input image (PNG, PGM or PPM).
    #[arg(long)]
    image: PathBuf,
    /// JSON list of [row, col] prototype points.
    #[arg(long)]
    prototypes: PathBuf,
    #[command(flatten)]
    seg: SegOptions,
    /// Colour handling for RGB inputs.
    #[arg(long, value_enum, default_value = "native")]
    space: SpaceArg,
    /// Output mask PNG.
    #[arg(long)]
    out: PathBuf,
    /// Also write the trained neuron bank as JSON.
    #[arg(long)]
    bank_out: Option<PathBuf>,
}

pub fn segment(a: SegmentArgs) -> Result<(), Failure> {
    let config = a.seg.resolve(SegmenterConfig::default())?;
    let img = load_image(&a.image, a.space)?;
    let prototypes = load_prototypes(&a.prototypes)?;
    let bank = train(&img, &prototypes, config)?;
    let mask = run_segment(&bank, &img)?;
    let png = io::encode_mask_png(&mask)?;
    let bank_json = match &a.bank_out {
        Some(_) => Some(bank.to_json()?.into_bytes()),
        None => None,
    };
    write_atomic(&a.out, &png)?;
    if let (Some(path), Some(bytes)) = (&a.bank_out, bank_json) {
        write_atomic(path, &bytes)?;
    }
    eprintln!(
        "segmented {}x{} image: {} object pixels",
        mask.width(),
        mask.height(),
        mask.count_ones()
    );
    Ok(())
}

/// Generator parameters: an optional JSON file plus the most used flags.
#[derive(Args, Debug)]
pub struct SynthOptions {
    /// JSON file with SynthConfig fields (N, e, P, sigma, R, Q, mu_obj, ...).
    #[arg(long = "synth-config")]
    synth_config: Option<PathBuf>,
    /// Texture standard deviation in gray levels.
    #[arg(long)]
    amplitude: Option<f64>,
    /// Erosions of the gold standard before picking prototypes.
    #[arg(long)]
    margin: Option<u32>,
}

impl SynthOptions {
    fn resolve(&self, seed: Option<u64>) -> Result<SynthConfig, Failure> {
        let cfg: SynthConfig = merged(
            self.synth_config.as_deref(),
            &SynthConfig::default(),
            &[
                ("amplitude", self.amplitude.map(Value::from)),
                ("margin", self.margin.map(Value::from)),
                ("seed", seed.map(Value::from)),
            ],
        )?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Generator seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    synth: SynthOptions,
    /// Output directory for image.png, gold.png and prototypes.json.
    #[arg(long)]
    out: PathBuf,
}

pub fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let cfg = a.synth.resolve(a.seed)?;
    let sample = synthgen::generate(&cfg)?;
    let files = sample.files(&cfg)?;
    write_dir(&a.out, &files)?;
    eprintln!(
        "generated seed {}: {} object pixels, {} prototypes",
        cfg.seed,
        sample.gold.count_ones(),
        sample.prototypes.len()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Predicted mask, or a directory of masks.
    #[arg(long)]
    pred: PathBuf,
    /// Gold mask, or a directory of masks with matching file names.
    #[arg(long)]
    gold: PathBuf,
    /// JSON output: confusion counts and BA, or a run report for directories.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-image CSV (directory mode).
    #[arg(long)]
    csv: Option<PathBuf>,
}

pub fn evaluate(a: EvaluateArgs) -> Result<(), Failure> {
    if a.gold.is_dir() {
        if !a.pred.is_dir() {
            return Err(invalid("--gold is a directory, so --pred must be one too"));
        }
        let report = evalsweep::score_mask_dirs(&a.pred, &a.gold).map_err(at(&a.gold))?;
        let json = to_json(&report)?;
        if let Some(path) = &a.out {
            write_atomic(path, &json)?;
        }
        if let Some(path) = &a.csv {
            write_atomic(path, report.to_csv().as_bytes())?;
        }
        eprintln!(
            "{} masks scored, {} failed: BA {:.4} ± {:.4}",
            report.ba.len(),
            report.failed,
            report.mean,
            report.std_dev
        );
        return Ok(());
    }
    if a.csv.is_some() {
        return Err(invalid("--csv applies to directory inputs only"));
    }
    let pred = load_mask(&a.pred)?;
    let gold = load_mask(&a.gold)?;
    let counts = evalsweep::confusion(&pred, &gold)?;
    let ba = evalsweep::balanced_accuracy(&counts)?;
    if let Some(path) = &a.out {
        write_atomic(
            path,
            &to_json(&serde_json::json!({ "confusion": counts, "ba": ba }))?,
        )?;
    }
    eprintln!(
        "BA {ba:.6} (tp {}, fp {}, tn {}, fn {})",
        counts.tp, counts.fp, counts.tn, counts.fn_
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct SceneArgs {
    /// Input image.
    #[arg(long)]
    image: PathBuf,
    /// Gold standard mask.
    #[arg(long)]
    gold: PathBuf,
    /// JSON list of [row, col] prototype points.
    #[arg(long)]
    prototypes: PathBuf,
    #[arg(long, value_enum, default_value = "native")]
    space: SpaceArg,
}

impl SceneArgs {
    fn load(&self) -> Result<(RasterImage, BinaryMask, Vec<Point>), Failure> {
        Ok((
            load_image(&self.image, self.space)?,
            load_mask(&self.gold)?,
            load_prototypes(&self.prototypes)?,
        ))
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    seg: SegOptions,
    /// Parameter to vary: D, T, r or a.
    #[arg(long)]
    param: String,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// CSV output with columns parameter,value,ba.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG plot of the curve.
    #[arg(long)]
    svg: Option<PathBuf>,
}

pub fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let parameter: Parameter = a.param.parse()?;
    let spec = SweepSpec {
        parameter,
        values: a.values.clone(),
        base: a.seg.resolve(SegmenterConfig::default())?,
    };
    spec.configs()?;
    let (img, gold, prototypes) = a.scene.load()?;
    let points = evalsweep::sweep(&img, &gold, &prototypes, &spec)?;
    let csv = plot::sweep_csv(parameter, &points);
    let svg = plot::sweep_svg(parameter, &points);
    write_atomic(&a.out, csv.as_bytes())?;
    if let Some(path) = &a.svg {
        write_atomic(path, svg.as_bytes())?;
    }
    eprintln!("swept {} over {} values", parameter, points.len());
    Ok(())
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// JSON grid with arrays D, T, r, a (default brackets common optima).
    #[arg(long)]
    grid: Option<PathBuf>,
    /// JSON output with the best configuration and its BA.
    #[arg(long)]
    out: PathBuf,
}

pub fn gridsearch(a: GridArgs) -> Result<(), Failure> {
    let grid: ParameterGrid = match &a.grid {
        Some(path) => serde_json::from_str(&read_text(path)?)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?,
        None => ParameterGrid::default(),
    };
    if grid.is_empty() {
        return Err(invalid("every grid axis needs at least one value"));
    }
    let (img, gold, prototypes) = a.scene.load()?;
    let best = evalsweep::grid_search(&img, &gold, &prototypes, &grid)?;
    write_atomic(&a.out, &to_json(&best)?)?;
    eprintln!(
        "best of {}: D={} T={} r={} a={} with BA {:.4}",
        best.evaluated,
        best.config.selectivity,
        best.config.threshold,
        best.config.radius,
        best.config.decay,
        best.ba
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    /// Number of samples.
    #[arg(long, default_value_t = 30)]
    count: u64,
    /// Seed of the first sample; sample i uses seed-start + i.
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    #[command(flatten)]
    synth: SynthOptions,
    #[command(flatten)]
    seg: SegOptions,
    /// Re-draw prototypes for samples scoring below this BA.
    #[arg(long)]
    redraw_threshold: Option<f64>,
    /// JSON run report.
    #[arg(long)]
    out: PathBuf,
    /// Per-sample CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// SVG histogram of the balanced accuracies.
    #[arg(long)]
    svg: Option<PathBuf>,
}

pub fn benchmark(a: BenchmarkArgs) -> Result<(), Failure> {
    if a.count == 0 {
        return Err(invalid("--count must be at least 1"));
    }
    let base = a.synth.resolve(None)?;
    let seg = a.seg.resolve(SegmenterConfig::SYNTHETIC)?;
    let cfgs: Vec<SynthConfig> = (0..a.count)
        .map(|i| base.with_seed(a.seed_start.wrapping_add(i)))
        .collect();
    let report = evalsweep::run_benchmark(&cfgs, &seg, a.redraw_threshold)?;
    let json = to_json(&report)?;
    write_atomic(&a.out, &json)?;
    if let Some(path) = &a.csv {
        write_atomic(path, report.to_csv().as_bytes())?;
    }
    if let Some(path) = &a.svg {
        write_atomic(path, plot::histogram_svg(&report).as_bytes())?;
    }
    eprintln!(
        "{} samples, {} failed: BA {:.2}% ± {:.2}",
        report.ba.len(),
        report.failed,
        report.mean * 100.0,
        report.std_dev * 100.0
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Directory with the UI's static assets, served under /ui.
    #[arg(long)]
    ui_dir: Option<PathBuf>,
}

pub fn serve(a: ServeArgs) -> Result<(), Failure> {
    let addr = SocketAddr::new(a.host, a.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.into()))?;
    eprintln!("listening on http://{addr}");
    runtime
        .block_on(csmnn_service::serve(addr, a.ui_dir))
        .map_err(|e| Failure::Io(anyhow::Error::from(e).context(format!("cannot serve on {addr}"))))
}
