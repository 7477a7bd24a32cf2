//! The `sphiou` command line.
//!
//! Exit codes: 0 success, 2 bad input (flags, files, ranges), 3 class
//! mismatch between detections and ground truth, 4 unreadable or
//! unwritable output.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::criteria::{CriterionId, ErpImageSpec, DEFAULT_MC_SAMPLES};
use crate::detector::{decode, radius, render_gt, GtAnnotation, HeatmapMode, HeatmapTensor, RenderOptions, DEFAULT_TOP_K};
use crate::eval::{
    self, bench, compare_criteria, evaluate, random_pairs, AngleUnit, EvalConfig, EvalError, FovRange,
};
use crate::geometry::SphericalRect;
use crate::render::{render_png, render_svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CLASS_MISMATCH: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    ClassMismatch(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::ClassMismatch(_) => EXIT_CLASS_MISMATCH,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Unit {
    Radians,
    Degrees,
}

impl From<Unit> for AngleUnit {
    fn from(u: Unit) -> Self {
        match u {
            Unit::Radians => AngleUnit::Radians,
            Unit::Degrees => AngleUnit::Degrees,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    AsPrinted,
    Squared,
}

#[derive(Debug, Parser)]
#[command(name = "sphiou", version, about = "Spherical-rectangle IoU, baseline criteria, detector targets and AP evaluation")]
pub struct Cli {
    /// Unit of angles given on the command line and in headerless files.
    #[arg(long, global = true, value_enum, default_value_t = Unit::Radians)]
    pub angle_unit: Unit,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// IoU of two boxes.
    Iou(IouArgs),
    /// Criteria comparison table over box pairs and ERP resolutions.
    Compare(CompareArgs),
    /// AP, AP50 and AP75 of detections against ground truth.
    Eval(EvalArgs),
    /// Splat radius for a box and IoU threshold.
    Radius(RadiusArgs),
    /// Median time per IoU for each criterion.
    Bench(BenchArgs),
    /// Plot ground-truth boundaries on an ERP canvas (SVG or PNG).
    Render(RenderArgs),
    /// Write the target heatmap tensor of one image.
    Gt(GtArgs),
    /// Decode a heatmap tensor into JSON-lines detections.
    Decode(DecodeArgs),
}

#[derive(Debug, Args)]
pub struct IouArgs {
    /// First box as θ,φ,α,β.
    #[arg(long, allow_hyphen_values = true)]
    pub b1: String,
    /// Second box as θ,φ,α,β.
    #[arg(long, allow_hyphen_values = true)]
    pub b2: String,
    #[arg(long, default_value = "unbiased")]
    pub criterion: String,
    /// One line per criterion.
    #[arg(long)]
    pub all: bool,
    /// ERP grid of the pixel-space criteria.
    #[arg(long, default_value = "1024x512")]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// JSON-lines file of {"b1": [θ,φ,α,β], "b2": [...]} pairs.
    #[arg(long, conflicts_with = "random")]
    pub pairs: Option<PathBuf>,
    /// Use this many random pairs instead of a file.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "8192x4096,10240x5120,12288x6144")]
    pub resolutions: String,
    /// Comma-separated criteria; defaults to the six table columns.
    #[arg(long)]
    pub criteria: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub det: PathBuf,
    #[arg(long, default_value = "unbiased")]
    pub criterion: String,
    #[arg(long, default_value = "1024x512")]
    pub grid: String,
    #[arg(long, default_value_t = 100)]
    pub max_dets: usize,
    /// Comma-separated IoU thresholds; defaults to 0.50:0.05:0.95.
    #[arg(long)]
    pub thresholds: Option<String>,
    /// Warn instead of failing when a detected class has no ground truth.
    #[arg(long)]
    pub allow_class_mismatch: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.7)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "8192x4096")]
    pub resolutions: String,
    #[arg(long, default_value = "unbiased,planar,circle,polygon,sphzone,montecarlo,integral")]
    pub criteria: String,
    /// Exit 3 unless the analytical IoU is at least this many times faster
    /// than the integral on the largest grid.
    #[arg(long)]
    pub min_speedup: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub gt: PathBuf,
    /// Only this image; all boxes of the file otherwise.
    #[arg(long)]
    pub image_id: Option<String>,
    #[arg(long, default_value = "1024x512")]
    pub image_size: String,
    /// `.png` writes a PNG, anything else SVG.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GtArgs {
    #[arg(long)]
    pub gt: PathBuf,
    /// Image whose boxes are rendered; required when the file has several.
    #[arg(long)]
    pub image_id: Option<String>,
    #[arg(long, default_value = "256x128")]
    pub image_size: String,
    /// Number of classes; one more than the largest class id by default.
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::AsPrinted)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.7)]
    pub t: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Tensor written by `gt` or by a network exporter.
    #[arg(long)]
    pub tensor: PathBuf,
    #[arg(long, default_value = "image")]
    pub image_id: String,
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    pub top_k: usize,
}

fn input(msg: impl std::fmt::Display) -> CliError {
    CliError::Input(msg.to_string())
}

fn parse_grid(s: &str, flag: &str) -> Result<ErpImageSpec, CliError> {
    s.parse().map_err(|e| input(format!("--{flag}: {e}")))
}

fn parse_grids(s: &str, flag: &str) -> Result<Vec<ErpImageSpec>, CliError> {
    s.split(',').map(|g| parse_grid(g.trim(), flag)).collect()
}

fn parse_criterion(s: &str) -> Result<CriterionId, CliError> {
    s.parse().map_err(|e| input(format!("--criterion: {e}")))
}

/// `θ,φ,α,β` in `unit`; errors name the flag and the field.
pub fn parse_box(s: &str, flag: &str, unit: AngleUnit) -> Result<SphericalRect, CliError> {
    let names = ["theta", "phi", "alpha", "beta"];
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(input(format!("--{flag}: expected θ,φ,α,β, got {s:?}")));
    }
    let mut v = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        let x: f64 = p
            .parse()
            .map_err(|_| input(format!("--{flag}: {} = {p:?} is not a number", names[i])))?;
        v[i] = match unit {
            AngleUnit::Radians => x,
            AngleUnit::Degrees => x.to_radians(),
        };
    }
    SphericalRect::wrapped(v[0], v[1], v[2], v[3]).map_err(|e| input(format!("--{flag}: {e}")))
}

fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "n/a".into()
    } else {
        format!("{v:?}")
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Parses `args` (program name first) and runs the command, writing the
/// result to `--output` or `stdout`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(&cli, stderr) {
        Ok(text) => {
            let written = match &cli.output {
                Some(path) => File::create(path)
                    .and_then(|f| {
                        let mut w = BufWriter::new(f);
                        w.write_all(text.as_bytes())?;
                        w.flush()
                    })
                    .map_err(|e| io_err(path, e)),
                None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the parsed command and returns what it prints.
pub fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<String, CliError> {
    let unit: AngleUnit = cli.angle_unit.into();
    match &cli.command {
        Command::Iou(a) => cmd_iou(a, unit),
        Command::Compare(a) => cmd_compare(a, unit),
        Command::Eval(a) => cmd_eval(a, unit, stderr),
        Command::Radius(a) => cmd_radius(a, unit),
        Command::Bench(a) => cmd_bench(a),
        Command::Render(a) => cmd_render(a, unit),
        Command::Gt(a) => cmd_gt(a, unit),
        Command::Decode(a) => cmd_decode(a),
    }
}

fn cmd_iou(a: &IouArgs, unit: AngleUnit) -> Result<String, CliError> {
    let b1 = parse_box(&a.b1, "b1", unit)?;
    let b2 = parse_box(&a.b2, "b2", unit)?;
    let grid = parse_grid(&a.grid, "grid")?;
    let criteria: Vec<CriterionId> = if a.all {
        let mut c = CriterionId::table_columns(grid).to_vec();
        c.push(CriterionId::MonteCarlo {
            n_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
        });
        c
    } else {
        vec![parse_criterion(&a.criterion)?]
    };
    let mut rows = Vec::new();
    for id in criteria {
        let v = match id.evaluate(&b1, &b2, grid) {
            Ok(v) => v,
            Err(e) if a.all => {
                log::warn!("{id}: {e}");
                f64::NAN
            }
            Err(e) => return Err(input(format!("{id}: {e}"))),
        };
        rows.push((id, v));
    }
    Ok(match a.format {
        Format::Json => {
            let m: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(id, v)| (id.to_string(), serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into)))
                .collect();
            to_json(&m)
        }
        Format::Csv => {
            let mut s = String::from("criterion,label,iou\n");
            for (id, v) in &rows {
                s += &format!("{id},{},{}\n", id.label(), fmt_value(*v));
            }
            s
        }
        Format::Text if !a.all => format!("{}\n", fmt_value(rows[0].1)),
        Format::Text => rows
            .iter()
            .map(|(id, v)| format!("{:<14}{:<24}{}\n", id.label(), id.to_string(), fmt_value(*v)))
            .collect(),
    })
}

fn cmd_compare(a: &CompareArgs, unit: AngleUnit) -> Result<String, CliError> {
    let pairs = match (&a.pairs, a.random) {
        (Some(p), _) => eval::load_pairs(p, unit).map_err(|e| match e {
            EvalError::Io { .. } => input(e),
            other => input(format!("{}: {other}", p.display())),
        })?,
        (None, Some(n)) => random_pairs(n, a.seed, FovRange::default()),
        (None, None) => return Err(input("one of --pairs or --random is required")),
    };
    let resolutions = parse_grids(&a.resolutions, "resolutions")?;
    let criteria: Vec<CriterionId> = match &a.criteria {
        Some(s) => s.split(',').map(parse_criterion).collect::<Result<_, _>>()?,
        None => CriterionId::table_columns(resolutions[0]).to_vec(),
    };
    let table = compare_criteria(&pairs, &criteria, &resolutions)?;
    Ok(match a.format {
        Format::Text => table.to_text(),
        Format::Json => to_json(&table),
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    })
}

fn cmd_eval(a: &EvalArgs, unit: AngleUnit, stderr: &mut dyn Write) -> Result<String, CliError> {
    // a missing input file is an input error, not an output failure
    let load_err = |e: EvalError| input(e);
    let gts = eval::load_annotations_in(&a.gt, unit).map_err(load_err)?;
    let dets = eval::load_detections_in(&a.det, unit).map_err(load_err)?;
    for w in gts.warnings.iter().chain(&dets.warnings) {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let gt_classes: std::collections::BTreeSet<usize> =
        gts.by_image.values().flatten().map(|g| g.class_id).collect();
    let stray: std::collections::BTreeSet<usize> = dets
        .records
        .iter()
        .map(|d| d.class_id)
        .filter(|c| !gt_classes.contains(c))
        .collect();
    if !stray.is_empty() {
        let msg = format!("detected classes {stray:?} have no ground truth");
        if !a.allow_class_mismatch {
            return Err(CliError::ClassMismatch(msg));
        }
        let _ = writeln!(stderr, "warning: {msg}; their AP is undefined and excluded");
    }
    let mut config = EvalConfig {
        criterion: parse_criterion(&a.criterion)?,
        max_dets_per_image: a.max_dets,
        grid: parse_grid(&a.grid, "grid")?,
        ..EvalConfig::default()
    };
    if let Some(t) = &a.thresholds {
        config.iou_thresholds = t
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| input(format!("--thresholds: {x:?} is not a number"))))
            .collect::<Result<_, _>>()?;
    }
    let report = evaluate(&dets.records, &gts, &config)?;
    Ok(match a.format {
        Format::Json => report.to_json() + "\n",
        Format::Text | Format::Csv => report.to_text(),
    })
}

fn cmd_radius(a: &RadiusArgs, unit: AngleUnit) -> Result<String, CliError> {
    let conv = |x: f64| match unit {
        AngleUnit::Radians => x,
        AngleUnit::Degrees => x.to_radians(),
    };
    let (alpha, beta) = (conv(a.alpha), conv(a.beta));
    let pi = std::f64::consts::PI;
    if !(alpha > 0.0 && alpha <= pi) {
        return Err(input(format!("--alpha = {} is out of range (0, π]", a.alpha)));
    }
    if !(beta > 0.0 && beta <= pi) {
        return Err(input(format!("--beta = {} is out of range (0, π]", a.beta)));
    }
    if !(a.t > 0.0 && a.t <= 1.0) {
        return Err(input(format!("--t = {} is out of range (0, 1]", a.t)));
    }
    let r = radius(alpha, beta, a.t);
    Ok(match a.format {
        Format::Json => to_json(&r),
        _ => {
            let flag = |ok: bool| if ok { "valid" } else { "invalid" };
            format!(
                "gamma_a {:?} {}\ngamma_b {:?} {}\ngamma_c {:?} {}\ngamma   {:?}{}\n",
                r.gamma_a,
                flag(r.a_valid),
                r.gamma_b,
                flag(r.b_valid),
                r.gamma_c,
                flag(r.c_valid),
                r.gamma,
                if r.used_fallback { " (bisection)" } else { "" }
            )
        }
    })
}

fn cmd_bench(a: &BenchArgs) -> Result<String, CliError> {
    let resolutions = parse_grids(&a.resolutions, "resolutions")?;
    let criteria: Vec<CriterionId> = a.criteria.split(',').map(parse_criterion).collect::<Result<_, _>>()?;
    let pairs = random_pairs(a.pairs, a.seed, FovRange::default());
    let report = bench(&criteria, &pairs, &resolutions)?;
    let mut out = match a.format {
        Format::Json => to_json(&report),
        _ => report.to_text(),
    };
    if let Some(min) = a.min_speedup {
        match report.integral_speedup() {
            Some(x) if x >= min => out += &format!("PASS speedup {x:.1} >= {min}\n"),
            Some(x) => return Err(CliError::ClassMismatch(format!("FAIL speedup {x:.1} < {min}"))),
            None => return Err(input("--min-speedup needs both unbiased and integral in --criteria")),
        }
    }
    Ok(out)
}

fn select_boxes(gts: &eval::Annotations, image_id: Option<&str>) -> Result<Vec<GtAnnotation>, CliError> {
    match image_id {
        Some(id) => gts
            .by_image
            .get(id)
            .cloned()
            .ok_or_else(|| input(format!("--image-id: no boxes for {id:?}"))),
        None => Ok(gts.by_image.values().flatten().copied().collect()),
    }
}

fn cmd_render(a: &RenderArgs, unit: AngleUnit) -> Result<String, CliError> {
    let gts = eval::load_annotations_in(&a.gt, unit).map_err(input)?;
    let spec = parse_grid(&a.image_size, "image-size")?;
    let boxes = select_boxes(&gts, a.image_id.as_deref())?;
    let is_png = a.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if is_png {
        render_png(&boxes, spec).save(&a.out).map_err(|e| io_err(&a.out, e))?;
    } else {
        std::fs::write(&a.out, render_svg(&boxes, spec)).map_err(|e| io_err(&a.out, e))?;
    }
    Ok(format!("wrote {} boxes to {}\n", boxes.len(), a.out.display()))
}

fn cmd_gt(a: &GtArgs, unit: AngleUnit) -> Result<String, CliError> {
    let gts = eval::load_annotations_in(&a.gt, unit).map_err(input)?;
    let spec = parse_grid(&a.image_size, "image-size")?;
    if a.image_id.is_none() && gts.by_image.len() > 1 {
        return Err(input("--image-id is required when the file holds several images"));
    }
    let boxes = select_boxes(&gts, a.image_id.as_deref())?;
    let num_classes = a
        .classes
        .unwrap_or_else(|| boxes.iter().map(|b| b.class_id + 1).max().unwrap_or(1));
    if !(a.t > 0.0 && a.t <= 1.0) {
        return Err(input(format!("--t = {} is out of range (0, 1]", a.t)));
    }
    let opts = RenderOptions {
        iou_threshold: a.t,
        mode: match a.mode {
            Mode::AsPrinted => HeatmapMode::AsPrinted,
            Mode::Squared => HeatmapMode::Squared,
        },
        ..RenderOptions::default()
    };
    let tensor = render_gt(&boxes, spec, num_classes, opts).map_err(input)?;
    let file = File::create(&a.out).map_err(|e| io_err(&a.out, e))?;
    tensor.write_to(BufWriter::new(file)).map_err(|e| io_err(&a.out, e))?;
    Ok(format!(
        "wrote {spec} x {num_classes} class heatmap for {} boxes to {}\n",
        boxes.len(),
        a.out.display()
    ))
}

fn cmd_decode(a: &DecodeArgs) -> Result<String, CliError> {
    let file = File::open(&a.tensor).map_err(|e| input(format!("{}: {e}", a.tensor.display())))?;
    let tensor = HeatmapTensor::read_from(io::BufReader::new(file)).map_err(|e| input(format!("{}: {e}", a.tensor.display())))?;
    let records: Vec<eval::DetectionRecord> = decode(&tensor, a.top_k)
        .into_iter()
        .map(|d| eval::DetectionRecord {
            image_id: a.image_id.clone(),
            class_id: d.class_id,
            score: d.score,
            bbox: d.bbox,
        })
        .collect();
    let mut buf = Vec::new();
    eval::write_detections(&mut buf, &records).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("sphiou").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn identical_boxes_print_one() {
        let (code, out, _) = run_str(&["iou", "--b1", "0,1.5708,0.5,0.5", "--b2", "0,1.5708,0.5,0.5"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1.0");
    }

    #[test]
    fn bad_field_is_named() {
        let (code, _, err) = run_str(&["iou", "--b1", "0,1.5708,-0.5,0.5", "--b2", "0,1.5708,0.5,0.5"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("b1") && err.contains("alpha"), "{err}");
        let (code, _, _) = run_str(&["iou", "--b1", "0,1.5708,0.5", "--b2", "0,1,1,1"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_str(&["nope"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn degrees_match_radians() {
        let (_, rad, _) = run_str(&["iou", "--b1", "1,1.2,0.5,0.4", "--b2", "1.1,1.25,0.6,0.3"]);
        let d = |x: f64| x.to_degrees().to_string();
        let b1 = [1.0, 1.2, 0.5, 0.4].map(d).join(",");
        let b2 = [1.1, 1.25, 0.6, 0.3].map(d).join(",");
        let (_, deg, _) = run_str(&["--angle-unit", "degrees", "iou", "--b1", &b1, "--b2", &b2]);
        let (r, g): (f64, f64) = (rad.trim().parse().unwrap(), deg.trim().parse().unwrap());
        assert!((r - g).abs() < 1e-12);
    }

    #[test]
    fn radius_at_full_threshold_is_zero() {
        let (code, out, _) = run_str(&["radius", "--alpha", "0.5", "--beta", "0.5", "--t", "1.0", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["gamma"].as_f64().unwrap().abs() < 1e-9);
        let (code, _, _) = run_str(&["radius", "--alpha", "4", "--beta", "0.5"]);
        assert_eq!(code, EXIT_INPUT);
    }
}
