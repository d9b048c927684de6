use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use melc::datasets::{self, DatasetSpec, SyntheticName};
use melc::objectives::{cip_with, IntegralMethod, ProjectedPair};
use melc::risk::{
    self, build_multithreshold_model, DEFAULT_GRID_POINTS, DEFAULT_REFINE_TOL, MIN_GRID_POINTS,
};
use melc::sweep::{self, Objective, SweepOptions, SweepRecord, DEFAULT_ANGLES};
use melc::{Label, LabeledDataset, UnitDirection};

#[derive(Parser)]
#[command(
    name = "melc",
    version,
    about = "Entropy-based linear classifier sweeps and reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic Gaussian benchmark as CSV
    Datagen(DatagenArgs),
    /// Evaluate every objective on a half-circle of directions
    Sweep(SweepArgs),
    /// One comparison row per dataset
    Table(TableArgs),
    /// Check the overlap bound at every sweep angle
    BoundCheck(BoundCheckArgs),
    /// Train a multithreshold classifier and predict a test set
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct DatagenArgs {
    #[arg(long)]
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points per mixture component
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
    /// Override the radial sigma of every component
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Label column for CSV input (0-based; default: last column)
    #[arg(long)]
    label_column: Option<usize>,
    /// Embed the data with its top-2 principal components first
    #[arg(long)]
    pca2: bool,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_ANGLES)]
    angles: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Fixed KDE bandwidth: one value for both classes, or `minus,plus`
    #[arg(long, value_parser = parse_sigma)]
    sigma: Option<(f64, f64)>,
}

impl GridArgs {
    fn validate(&self) -> Result<()> {
        if self.angles < 2 {
            bail!("--angles must be at least 2, got {}", self.angles);
        }
        if self.grid_points < MIN_GRID_POINTS {
            bail!(
                "--grid-points must be at least {MIN_GRID_POINTS}, got {}",
                self.grid_points
            );
        }
        Ok(())
    }

    fn options(&self) -> Result<SweepOptions> {
        self.validate()?;
        Ok(SweepOptions {
            angles: self.angles,
            grid_points: self.grid_points,
            bandwidths: self.sigma,
            method: IntegralMethod::Exact,
        })
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// JSON summary path (default: `--out` with a .json extension)
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    input_opts: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, num_args = 1.., required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    input_opts: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct BoundCheckArgs {
    #[arg(long)]
    input: PathBuf,
    /// Per-angle CSV report (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Window half-width beyond the extreme centers, in bandwidths
    #[arg(long, default_value_t = 5.0)]
    tail_k: f64,
    #[command(flatten)]
    input_opts: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Predictions CSV, one row per test point
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    summary: PathBuf,
    /// Random candidate directions when the data is not 2D
    #[arg(long, default_value_t = 500)]
    directions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    input_opts: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
}

fn parse_sigma(s: &str) -> Result<(f64, f64), String> {
    let parse = |t: &str| -> Result<f64, String> {
        let v: f64 = t
            .trim()
            .parse()
            .map_err(|_| format!("invalid sigma {t:?}"))?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(format!("sigma must be positive, got {v}"))
        }
    };
    match s.split_once(',') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|v| (v, v)),
    }
}

/// 12 significant digits, shortest form.
fn fmt(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    let mag = rounded.abs();
    if mag != 0.0 && !(1e-4..1e15).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// JSON numbers rounded like the CSV columns; non-finite values become null.
fn jnum(v: f64) -> serde_json::Value {
    if v.is_finite() {
        let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
        serde_json::json!(rounded)
    } else {
        serde_json::Value::Null
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn load(path: &Path, opts: &InputArgs) -> Result<LabeledDataset> {
    let data = datasets::load_any(path, opts.label_column)?;
    if opts.pca2 {
        return Ok(datasets::pca_top2(&data)?.embedded);
    }
    Ok(data)
}

fn load_planar(path: &Path, opts: &InputArgs) -> Result<LabeledDataset> {
    let data = load(path, opts)?;
    if data.dim() != 2 {
        bail!(
            "{} has dimension {}; sweeps need 2D data (pass --pca2 to embed first)",
            path.display(),
            data.dim()
        );
    }
    Ok(data)
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_datagen(a: &DatagenArgs) -> Result<()> {
    let name: SyntheticName = a.name.parse()?;
    let mut spec = DatasetSpec::new(name, a.seed, a.n)?;
    if let Some(s) = a.sigma {
        spec = spec.with_sigma(s)?;
    }
    let data = datasets::generate(&spec)?;
    datasets::save_csv(&data, &a.out, Some(&spec.metadata_line()))?;
    Ok(())
}

#[derive(Serialize)]
struct Extremum {
    objective: &'static str,
    kind: &'static str,
    index: usize,
    angle_rad: serde_json::Value,
    value: serde_json::Value,
}

fn extremum(
    records: &[SweepRecord],
    objective: Objective,
    name: &'static str,
    minimize: bool,
) -> Result<Extremum> {
    let best = sweep::select_best(records, objective, minimize)?;
    let index = records
        .iter()
        .position(|r| r.angle == best.angle)
        .unwrap_or(0);
    Ok(Extremum {
        objective: name,
        kind: if minimize { "argmin" } else { "argmax" },
        index,
        angle_rad: jnum(best.angle),
        value: jnum(objective.value(best)),
    })
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let opts = a.grid.options()?;
    let data = load_planar(&a.input, &a.input_opts)?;
    let records = sweep::sweep(&data, &opts)?;

    let mut csv =
        String::from("angle_rad,cip,sqrt_cip,h2x,dcs,hinge,hinge_bias,linear01,overlap,eaa_risk\n");
    for r in &records {
        let cols = [
            r.angle,
            r.cip,
            r.cip.sqrt(),
            r.h2x,
            r.dcs,
            r.hinge,
            r.hinge_bias,
            r.linear01,
            r.overlap,
            r.eaa_risk,
        ];
        let line: Vec<String> = cols.iter().map(|&v| fmt(v)).collect();
        let _ = writeln!(csv, "{}", line.join(","));
    }
    write_file(&a.out, &csv)?;

    let extrema = vec![
        extremum(&records, Objective::Cip, "cip", true)?,
        extremum(&records, Objective::H2x, "h2x", false)?,
        extremum(&records, Objective::Dcs, "dcs", false)?,
        extremum(&records, Objective::Hinge, "hinge", true)?,
        extremum(&records, Objective::Linear01, "linear01", true)?,
        extremum(&records, Objective::EaaRisk, "eaa_risk", true)?,
    ];
    let (minus, plus) = data.class_counts();
    let summary = serde_json::json!({
        "input": a.input.display().to_string(),
        "angles": opts.angles,
        "grid_points": opts.grid_points,
        "sigma": opts.bandwidths.map(|(m, p)| [jnum(m), jnum(p)]),
        "n_minus": minus,
        "n_plus": plus,
        "extrema": extrema,
    });
    let path = a
        .summary
        .clone()
        .unwrap_or_else(|| a.out.with_extension("json"));
    write_file(&path, &(serde_json::to_string_pretty(&summary)? + "\n"))
}

fn cmd_table(a: &TableArgs) -> Result<()> {
    let opts = a.grid.options()?;
    let mut csv =
        String::from("dataset,E_hinge,cos_hinge,E_melc,cos_melc,hinge_separable,melc_separable\n");
    for path in &a.input {
        let data = load_planar(path, &a.input_opts)?;
        let row = sweep::compare(&dataset_name(path), &data, &opts)
            .with_context(|| format!("comparing {}", path.display()))?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            row.dataset,
            fmt(row.e_hinge),
            fmt(row.cos_hinge),
            fmt(row.e_melc),
            fmt(row.cos_melc),
            row.hinge_separable,
            row.melc_separable
        );
    }
    write_file(&a.out, &csv)
}

/// Returns whether every angle satisfied the bound.
fn cmd_bound_check(a: &BoundCheckArgs) -> Result<bool> {
    a.grid.validate()?;
    if a.tail_k.is_nan() || a.tail_k <= 0.0 {
        bail!("--tail-k must be positive");
    }
    let data = load_planar(&a.input, &a.input_opts)?;
    data.require_both_classes()?;
    let grid = sweep::angle_grid(a.grid.angles)?;
    let checks = grid
        .par_iter()
        .map(|(_, v)| {
            let p =
                ProjectedPair::from_dataset(&data, v, a.grid.sigma)?.rescaled_to_unit(a.tail_k)?;
            Ok(risk::bound_check(&p, a.grid.grid_points)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = String::from("angle_rad,lhs,rhs,slack,holds,status\n");
    for ((angle, _), c) in grid.iter().zip(&checks) {
        let status = if c.separable {
            "separable"
        } else if c.holds {
            "ok"
        } else {
            "violated"
        };
        let _ = writeln!(
            report,
            "{},{},{},{},{},{}",
            fmt(*angle),
            fmt(c.lhs),
            fmt(c.rhs),
            fmt(c.slack()),
            c.holds,
            status
        );
    }
    let violations = checks.iter().filter(|c| !c.holds).count();
    let tightest = sweep::extremal_index(checks.iter().map(|c| c.slack()), true);
    match &a.out {
        Some(path) => write_file(path, &report)?,
        None => print!("{report}"),
    }
    match tightest {
        Some(i) if checks[i].slack().is_finite() => eprintln!(
            "min slack {} at angle {} rad; {} of {} angles violated",
            fmt(checks[i].slack()),
            fmt(grid[i].0),
            violations,
            checks.len()
        ),
        _ => eprintln!("all {} angles separable", checks.len()),
    }
    Ok(violations == 0)
}

fn cmd_classify(a: &ClassifyArgs) -> Result<()> {
    a.grid.validate()?;
    let raw_train = datasets::load_any(&a.train, a.input_opts.label_column)?;
    let raw_test = datasets::load_any(&a.test, a.input_opts.label_column)?;
    let (train, test) = if a.input_opts.pca2 {
        let pca = datasets::pca_top2(&raw_train)?;
        let test = pca.transform_dataset(&raw_test)?;
        (pca.embedded, test)
    } else {
        (raw_train, raw_test)
    };
    if test.dim() != train.dim() {
        bail!(
            "train has dimension {} but test has {}",
            train.dim(),
            test.dim()
        );
    }
    train.require_both_classes()?;

    let (direction, angle) = if train.dim() == 2 {
        let opts = a.grid.options()?;
        let curve = sweep::cip_curve(&train, &opts)?;
        let i = sweep::extremal_index(curve.iter().map(|c| c.1), true).context("empty sweep")?;
        (UnitDirection::from_angle(curve[i].0), Some(curve[i].0))
    } else {
        if a.directions == 0 {
            bail!("--directions must be positive");
        }
        let candidates = sweep::random_directions(train.dim(), a.directions, a.seed)?;
        let v =
            sweep::best_direction_by_h2x(&train, &candidates, a.grid.sigma, IntegralMethod::Exact)?;
        (v, None)
    };

    let pair = ProjectedPair::from_dataset(&train, &direction, a.grid.sigma)?;
    let model =
        build_multithreshold_model(&pair, &direction, a.grid.grid_points, DEFAULT_REFINE_TOL)?;

    let mut preds = String::from("prediction\n");
    for x in test.points() {
        let l = model.classify(x)?;
        preds.push_str(if l == Label::Plus { "1\n" } else { "-1\n" });
    }
    write_file(&a.out, &preds)?;

    let (sm, sp) = pair.bandwidths();
    let (tm, tp) = test.class_counts();
    let test_balanced = if tm > 0 && tp > 0 {
        jnum(risk::empirical_balanced_error(&model, &test)?)
    } else {
        serde_json::Value::Null
    };
    let summary = serde_json::json!({
        "angle_rad": angle.map(jnum),
        "direction": direction.as_slice().iter().map(|&v| jnum(v)).collect::<Vec<_>>(),
        "thresholds": model.thresholds().iter().map(|&v| jnum(v)).collect::<Vec<_>>(),
        "leftmost": if model.leftmost() == Label::Plus { 1 } else { -1 },
        "bandwidths": [jnum(sm), jnum(sp)],
        "cip": jnum(cip_with(&pair, IntegralMethod::Exact)),
        "train_balanced_error": jnum(risk::empirical_balanced_error(&model, &train)?),
        "test_balanced_error": test_balanced,
        "test_error_rate": jnum(risk::empirical_error_rate(&model, &test)?),
        "n_test": test.len(),
    });
    write_file(
        &a.summary,
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("MELC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("MELC_THREADS={v:?} is not a count"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Datagen(a) => cmd_datagen(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Table(a) => cmd_table(a)?,
        Command::BoundCheck(a) => return cmd_bound_check(a),
        Command::Classify(a) => cmd_classify(a)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
