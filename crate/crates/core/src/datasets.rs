//! Synthetic Gaussian benchmarks, dataset files and a two-component PCA.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MelcError, Result};
use crate::geometry::{Label, LabeledDataset};

/// Identifies the sampling procedure; bump whenever generated bytes change.
pub const GENERATOR_VERSION: &str = "melc-datagen/1 (ChaCha8, Box-Muller)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticName {
    /// One radial Gaussian per class.
    TwoGauss,
    /// Four radial Gaussians on a line with alternating labels.
    FourLine,
    /// Four strongly overlapping radial Gaussians, two per class.
    FourMixed,
}

impl SyntheticName {
    pub const ALL: [SyntheticName; 3] = [Self::TwoGauss, Self::FourLine, Self::FourMixed];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::TwoGauss => "two-gauss",
            Self::FourLine => "four-line",
            Self::FourMixed => "four-mixed",
        }
    }

    /// `(mean, label)` per component and the shared radial sigma.
    fn components(self) -> (&'static [([f64; 2], Label)], f64) {
        use Label::{Minus, Plus};
        match self {
            Self::TwoGauss => (&[([0.0, 0.0], Minus), ([2.0, 2.0], Plus)], 1.0),
            Self::FourLine => (
                &[
                    ([0.0, 0.0], Minus),
                    ([1.5, 0.0], Plus),
                    ([3.0, 0.0], Minus),
                    ([4.5, 0.0], Plus),
                ],
                0.3,
            ),
            Self::FourMixed => (
                &[
                    ([0.0, 0.0], Minus),
                    ([1.0, 0.5], Plus),
                    ([0.5, 1.0], Minus),
                    ([1.5, 1.5], Plus),
                ],
                0.8,
            ),
        }
    }
}

impl FromStr for SyntheticName {
    type Err = MelcError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| MelcError::UnknownDataset {
                name: s.to_string(),
                valid: Self::ALL.map(Self::as_str).join(", "),
            })
    }
}

impl std::fmt::Display for SyntheticName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub name: SyntheticName,
    pub seed: u64,
    pub n_per_component: usize,
    /// Replaces the radial sigma of every component.
    pub sigma_override: Option<f64>,
}

impl DatasetSpec {
    pub fn new(name: SyntheticName, seed: u64, n_per_component: usize) -> Result<Self> {
        if n_per_component < 2 {
            return Err(MelcError::InvalidArgument(format!(
                "n_per_component must be at least 2, got {n_per_component}"
            )));
        }
        Ok(Self {
            name,
            seed,
            n_per_component,
            sigma_override: None,
        })
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(MelcError::InvalidArgument(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        self.sigma_override = Some(sigma);
        Ok(self)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_override.unwrap_or(self.name.components().1)
    }

    /// Metadata line written above generated CSV files.
    pub fn metadata_line(&self) -> String {
        let mut s = format!(
            "# name={} seed={} n={} generator={}",
            self.name, self.seed, self.n_per_component, GENERATOR_VERSION
        );
        if let Some(sigma) = self.sigma_override {
            let _ = write!(s, " sigma={sigma}");
        }
        s
    }
}

/// Box-Muller: two independent standard normals from two uniforms in `[0, 1)`.
pub fn standard_normal_pair(u1: f64, u2: f64) -> (f64, f64) {
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

/// Samples `n_per_component` points from each component in order.
pub fn generate(spec: &DatasetSpec) -> Result<LabeledDataset> {
    let (components, _) = spec.name.components();
    let sigma = spec.sigma();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = components.len() * spec.n_per_component;
    let mut values = Vec::with_capacity(2 * total);
    let mut labels = Vec::with_capacity(total);
    for &(mean, label) in components {
        for _ in 0..spec.n_per_component {
            let (z0, z1) = standard_normal_pair(rng.random(), rng.random());
            values.push(mean[0] + sigma * z0);
            values.push(mean[1] + sigma * z1);
            labels.push(label);
        }
    }
    LabeledDataset::from_flat(2, values, labels)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> MelcError + '_ {
    move |source| MelcError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn label_text(l: Label) -> &'static str {
    match l {
        Label::Minus => "-1",
        Label::Plus => "+1",
    }
}

/// CSV body: `x1,…,xd,label` header then one row per point. Floats use the
/// shortest representation that reads back to the same value.
pub fn to_csv_string(data: &LabeledDataset, metadata: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(m) = metadata {
        out.push_str(m);
        out.push('\n');
    }
    let header: Vec<String> = (1..=data.dim()).map(|i| format!("x{i}")).collect();
    let _ = writeln!(out, "{},label", header.join(","));
    for (x, l) in data.iter() {
        for v in x {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", label_text(l));
    }
    out
}

pub fn save_csv(data: &LabeledDataset, path: &Path, metadata: Option<&str>) -> Result<()> {
    fs::write(path, to_csv_string(data, metadata)).map_err(io_err(path))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> MelcError {
    MelcError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads `<label> <idx>:<val> …` lines (1-based indices, missing entries 0).
pub fn load_libsvm(path: &Path) -> Result<LabeledDataset> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_libsvm(&text, path)
}

pub fn parse_libsvm(text: &str, path: &Path) -> Result<LabeledDataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut dim = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().unwrap_or_default();
        let label: f64 = label_tok
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("bad label {label_tok:?}")))?;
        let mut row = Vec::new();
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| {
                parse_err(path, lineno, format!("expected index:value, got {tok:?}"))
            })?;
            let idx: usize = idx
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| parse_err(path, lineno, format!("bad index {idx:?}")))?;
            let val: f64 = val
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| parse_err(path, lineno, format!("bad value {val:?}")))?;
            dim = dim.max(idx);
            row.push((idx, val));
        }
        rows.push(row);
        labels.push(Label::from_value(label));
    }
    if rows.is_empty() {
        return Err(parse_err(path, 0, "no data lines"));
    }
    if dim == 0 {
        return Err(parse_err(path, 0, "no features"));
    }
    let mut values = vec![0.0; rows.len() * dim];
    for (r, row) in rows.iter().enumerate() {
        for &(idx, val) in row {
            values[r * dim + idx - 1] = val;
        }
    }
    LabeledDataset::from_flat(dim, values, labels)
}

/// Every coordinate is written, so the dimension survives a round trip.
pub fn to_libsvm_string(data: &LabeledDataset) -> String {
    let mut out = String::new();
    for (x, l) in data.iter() {
        out.push_str(label_text(l));
        for (i, v) in x.iter().enumerate() {
            let _ = write!(out, " {}:{v}", i + 1);
        }
        out.push('\n');
    }
    out
}

pub fn save_libsvm(data: &LabeledDataset, path: &Path) -> Result<()> {
    fs::write(path, to_libsvm_string(data)).map_err(io_err(path))
}

/// Reads a numeric CSV whose column `label_column` (0-based) holds the
/// labels; `#` lines are skipped and a non-numeric first row is a header.
pub fn load_csv(path: &Path, label_column: Option<usize>) -> Result<LabeledDataset> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_csv(&text, path, label_column)
}

/// With `label_column = None` the last column holds the labels.
pub fn parse_csv(text: &str, path: &Path, label_column: Option<usize>) -> Result<LabeledDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut width: Option<usize> = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Option<Vec<f64>> = record.iter().map(|c| c.parse::<f64>().ok()).collect();
        let row = match parsed {
            Some(row) => row,
            None if first => {
                first = false;
                continue;
            }
            None => return Err(parse_err(path, line, "non-numeric cell")),
        };
        first = false;
        let w = *width.get_or_insert(row.len());
        if row.len() != w {
            return Err(parse_err(
                path,
                line,
                format!("ragged row: expected {w} cells, found {}", row.len()),
            ));
        }
        if w < 2 {
            return Err(parse_err(
                path,
                line,
                "need at least one feature and a label",
            ));
        }
        let lc = label_column.unwrap_or(w - 1);
        if lc >= w {
            return Err(parse_err(
                path,
                line,
                format!("label column {lc} out of range"),
            ));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(parse_err(path, line, "non-finite cell"));
        }
        labels.push(Label::from_value(row[lc]));
        values.extend(
            row.iter()
                .enumerate()
                .filter(|&(i, _)| i != lc)
                .map(|(_, v)| *v),
        );
    }
    let Some(w) = width else {
        return Err(parse_err(path, 0, "no data rows"));
    };
    LabeledDataset::from_flat(w - 1, values, labels)
}

/// Picks the loader from the extension: `.csv` is CSV, anything else LIBSVM.
pub fn load_any(path: &Path, label_column: Option<usize>) -> Result<LabeledDataset> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => load_csv(path, label_column),
        _ => load_libsvm(path),
    }
}

pub const PCA_TOL: f64 = 1e-9;
pub const PCA_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Pca2 {
    pub embedded: LabeledDataset,
    pub components: [Vec<f64>; 2],
    pub eigenvalues: [f64; 2],
    pub mean: Vec<f64>,
}

impl Pca2 {
    /// Coordinates of a new point in the fitted basis.
    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.mean.len() {
            return Err(MelcError::DimensionMismatch {
                expected: self.mean.len(),
                found: x.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(x)
                    .zip(&self.mean)
                    .map(|((a, b), m)| a * (b - m))
                    .sum()
            })
            .collect())
    }

    pub fn transform_dataset(&self, data: &LabeledDataset) -> Result<LabeledDataset> {
        let points = data
            .points()
            .map(|x| self.transform(x))
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::new(points, data.labels().to_vec())
    }
}

fn mat_vec(m: &[f64], v: &[f64], out: &mut [f64]) {
    let d = v.len();
    for (i, o) in out.iter_mut().enumerate() {
        *o = m[i * d..(i + 1) * d]
            .iter()
            .zip(v)
            .map(|(a, b)| a * b)
            .sum();
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Leading eigenpair of the symmetric PSD matrix `m` by power iteration,
/// kept orthogonal to `against`. Stops once `‖Mv − λv‖ ≤ tol·scale`.
fn power_iteration(
    m: &[f64],
    d: usize,
    against: Option<&[f64]>,
    scale: f64,
) -> Result<(Vec<f64>, f64)> {
    let project_out = |v: &mut [f64]| {
        if let Some(u) = against {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
        }
    };
    // fixed, generic start vector
    let mut v: Vec<f64> = (0..d)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 1.618_033_988_749_895).fract())
        .collect();
    project_out(&mut v);
    if normalize(&mut v) == 0.0 {
        v = vec![0.0; d];
        v[d - 1] = 1.0;
        project_out(&mut v);
        normalize(&mut v);
    }
    let mut mv = vec![0.0; d];
    for _ in 0..PCA_MAX_ITER {
        mat_vec(m, &v, &mut mv);
        project_out(&mut mv);
        let lambda: f64 = mv.iter().zip(&v).map(|(a, b)| a * b).sum();
        let resid = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if resid <= PCA_TOL * scale {
            return Ok((v, lambda.max(0.0)));
        }
        if normalize(&mut mv) == 0.0 {
            return Ok((v, 0.0));
        }
        std::mem::swap(&mut v, &mut mv);
    }
    Err(MelcError::NonConvergence {
        max_iter: PCA_MAX_ITER,
    })
}

/// Sign convention: the largest-magnitude entry is positive.
fn canonical_sign(v: &mut [f64]) {
    let k = (0..v.len())
        .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap_or(0);
    if v[k] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Top-2 principal components by power iteration with deflation, and the
/// data expressed in that basis.
pub fn pca_top2(data: &LabeledDataset) -> Result<Pca2> {
    let d = data.dim();
    if d < 2 {
        return Err(MelcError::InvalidArgument(
            "PCA needs dimension >= 2".into(),
        ));
    }
    if data.len() < 3 {
        return Err(MelcError::InvalidArgument(
            "PCA needs at least 3 points".into(),
        ));
    }
    let n = data.len() as f64;
    let mut mean = vec![0.0; d];
    for x in data.points() {
        mean.iter_mut().zip(x).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut cov = vec![0.0; d * d];
    let mut centered = vec![0.0; d];
    for x in data.points() {
        centered
            .iter_mut()
            .zip(x)
            .zip(&mean)
            .for_each(|((c, v), m)| *c = v - m);
        for i in 0..d {
            for j in i..d {
                cov[i * d + j] += centered[i] * centered[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            cov[i * d + j] /= n;
            cov[j * d + i] = cov[i * d + j];
        }
    }
    let scale = cov
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let (mut v1, l1) = power_iteration(&cov, d, None, scale)?;
    canonical_sign(&mut v1);
    let mut deflated = cov.clone();
    for i in 0..d {
        for j in 0..d {
            deflated[i * d + j] -= l1 * v1[i] * v1[j];
        }
    }
    let (mut v2, l2) = power_iteration(&deflated, d, Some(&v1), scale)?;
    canonical_sign(&mut v2);
    let mut pca = Pca2 {
        embedded: data.clone(),
        components: [v1, v2],
        eigenvalues: [l1, l2],
        mean,
    };
    pca.embedded = pca.transform_dataset(data)?;
    Ok(pca)
}
