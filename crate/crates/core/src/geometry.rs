//! Labeled point sets, unit directions, projections and the affine map that
//! squeezes a pair of projected densities into the unit interval.

use serde::{Deserialize, Serialize};

use crate::error::{MelcError, Result};

/// Tolerance on `‖v‖ − 1` accepted by [`UnitDirection::from_unit`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Minus,
    Plus,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Minus => -1.0,
            Label::Plus => 1.0,
        }
    }

    /// Anything `<= 0` is the negative class.
    pub fn from_value(value: f64) -> Label {
        if value > 0.0 {
            Label::Plus
        } else {
            Label::Minus
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Minus => Label::Plus,
            Label::Plus => Label::Minus,
        }
    }
}

/// Points in `R^dim` with a ±1 label each, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    values: Vec<f64>,
    labels: Vec<Label>,
    dim: usize,
}

impl LabeledDataset {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        let mut values = Vec::with_capacity(points.len() * dim);
        for p in &points {
            if p.len() != dim {
                return Err(MelcError::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            values.extend_from_slice(p);
        }
        Self::from_flat(dim, values, labels)
    }

    pub fn from_flat(dim: usize, values: Vec<f64>, labels: Vec<Label>) -> Result<Self> {
        if labels.is_empty() {
            return Err(MelcError::EmptyInput("dataset has no points"));
        }
        if dim == 0 {
            return Err(MelcError::InvalidArgument(
                "dimension must be positive".into(),
            ));
        }
        if values.len() != dim * labels.len() {
            return Err(MelcError::DimensionMismatch {
                expected: dim * labels.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(MelcError::InvalidArgument("non-finite coordinate".into()));
        }
        Ok(Self {
            values,
            labels,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[f64], Label)> + '_ {
        self.points().zip(self.labels.iter().copied())
    }

    /// `(count of class −1, count of class +1)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let plus = self.labels.iter().filter(|&&l| l == Label::Plus).count();
        (self.labels.len() - plus, plus)
    }

    /// Empirical class priors `(p(−), p(+))`.
    pub fn priors(&self) -> (f64, f64) {
        let (m, p) = self.class_counts();
        let n = self.len() as f64;
        (m as f64 / n, p as f64 / n)
    }

    pub fn require_both_classes(&self) -> Result<()> {
        match self.class_counts() {
            (0, _) => Err(MelcError::EmptyClass("class -1 has no points")),
            (_, 0) => Err(MelcError::EmptyClass("class +1 has no points")),
            _ => Ok(()),
        }
    }

    /// Same points with every label exchanged.
    pub fn with_flipped_labels(&self) -> Self {
        Self {
            values: self.values.clone(),
            labels: self.labels.iter().map(|l| l.flipped()).collect(),
            dim: self.dim,
        }
    }

    /// Applies `f` to every point, producing a dataset of dimension `new_dim`.
    pub fn map_points<F>(&self, new_dim: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let points = self.points().map(&mut f).collect::<Vec<_>>();
        if let Some(bad) = points.iter().find(|p| p.len() != new_dim) {
            return Err(MelcError::DimensionMismatch {
                expected: new_dim,
                found: bad.len(),
            });
        }
        Self::new(points, self.labels.clone())
    }
}

/// A direction on the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitDirection(Vec<f64>);

impl UnitDirection {
    /// Normalizes `components`; fails on the zero vector.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(MelcError::InvalidArgument("empty direction".into()));
        }
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(MelcError::InvalidArgument(
                "direction must be finite and nonzero".into(),
            ));
        }
        Ok(Self(components.into_iter().map(|x| x / norm).collect()))
    }

    /// Accepts `components` only when already unit-norm within [`UNIT_NORM_TOL`].
    pub fn from_unit(components: Vec<f64>) -> Result<Self> {
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if components.is_empty() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(MelcError::InvalidArgument(format!(
                "direction norm {norm} is not 1"
            )));
        }
        Ok(Self(components))
    }

    /// `(cos θ, sin θ)`.
    pub fn from_angle(theta: f64) -> Self {
        Self(vec![theta.cos(), theta.sin()])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    /// `⟨v, x⟩`; the caller guarantees matching lengths.
    #[inline]
    pub fn dot(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.0.len());
        self.0.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(MelcError::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Orientation-preserving affine map `x ↦ scale·x + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap1d {
    scale: f64,
    offset: f64,
}

impl AffineMap1d {
    pub const IDENTITY: AffineMap1d = AffineMap1d {
        scale: 1.0,
        offset: 0.0,
    };

    pub fn new(scale: f64, offset: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && offset.is_finite()) {
            return Err(MelcError::InvalidArgument(format!(
                "affine map needs finite positive scale, got scale={scale} offset={offset}"
            )));
        }
        Ok(Self { scale, offset })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.offset
    }

    #[inline]
    pub fn invert(&self, y: f64) -> f64 {
        (y - self.offset) / self.scale
    }

    pub fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.offset == 0.0
    }
}

impl Default for AffineMap1d {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Projects every point on `v`, splitting by class. Order inside each class
/// follows the dataset order.
pub fn project(data: &LabeledDataset, v: &UnitDirection) -> Result<(Vec<f64>, Vec<f64>)> {
    v.check_dim(data.dim())?;
    let (n_minus, n_plus) = data.class_counts();
    let mut minus = Vec::with_capacity(n_minus);
    let mut plus = Vec::with_capacity(n_plus);
    for (x, label) in data.iter() {
        let p = v.dot(x);
        match label {
            Label::Minus => minus.push(p),
            Label::Plus => plus.push(p),
        }
    }
    Ok((minus, plus))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitRescale {
    pub map: AffineMap1d,
    pub minus: Vec<f64>,
    pub plus: Vec<f64>,
}

/// Maps `[min c − k·σmax, max c + k·σmax]` onto `[0, 1]`, where `c` ranges
/// over both center lists. Bandwidths must afterwards be multiplied by
/// `map.scale()`.
pub fn unit_rescale(
    minus: &[f64],
    plus: &[f64],
    sigma_minus: f64,
    sigma_plus: f64,
    tail_k: f64,
) -> Result<UnitRescale> {
    if minus.is_empty() && plus.is_empty() {
        return Err(MelcError::EmptyInput("no centers to rescale"));
    }
    if !(sigma_minus >= 0.0 && sigma_plus >= 0.0) {
        return Err(MelcError::InvalidArgument(
            "bandwidths must be nonnegative".into(),
        ));
    }
    if !(tail_k > 0.0) {
        return Err(MelcError::InvalidArgument("tail_k must be positive".into()));
    }
    let (lo, hi) = minus
        .iter()
        .chain(plus)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
            (lo.min(c), hi.max(c))
        });
    let pad = tail_k * sigma_minus.max(sigma_plus);
    let (lo, hi) = (lo - pad, hi + pad);
    if !(hi > lo) {
        return Err(MelcError::DegenerateSupport);
    }
    let scale = 1.0 / (hi - lo);
    let map = AffineMap1d::new(scale, -lo * scale)?;
    let clamp = |x: f64| map.apply(x).clamp(0.0, 1.0);
    Ok(UnitRescale {
        map,
        minus: minus.iter().map(|&x| clamp(x)).collect(),
        plus: plus.iter().map(|&x| clamp(x)).collect(),
    })
}

/// `|⟨v1, v2⟩|`: `v` and `−v` describe the same multithreshold family.
pub fn cosine_alignment(v1: &UnitDirection, v2: &UnitDirection) -> Result<f64> {
    v1.check_dim(v2.dim())?;
    Ok(v1.dot(v2.as_slice()).abs().min(1.0))
}
