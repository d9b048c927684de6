//! Exhaustive sweep over directions in the plane.
//!
//! Every angle on a half-circle grid gets the full set of objectives: the
//! MELC family (CIP, `H₂ˣ`, `D_CS`), the Bayes risk of multithreshold rules
//! on that projection, and the linear baselines (best-bias hinge loss and the
//! best single-threshold 0/1 error). Angles are independent and evaluated in
//! parallel; the output is keyed by angle index.

use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets::standard_normal_pair;
use crate::error::{MelcError, Result};
use crate::geometry::{cosine_alignment, project, LabeledDataset, UnitDirection};
use crate::objectives::{
    best_bias_hinge, cip_with, renyi_entropy_with, IntegralMethod, ProjectedPair,
};
use crate::risk::{best_single_threshold_error, eaa_risk_of_pair, DEFAULT_GRID_POINTS};

pub const DEFAULT_ANGLES: usize = 360;

/// Minimal Bayes risks at or below this are reported as separable.
pub const SEPARABLE_RISK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub angles: usize,
    pub grid_points: usize,
    pub bandwidths: Option<(f64, f64)>,
    pub method: IntegralMethod,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            angles: DEFAULT_ANGLES,
            grid_points: DEFAULT_GRID_POINTS,
            bandwidths: None,
            method: IntegralMethod::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub angle: f64,
    pub direction: UnitDirection,
    pub cip: f64,
    pub h2x: f64,
    pub dcs: f64,
    /// Best-bias hinge loss over both orientations of the direction.
    pub hinge: f64,
    /// Position on the projection axis where the hinge-optimal linear score
    /// crosses zero.
    pub hinge_bias: f64,
    pub linear01: f64,
    pub overlap: f64,
    pub eaa_risk: f64,
}

/// Objective columns of a [`SweepRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Cip,
    H2x,
    Dcs,
    Hinge,
    Linear01,
    Overlap,
    EaaRisk,
}

impl Objective {
    pub fn value(self, r: &SweepRecord) -> f64 {
        match self {
            Objective::Cip => r.cip,
            Objective::H2x => r.h2x,
            Objective::Dcs => r.dcs,
            Objective::Hinge => r.hinge,
            Objective::Linear01 => r.linear01,
            Objective::Overlap => r.overlap,
            Objective::EaaRisk => r.eaa_risk,
        }
    }
}

/// Angles `kπ/n`, `k = 0..n`. Half a circle is enough since `v` and `−v`
/// give the same multithreshold family.
pub fn angle_grid(n: usize) -> Result<Vec<(f64, UnitDirection)>> {
    if n < 2 {
        return Err(MelcError::InvalidArgument(format!(
            "need at least 2 angles, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| {
            let a = k as f64 * PI / n as f64;
            (a, UnitDirection::from_angle(a))
        })
        .collect())
}

fn check_sweep_input(data: &LabeledDataset) -> Result<()> {
    if data.dim() != 2 {
        return Err(MelcError::DimensionMismatch {
            expected: 2,
            found: data.dim(),
        });
    }
    data.require_both_classes()
}

/// Hinge loss of the better orientation and the zero crossing of its score.
fn linear_hinge(minus: &[f64], plus: &[f64]) -> Result<(f64, f64)> {
    let (b_fwd, l_fwd) = best_bias_hinge(minus, plus)?;
    let neg = |xs: &[f64]| xs.iter().map(|x| -x).collect::<Vec<_>>();
    let (b_rev, l_rev) = best_bias_hinge(&neg(minus), &neg(plus))?;
    Ok(if l_rev < l_fwd {
        (l_rev, -b_rev)
    } else {
        (l_fwd, b_fwd)
    })
}

pub fn evaluate_direction(
    data: &LabeledDataset,
    angle: f64,
    direction: UnitDirection,
    opts: &SweepOptions,
) -> Result<SweepRecord> {
    let (minus, plus) = project(data, &direction)?;
    let (hinge, hinge_bias) = linear_hinge(&minus, &plus)?;
    let linear01 = best_single_threshold_error(&minus, &plus)?;
    let pair = ProjectedPair::from_projections(minus, plus, opts.bandwidths)?;
    let cip = cip_with(&pair, opts.method);
    let h2x = -cip.ln();
    let dcs = 2.0 * h2x
        - renyi_entropy_with(&pair.f_minus, opts.method)
        - renyi_entropy_with(&pair.f_plus, opts.method);
    let risk = eaa_risk_of_pair(&pair, opts.grid_points)?;
    Ok(SweepRecord {
        angle,
        direction,
        cip,
        h2x,
        dcs,
        hinge,
        hinge_bias,
        linear01,
        overlap: risk.overlap,
        eaa_risk: risk.eaa_risk,
    })
}

/// One record per angle of [`angle_grid`]`(opts.angles)`, in angle order.
pub fn sweep(data: &LabeledDataset, opts: &SweepOptions) -> Result<Vec<SweepRecord>> {
    check_sweep_input(data)?;
    angle_grid(opts.angles)?
        .into_par_iter()
        .map(|(a, v)| evaluate_direction(data, a, v, opts))
        .collect()
}

/// `(angle, cip)` per angle; the MELC objective alone, for large sweeps.
pub fn cip_curve(data: &LabeledDataset, opts: &SweepOptions) -> Result<Vec<(f64, f64)>> {
    check_sweep_input(data)?;
    angle_grid(opts.angles)?
        .into_par_iter()
        .map(|(a, v)| {
            let pair = ProjectedPair::from_dataset(data, &v, opts.bandwidths)?;
            Ok((a, cip_with(&pair, opts.method)))
        })
        .collect()
}

/// Index of the extremal value; ties go to the lowest index, NaNs are skipped.
pub fn extremal_index<I>(values: I, minimize: bool) -> Option<usize>
where
    I: IntoIterator<Item = f64>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, b)) => {
                if minimize {
                    v < b
                } else {
                    v > b
                }
            }
        };
        if better {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Extremal record for `objective`; ties go to the smallest angle.
pub fn select_best(
    records: &[SweepRecord],
    objective: Objective,
    minimize: bool,
) -> Result<&SweepRecord> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| records[a].angle.total_cmp(&records[b].angle));
    extremal_index(
        order.iter().map(|&i| objective.value(&records[i])),
        minimize,
    )
    .map(|k| &records[order[k]])
    .ok_or(MelcError::EmptyInput("no sweep records to select from"))
}

/// `(chosen − best) / best`.
pub fn relative_error(chosen_value: f64, best_value: f64) -> Result<f64> {
    if !(best_value > 0.0) {
        return Err(MelcError::ZeroBayesRisk);
    }
    Ok((chosen_value - best_value) / best_value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub dataset: String,
    /// Relative excess 0/1 error of the hinge-optimal direction, or the
    /// absolute excess when `hinge_separable`.
    pub e_hinge: f64,
    pub cos_hinge: f64,
    /// Relative excess Bayes risk of the `H₂ˣ`-optimal direction, or the
    /// absolute excess when `melc_separable`.
    pub e_melc: f64,
    pub cos_melc: f64,
    pub hinge_separable: bool,
    pub melc_separable: bool,
    pub hinge_angle: f64,
    pub linear01_angle: f64,
    pub melc_angle: f64,
    pub eaa_angle: f64,
}

/// Excess of `chosen` over `best`: relative when `best` is clearly positive,
/// absolute (flagged) otherwise.
fn excess(chosen: f64, best: f64) -> (f64, bool) {
    if best > SEPARABLE_RISK {
        (relative_error(chosen, best).unwrap_or(f64::NAN), false)
    } else {
        (chosen - best, true)
    }
}

/// Summary of a finished sweep in the shape of one comparison row.
pub fn compare_records(dataset: &str, records: &[SweepRecord]) -> Result<ComparisonRow> {
    let by_hinge = select_best(records, Objective::Hinge, true)?;
    let by_linear01 = select_best(records, Objective::Linear01, true)?;
    let by_h2x = select_best(records, Objective::H2x, false)?;
    let by_eaa = select_best(records, Objective::EaaRisk, true)?;
    let (e_hinge, hinge_separable) = excess(by_hinge.linear01, by_linear01.linear01);
    let (e_melc, melc_separable) = excess(by_h2x.eaa_risk, by_eaa.eaa_risk);
    Ok(ComparisonRow {
        dataset: dataset.to_string(),
        e_hinge,
        cos_hinge: cosine_alignment(&by_hinge.direction, &by_linear01.direction)?,
        e_melc,
        cos_melc: cosine_alignment(&by_h2x.direction, &by_eaa.direction)?,
        hinge_separable,
        melc_separable,
        hinge_angle: by_hinge.angle,
        linear01_angle: by_linear01.angle,
        melc_angle: by_h2x.angle,
        eaa_angle: by_eaa.angle,
    })
}

pub fn compare(dataset: &str, data: &LabeledDataset, opts: &SweepOptions) -> Result<ComparisonRow> {
    compare_records(dataset, &sweep(data, opts)?)
}

/// `count` directions drawn uniformly from the sphere in `R^dim`.
pub fn random_directions(dim: usize, count: usize, seed: u64) -> Result<Vec<UnitDirection>> {
    if dim == 0 {
        return Err(MelcError::InvalidArgument(
            "dimension must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut v = Vec::with_capacity(dim + 1);
        while v.len() < dim {
            let (a, b) = standard_normal_pair(rng.random(), rng.random());
            v.push(a);
            v.push(b);
        }
        v.truncate(dim);
        if let Ok(u) = UnitDirection::new(v) {
            out.push(u);
        }
    }
    Ok(out)
}

/// The candidate maximizing `H₂ˣ` (minimizing CIP); ties go to the earliest.
pub fn best_direction_by_h2x(
    data: &LabeledDataset,
    candidates: &[UnitDirection],
    bandwidths: Option<(f64, f64)>,
    method: IntegralMethod,
) -> Result<UnitDirection> {
    data.require_both_classes()?;
    let cips = candidates
        .par_iter()
        .map(|v| {
            Ok(cip_with(
                &ProjectedPair::from_dataset(data, v, bandwidths)?,
                method,
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    extremal_index(cips, true)
        .map(|i| candidates[i].clone())
        .ok_or(MelcError::EmptyInput("no candidate directions"))
}
