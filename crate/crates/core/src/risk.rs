//! Bayes risk of multithreshold classifiers on a projection, the density
//! comparison rule `sign(f_+ − f_-)` turned into explicit thresholds, and
//! empirical error measures.

use serde::{Deserialize, Serialize};

use crate::error::{MelcError, Result};
use crate::geometry::{AffineMap1d, Label, LabeledDataset, UnitDirection};
use crate::kde::Kde1d;
use crate::objectives::{renyi_cross_entropy, ProjectedPair};

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const MIN_GRID_POINTS: usize = 64;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

/// Half-width of the quadrature window around the centers, in units of the
/// larger bandwidth.
pub const WINDOW_SIGMAS: f64 = 8.0;

/// Slack allowed by [`bound_check`].
pub const BOUND_SLACK: f64 = 1e-9;

/// Overlaps at or below this are treated as numerically separable.
pub const SEPARABLE_OVERLAP: f64 = 1e-300;

/// Trapezoid rule over uniformly spaced samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, .., last] => {
            let inner: f64 = values[1..values.len() - 1].iter().sum();
            step * (inner + 0.5 * (first + last))
        }
    }
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < MIN_GRID_POINTS {
        return Err(MelcError::InvalidArgument(format!(
            "grid_points must be at least {MIN_GRID_POINTS}, got {grid_points}"
        )));
    }
    Ok(())
}

/// `[min center − 8σmax, max center + 8σmax]`.
pub fn integration_window(p: &ProjectedPair) -> (f64, f64) {
    let (lo, hi) = p.center_range();
    let pad = WINDOW_SIGMAS * p.max_bandwidth();
    (lo - pad, hi + pad)
}

fn min_density_on(p: &ProjectedPair, lo: f64, hi: f64, grid_points: usize) -> (Vec<f64>, f64) {
    let step = (hi - lo) / (grid_points - 1) as f64;
    let fm = p.f_minus.eval_grid(lo, step, grid_points);
    let fp = p.f_plus.eval_grid(lo, step, grid_points);
    let mins = fm.iter().zip(&fp).map(|(a, b)| a.min(*b)).collect();
    (mins, step)
}

/// `∫ min(f_-, f_+)` over [`integration_window`] by the trapezoid rule.
pub fn overlap_integral(p: &ProjectedPair, grid_points: usize) -> Result<f64> {
    check_grid(grid_points)?;
    let (lo, hi) = integration_window(p);
    let (mins, step) = min_density_on(p, lo, hi, grid_points);
    Ok(trapezoid(&mins, step))
}

/// `∫_lo^hi min(f_-, f_+)` by the trapezoid rule.
pub fn overlap_integral_on(p: &ProjectedPair, lo: f64, hi: f64, grid_points: usize) -> Result<f64> {
    check_grid(grid_points)?;
    if !(hi > lo) {
        return Err(MelcError::InvalidArgument(format!(
            "empty interval [{lo}, {hi}]"
        )));
    }
    let (mins, step) = min_density_on(p, lo, hi, grid_points);
    Ok(trapezoid(&mins, step))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    /// `∫ min(f_-, f_+)`, in `[0, 2]`.
    pub overlap: f64,
    /// Balanced (½–½) error of the best multithreshold rule: `overlap / 2`.
    pub eaa_risk: f64,
    pub grid_points: usize,
}

impl RiskEstimate {
    pub fn from_overlap(overlap: f64, grid_points: usize) -> Self {
        Self {
            overlap,
            eaa_risk: overlap / 2.0,
            grid_points,
        }
    }
}

pub fn eaa_risk_of_pair(p: &ProjectedPair, grid_points: usize) -> Result<RiskEstimate> {
    Ok(RiskEstimate::from_overlap(
        overlap_integral(p, grid_points)?,
        grid_points,
    ))
}

/// Smallest balanced error reachable by a multithreshold rule on the
/// projection onto `v`, with Silverman bandwidths unless overridden.
pub fn eaa_bayes_risk_for_direction(
    data: &LabeledDataset,
    v: &UnitDirection,
    bandwidths: Option<(f64, f64)>,
    grid_points: usize,
) -> Result<RiskEstimate> {
    let p = ProjectedPair::from_dataset(data, v, bandwidths)?;
    eaa_risk_of_pair(&p, grid_points)
}

/// Piecewise-constant classifier on a one-dimensional projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultithresholdModel {
    direction: UnitDirection,
    thresholds: Vec<f64>,
    leftmost: Label,
    applied_map: AffineMap1d,
}

impl MultithresholdModel {
    pub fn new(
        direction: UnitDirection,
        thresholds: Vec<f64>,
        leftmost: Label,
        applied_map: AffineMap1d,
    ) -> Result<Self> {
        if thresholds.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(MelcError::InvalidArgument(
                "thresholds must be strictly increasing".into(),
            ));
        }
        if thresholds.iter().any(|t| !t.is_finite()) {
            return Err(MelcError::InvalidArgument("non-finite threshold".into()));
        }
        Ok(Self {
            direction,
            thresholds,
            leftmost,
            applied_map,
        })
    }

    pub fn direction(&self) -> &UnitDirection {
        &self.direction
    }

    /// Thresholds on the (mapped) projection axis.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn leftmost(&self) -> Label {
        self.leftmost
    }

    pub fn applied_map(&self) -> AffineMap1d {
        self.applied_map
    }

    /// Every region label inverted.
    pub fn flipped(&self) -> Self {
        Self {
            leftmost: self.leftmost.flipped(),
            ..self.clone()
        }
    }

    /// Label of a coordinate already on the model's axis.
    pub fn classify_projected(&self, t: f64) -> Label {
        let below = self.thresholds.partition_point(|&th| th < t);
        if below % 2 == 0 {
            self.leftmost
        } else {
            self.leftmost.flipped()
        }
    }

    pub fn classify(&self, x: &[f64]) -> Result<Label> {
        self.direction.check_dim(x.len())?;
        Ok(self.classify_projected(self.applied_map.apply(self.direction.dot(x))))
    }
}

fn density_gap(p: &ProjectedPair, x: f64) -> f64 {
    p.f_plus.eval(x) - p.f_minus.eval(x)
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Zero of `g = f_+ − f_-` inside `[a, b]`, where `g(a)` has sign `sa` and
/// `g(b)` the opposite sign.
fn bisect(p: &ProjectedPair, mut a: f64, mut b: f64, sa: i8, tol: f64) -> f64 {
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        match sign_of(density_gap(p, mid)) {
            0 => return mid,
            s if s == sa => a = mid,
            _ => b = mid,
        }
    }
    0.5 * (a + b)
}

/// Thresholds of `sign(f_+ − f_-)` on the pair's axis: sign changes of the
/// density gap on a `grid_points` grid over [`integration_window`], each
/// refined by bisection to width `refine_tol`. A run of exact zeros between
/// opposite signs puts the threshold at the run's midpoint.
pub fn build_multithreshold_model(
    p: &ProjectedPair,
    v: &UnitDirection,
    grid_points: usize,
    refine_tol: f64,
) -> Result<MultithresholdModel> {
    check_grid(grid_points)?;
    if !(refine_tol > 0.0) {
        return Err(MelcError::InvalidArgument(
            "refine_tol must be positive".into(),
        ));
    }
    let (lo, hi) = integration_window(p);
    let step = (hi - lo) / (grid_points - 1) as f64;
    let node = |k: usize| {
        if k + 1 == grid_points {
            hi
        } else {
            lo + k as f64 * step
        }
    };

    let mut thresholds = Vec::new();
    // last node with a nonzero sign
    let mut last: Option<(usize, i8)> = None;
    let mut first_sign = 0i8;
    for k in 0..grid_points {
        let s = sign_of(density_gap(p, node(k)));
        if s == 0 {
            continue;
        }
        match last {
            None => first_sign = s,
            Some((j, sj)) if sj != s => {
                let t = if j + 1 == k {
                    bisect(p, node(j), node(k), sj, refine_tol)
                } else {
                    0.5 * (node(j + 1) + node(k - 1))
                };
                thresholds.push(t);
            }
            _ => {}
        }
        last = Some((k, s));
    }
    thresholds.dedup_by(|b, a| !(*b > *a));
    let leftmost = if first_sign < 0 {
        Label::Minus
    } else {
        Label::Plus
    };
    MultithresholdModel::new(v.clone(), thresholds, leftmost, p.applied_map)
}

/// `½·(error rate on class −1) + ½·(error rate on class +1)`.
pub fn empirical_balanced_error(model: &MultithresholdModel, data: &LabeledDataset) -> Result<f64> {
    data.require_both_classes()?;
    let (n_minus, n_plus) = data.class_counts();
    let mut wrong = [0usize; 2];
    for (x, label) in data.iter() {
        if model.classify(x)? != label {
            wrong[(label == Label::Plus) as usize] += 1;
        }
    }
    Ok(0.5 * wrong[0] as f64 / n_minus as f64 + 0.5 * wrong[1] as f64 / n_plus as f64)
}

/// Prior-weighted error rate (plain misclassification rate) of `model`.
pub fn empirical_error_rate(model: &MultithresholdModel, data: &LabeledDataset) -> Result<f64> {
    let mut wrong = 0usize;
    for (x, label) in data.iter() {
        if model.classify(x)? != label {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / data.len() as f64)
}

/// Minimal balanced error of a single-threshold rule `sign(x − t)` or
/// `sign(t − x)` on the projected classes. Candidates are ±∞ and the midpoints
/// between consecutive distinct values.
pub fn best_single_threshold_error(minus: &[f64], plus: &[f64]) -> Result<f64> {
    if minus.is_empty() {
        return Err(MelcError::EmptyClass("class -1 has no points"));
    }
    if plus.is_empty() {
        return Err(MelcError::EmptyClass("class +1 has no points"));
    }
    let mut merged: Vec<(f64, bool)> = minus
        .iter()
        .map(|&x| (x, false))
        .chain(plus.iter().map(|&x| (x, true)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nm, np) = (minus.len() as f64, plus.len() as f64);

    // rule "+ to the right of t": with t below everything all minus are wrong
    let mut minus_right = minus.len();
    let mut plus_left = 0usize;
    let err = |mr: usize, pl: usize| 0.5 * mr as f64 / nm + 0.5 * pl as f64 / np;
    let mut e = err(minus_right, plus_left);
    let mut best = e.min(1.0 - e);
    let mut i = 0;
    while i < merged.len() {
        let x = merged[i].0;
        while i < merged.len() && merged[i].0 == x {
            if merged[i].1 {
                plus_left += 1;
            } else {
                minus_right -= 1;
            }
            i += 1;
        }
        e = err(minus_right, plus_left);
        best = best.min(e).min(1.0 - e);
    }
    Ok(best.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// `−ln ∫_0^1 min(f_-, f_+)`.
    pub lhs: f64,
    /// `½ H₂ˣ(f_-, f_+)`.
    pub rhs: f64,
    pub holds: bool,
    /// Overlap underflowed; the inequality is vacuous.
    pub separable: bool,
}

impl BoundCheck {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Checks `−ln ∫_0^1 min(f_-, f_+) ≥ ½·H₂ˣ` on a pair that has already been
/// mapped into the unit interval (see [`ProjectedPair::rescaled_to_unit`];
/// use `tail_k ≥ 5`).
pub fn bound_check(p: &ProjectedPair, grid_points: usize) -> Result<BoundCheck> {
    let overlap = overlap_integral_on(p, 0.0, 1.0, grid_points)?;
    let rhs = 0.5 * renyi_cross_entropy(p);
    if !(overlap > SEPARABLE_OVERLAP) {
        return Ok(BoundCheck {
            lhs: f64::INFINITY,
            rhs,
            holds: true,
            separable: true,
        });
    }
    let lhs = -overlap.ln();
    Ok(BoundCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - BOUND_SLACK,
        separable: false,
    })
}

/// Convenience for tests and reports: a pair of single-bandwidth KDEs.
pub fn pair_from_centers(
    minus: Vec<f64>,
    sigma_minus: f64,
    plus: Vec<f64>,
    sigma_plus: f64,
) -> Result<ProjectedPair> {
    Ok(ProjectedPair::new(
        Kde1d::new(minus, sigma_minus)?,
        Kde1d::new(plus, sigma_plus)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_normal_cdf(x: f64) -> f64 {
        0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
    }

    fn x_axis() -> UnitDirection {
        UnitDirection::from_angle(0.0)
    }

    #[test]
    fn overlap_of_identical_densities_is_one() {
        let p = pair_from_centers(vec![0.0, 1.0, 4.0], 0.5, vec![0.0, 1.0, 4.0], 0.5).unwrap();
        assert!((overlap_integral(&p, DEFAULT_GRID_POINTS).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn overlap_of_far_classes_vanishes() {
        let p = pair_from_centers(vec![0.0], 1.0, vec![100.0], 1.0).unwrap();
        assert!(overlap_integral(&p, DEFAULT_GRID_POINTS).unwrap() <= 1e-10);
    }

    #[test]
    fn overlap_of_unit_gaussians_two_apart() {
        let p = pair_from_centers(vec![0.0], 1.0, vec![2.0], 1.0).unwrap();
        let expected = 2.0 * std_normal_cdf(-1.0);
        assert!((expected - 0.317_310_5).abs() < 1e-7);
        assert!((overlap_integral(&p, DEFAULT_GRID_POINTS).unwrap() - expected).abs() < 1e-6);
    }

    #[test]
    fn grid_too_small_rejected() {
        let p = pair_from_centers(vec![0.0], 1.0, vec![2.0], 1.0).unwrap();
        assert!(overlap_integral(&p, 10).is_err());
    }

    #[test]
    fn risk_for_separated_and_identical_clouds() {
        let sep = LabeledDataset::new(
            vec![
                vec![-5.0, 0.1],
                vec![-4.0, -0.3],
                vec![4.0, 0.2],
                vec![5.0, 0.0],
            ],
            vec![Label::Minus, Label::Minus, Label::Plus, Label::Plus],
        )
        .unwrap();
        let r = eaa_bayes_risk_for_direction(&sep, &x_axis(), Some((0.1, 0.1)), 4096).unwrap();
        assert!(r.eaa_risk < 1e-6);
        assert_eq!(r.eaa_risk, r.overlap / 2.0);

        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![2.0, 1.0]];
        let same = LabeledDataset::new(
            pts.iter().chain(&pts).cloned().collect(),
            [[Label::Minus; 3], [Label::Plus; 3]].concat(),
        )
        .unwrap();
        let r = eaa_bayes_risk_for_direction(&same, &x_axis(), None, 4096).unwrap();
        assert!((r.eaa_risk - 0.5).abs() < 1e-6);
    }

    #[test]
    fn risk_needs_two_points_without_override() {
        let d = LabeledDataset::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]],
            vec![Label::Minus, Label::Plus, Label::Plus],
        )
        .unwrap();
        let err = eaa_bayes_risk_for_direction(&d, &x_axis(), None, 4096).unwrap_err();
        assert!(err.to_string().contains("degenerate bandwidth"));
        assert!(eaa_bayes_risk_for_direction(&d, &x_axis(), Some((0.5, 0.5)), 4096).is_ok());
    }

    #[test]
    fn risk_invariant_under_label_swap() {
        let d = LabeledDataset::new(
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.3],
                vec![0.4, 2.0],
                vec![1.8, 1.1],
                vec![2.2, 0.1],
            ],
            vec![
                Label::Minus,
                Label::Plus,
                Label::Minus,
                Label::Plus,
                Label::Plus,
            ],
        )
        .unwrap();
        let v = UnitDirection::from_angle(0.7);
        let a = eaa_bayes_risk_for_direction(&d, &v, None, 4096).unwrap();
        let b = eaa_bayes_risk_for_direction(&d.with_flipped_labels(), &v, None, 4096).unwrap();
        assert!((a.overlap - b.overlap).abs() < 1e-15);
    }

    #[test]
    fn model_single_threshold_at_midpoint() {
        let p = pair_from_centers(vec![0.0], 1.0, vec![1.0], 1.0).unwrap();
        let m = build_multithreshold_model(&p, &x_axis(), 4096, 1e-10).unwrap();
        assert_eq!(m.thresholds().len(), 1);
        assert!((m.thresholds()[0] - 0.5).abs() < 1e-9);
        assert_eq!(m.leftmost(), Label::Minus);
    }

    #[test]
    fn model_far_clusters_one_threshold() {
        let p = pair_from_centers(vec![-10.0, -9.5, -9.0], 0.3, vec![9.0, 9.2], 0.3).unwrap();
        let m = build_multithreshold_model(&p, &x_axis(), 4096, 1e-10).unwrap();
        assert_eq!(m.thresholds().len(), 1);
        let t = m.thresholds()[0];
        assert!(-9.0 < t && t < 9.0);
    }

    #[test]
    fn model_alternating_clusters() {
        let p = pair_from_centers(vec![0.0, 3.0], 0.3, vec![1.5, 4.5], 0.3).unwrap();
        let m = build_multithreshold_model(&p, &x_axis(), 4096, 1e-10).unwrap();
        assert_eq!(m.thresholds().len(), 3);
        for (t, want) in m.thresholds().iter().zip([0.75, 2.25, 3.75]) {
            assert!((t - want).abs() < 1e-6, "{t}");
        }
    }

    #[test]
    fn classify_examples() {
        let v = x_axis();
        let m = MultithresholdModel::new(v.clone(), vec![0.5], Label::Minus, AffineMap1d::IDENTITY)
            .unwrap();
        assert_eq!(m.classify(&[0.0, 3.0]).unwrap(), Label::Minus);
        assert_eq!(m.classify(&[0.7, -1.0]).unwrap(), Label::Plus);
        let c = MultithresholdModel::new(v.clone(), vec![], Label::Plus, AffineMap1d::IDENTITY)
            .unwrap();
        assert_eq!(c.classify(&[-1e9, 0.0]).unwrap(), Label::Plus);
        assert!(m.classify(&[0.0]).is_err());
        assert!(
            MultithresholdModel::new(v, vec![1.0, 1.0], Label::Plus, AffineMap1d::IDENTITY)
                .is_err()
        );
    }

    #[test]
    fn classify_honors_applied_map() {
        let map = AffineMap1d::new(0.5, 1.0).unwrap();
        let m = MultithresholdModel::new(x_axis(), vec![1.5], Label::Minus, map).unwrap();
        // raw 0.9 -> 1.45, raw 1.1 -> 1.55
        assert_eq!(m.classify(&[0.9, 0.0]).unwrap(), Label::Minus);
        assert_eq!(m.classify(&[1.1, 0.0]).unwrap(), Label::Plus);
    }

    fn small_data() -> LabeledDataset {
        LabeledDataset::new(
            vec![
                vec![0.0, 0.0],
                vec![0.2, 1.0],
                vec![1.0, 0.0],
                vec![1.3, 0.0],
                vec![2.0, 1.0],
            ],
            vec![
                Label::Minus,
                Label::Minus,
                Label::Plus,
                Label::Plus,
                Label::Plus,
            ],
        )
        .unwrap()
    }

    #[test]
    fn balanced_error_examples() {
        let d = small_data();
        let perfect =
            MultithresholdModel::new(x_axis(), vec![0.6], Label::Minus, AffineMap1d::IDENTITY)
                .unwrap();
        assert_eq!(empirical_balanced_error(&perfect, &d).unwrap(), 0.0);
        let constant =
            MultithresholdModel::new(x_axis(), vec![], Label::Plus, AffineMap1d::IDENTITY).unwrap();
        assert_eq!(empirical_balanced_error(&constant, &d).unwrap(), 0.5);
        let some = MultithresholdModel::new(
            x_axis(),
            vec![0.1, 1.1],
            Label::Minus,
            AffineMap1d::IDENTITY,
        )
        .unwrap();
        let e = empirical_balanced_error(&some, &d).unwrap();
        let flipped = empirical_balanced_error(&some.flipped(), &d).unwrap();
        assert!((e + flipped - 1.0).abs() < 1e-15);
        let one_class = LabeledDataset::new(vec![vec![0.0, 0.0]], vec![Label::Plus]).unwrap();
        assert!(empirical_balanced_error(&perfect, &one_class).is_err());
    }

    /// Balanced error of `sign(x − t)` / `sign(t − x)` for one `t`.
    fn fixed_threshold_error(minus: &[f64], plus: &[f64], t: f64) -> f64 {
        let mr = minus.iter().filter(|&&x| x > t).count() as f64 / minus.len() as f64;
        let pl = plus.iter().filter(|&&x| x < t).count() as f64 / plus.len() as f64;
        let e = 0.5 * mr + 0.5 * pl;
        e.min(1.0 - e)
    }

    fn exhaustive_threshold_error(minus: &[f64], plus: &[f64]) -> f64 {
        let mut all: Vec<f64> = minus.iter().chain(plus).copied().collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        let mut cands = vec![f64::NEG_INFINITY, f64::INFINITY];
        cands.extend(all.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        cands
            .into_iter()
            .map(|t| fixed_threshold_error(minus, plus, t))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn single_threshold_examples() {
        assert_eq!(
            best_single_threshold_error(&[0.0, 1.0], &[2.0, 3.0]).unwrap(),
            0.0
        );
        let minus: Vec<f64> = (0..10).map(|i| 2.0 * i as f64).collect();
        let plus: Vec<f64> = (0..10).map(|i| 2.0 * i as f64 + 1.0).collect();
        let got = best_single_threshold_error(&minus, &plus).unwrap();
        assert_eq!(got, exhaustive_threshold_error(&minus, &plus));
        assert!((got - 0.45).abs() < 1e-15);
        for t in [-1.0, 3.5, 7.2, 30.0] {
            assert!(got <= fixed_threshold_error(&minus, &plus, t));
        }
        assert!(best_single_threshold_error(&[], &[1.0]).is_err());
    }

    #[test]
    fn bound_check_identical_single_centers() {
        let p = pair_from_centers(vec![0.3], 0.2, vec![0.3], 0.2)
            .unwrap()
            .rescaled_to_unit(5.0)
            .unwrap();
        // sigma becomes 1/10, ∫f² = 1/(2·0.1·√π)
        assert!((p.f_minus.bandwidth() - 0.1).abs() < 1e-15);
        let b = bound_check(&p, 4096).unwrap();
        let mass_outside = 2.0 * std_normal_cdf(-5.0);
        assert!((b.lhs - mass_outside).abs() < 1e-8, "{}", b.lhs);
        let rhs = 0.5 * (2.0 * 0.1 * std::f64::consts::PI.sqrt()).ln();
        assert!((b.rhs - rhs).abs() < 1e-12);
        assert!(b.rhs < 0.0 && b.holds && !b.separable);
    }

    #[test]
    fn bound_check_separated_pair() {
        let p = pair_from_centers(vec![0.0, 0.5], 0.3, vec![6.0, 6.4], 0.3)
            .unwrap()
            .rescaled_to_unit(5.0)
            .unwrap();
        let b = bound_check(&p, 4096).unwrap();
        assert!(b.holds && b.rhs > 5.0 && b.lhs > b.rhs);
        let far = pair_from_centers(vec![0.0], 0.01, vec![100.0], 0.01)
            .unwrap()
            .rescaled_to_unit(5.0)
            .unwrap();
        let b = bound_check(&far, 4096).unwrap();
        assert!(b.separable && b.holds);
    }
}
