//! Per-direction objectives: cross information potential, Rényi quadratic
//! (cross) entropies, Cauchy-Schwarz divergence, the closed-form CIP of two
//! radial Gaussians and the hinge-loss baseline.

use std::f64::consts::PI;

use crate::error::{MelcError, Result};
use crate::geometry::{project, unit_rescale, AffineMap1d, LabeledDataset, UnitDirection};
use crate::kde::{cross_integral, cross_integral_grid, rescale_kde, self_integral, Kde1d};

/// How the pairwise Gaussian sums behind [`cip`] and [`renyi_entropy`] are
/// evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegralMethod {
    /// Closed-form double sum, `O(N_- N_+)`.
    #[default]
    Exact,
    /// Uniform-grid trapezoid rule, `O((N_- + N_+) · nodes)`; see
    /// [`cross_integral_grid`] for the error bound.
    Grid,
}

/// The two class densities on a common axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedPair {
    pub f_minus: Kde1d,
    pub f_plus: Kde1d,
    /// Map from the raw projection axis to the axis of `f_minus`/`f_plus`.
    pub applied_map: AffineMap1d,
}

impl ProjectedPair {
    pub fn new(f_minus: Kde1d, f_plus: Kde1d) -> Self {
        Self {
            f_minus,
            f_plus,
            applied_map: AffineMap1d::IDENTITY,
        }
    }

    /// Builds both KDEs from projected samples. Without an override each
    /// class gets its own Silverman bandwidth.
    pub fn from_projections(
        minus: Vec<f64>,
        plus: Vec<f64>,
        bandwidths: Option<(f64, f64)>,
    ) -> Result<Self> {
        if minus.is_empty() {
            return Err(MelcError::EmptyClass("class -1 has no points"));
        }
        if plus.is_empty() {
            return Err(MelcError::EmptyClass("class +1 has no points"));
        }
        let (f_minus, f_plus) = match bandwidths {
            Some((sm, sp)) => (Kde1d::new(minus, sm)?, Kde1d::new(plus, sp)?),
            None => (Kde1d::with_silverman(minus)?, Kde1d::with_silverman(plus)?),
        };
        Ok(Self::new(f_minus, f_plus))
    }

    pub fn from_dataset(
        data: &LabeledDataset,
        v: &UnitDirection,
        bandwidths: Option<(f64, f64)>,
    ) -> Result<Self> {
        let (minus, plus) = project(data, v)?;
        Self::from_projections(minus, plus, bandwidths)
    }

    /// `(σ_-, σ_+)`.
    pub fn bandwidths(&self) -> (f64, f64) {
        (self.f_minus.bandwidth(), self.f_plus.bandwidth())
    }

    pub fn max_bandwidth(&self) -> f64 {
        self.f_minus.bandwidth().max(self.f_plus.bandwidth())
    }

    /// Smallest and largest center over both classes.
    pub fn center_range(&self) -> (f64, f64) {
        let (a, b) = self.f_minus.center_range();
        let (c, d) = self.f_plus.center_range();
        (a.min(c), b.max(d))
    }

    /// Applies [`unit_rescale`] to both densities: the window
    /// `[min c − k·σmax, max c + k·σmax]` becomes `[0, 1]`.
    pub fn rescaled_to_unit(&self, tail_k: f64) -> Result<Self> {
        let r = unit_rescale(
            self.f_minus.centers(),
            self.f_plus.centers(),
            self.f_minus.bandwidth(),
            self.f_plus.bandwidth(),
            tail_k,
        )?;
        let m = r.map;
        let composed = AffineMap1d::new(
            m.scale() * self.applied_map.scale(),
            m.apply(self.applied_map.offset()),
        )?;
        Ok(Self {
            f_minus: rescale_kde(&self.f_minus, &m),
            f_plus: rescale_kde(&self.f_plus, &m),
            applied_map: composed,
        })
    }

    /// Same pair with the class roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            f_minus: self.f_plus.clone(),
            f_plus: self.f_minus.clone(),
            applied_map: self.applied_map,
        }
    }
}

/// Cross information potential `∫ f_- f_+`.
pub fn cip(p: &ProjectedPair) -> f64 {
    cip_with(p, IntegralMethod::Exact)
}

pub fn cip_with(p: &ProjectedPair, method: IntegralMethod) -> f64 {
    match method {
        IntegralMethod::Exact => cross_integral(&p.f_minus, &p.f_plus),
        IntegralMethod::Grid => cross_integral_grid(&p.f_minus, &p.f_plus),
    }
}

/// `H₂ˣ = −ln CIP`.
pub fn renyi_cross_entropy(p: &ProjectedPair) -> f64 {
    -cip(p).ln()
}

/// `H₂(f) = −ln ∫ f²`.
pub fn renyi_entropy(f: &Kde1d) -> f64 {
    renyi_entropy_with(f, IntegralMethod::Exact)
}

pub fn renyi_entropy_with(f: &Kde1d, method: IntegralMethod) -> f64 {
    let v = match method {
        IntegralMethod::Exact => self_integral(f),
        IntegralMethod::Grid => cross_integral_grid(f, f),
    };
    -v.ln()
}

/// `D_CS = 2H₂ˣ − H₂(f_-) − H₂(f_+)`.
pub fn cauchy_schwarz_divergence(p: &ProjectedPair) -> f64 {
    2.0 * renyi_cross_entropy(p) - renyi_entropy(&p.f_minus) - renyi_entropy(&p.f_plus)
}

/// Radial normal `N(mean, sigma² I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    mean: Vec<f64>,
    sigma: f64,
}

impl GaussianSpec {
    pub fn new(mean: Vec<f64>, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(MelcError::InvalidArgument(format!(
                "radial sigma must be positive, got {sigma}"
            )));
        }
        if mean.is_empty() {
            return Err(MelcError::InvalidArgument("empty mean".into()));
        }
        Ok(Self { mean, sigma })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// CIP of the projections of two radial Gaussians on `v`:
/// `exp(−(⟨v,m_-⟩ − ⟨v,m_+⟩)² / 2(σ_-² + σ_+²)) / √(2π(σ_-² + σ_+²))`.
pub fn gaussian_cip_closed_form(
    g_minus: &GaussianSpec,
    g_plus: &GaussianSpec,
    v: &UnitDirection,
) -> Result<f64> {
    v.check_dim(g_minus.mean.len())?;
    v.check_dim(g_plus.mean.len())?;
    let s2 = g_minus.sigma.powi(2) + g_plus.sigma.powi(2);
    let d = v.dot(&g_minus.mean) - v.dot(&g_plus.mean);
    Ok((-d * d / (2.0 * s2)).exp() / (2.0 * PI * s2).sqrt())
}

/// Mean of `max(0, 1 − p·y)` over the given margin products `p·y`.
pub fn hinge_loss(margin_products: &[f64]) -> Result<f64> {
    if margin_products.is_empty() {
        return Err(MelcError::EmptyInput("hinge loss of no samples"));
    }
    let total: f64 = margin_products.iter().map(|py| (1.0 - py).max(0.0)).sum();
    Ok(total / margin_products.len() as f64)
}

/// Relative slack used when comparing hinge losses at different biases.
const HINGE_TIE_TOL: f64 = 1e-12;

/// Best bias `b` for the score `s(x) = x − b` (class +1 to the right) and its
/// mean hinge loss.
///
/// The loss is convex and piecewise linear in `b` with kinks at `p − 1` for
/// positive points and `m + 1` for negative ones, so the minimum sits on a
/// kink. Every kink is evaluated in `O(log N)` from sorted prefix sums;
/// among (near-)equal minima the smallest `b` wins.
pub fn best_bias_hinge(minus: &[f64], plus: &[f64]) -> Result<(f64, f64)> {
    if minus.is_empty() {
        return Err(MelcError::EmptyClass("class -1 has no points"));
    }
    if plus.is_empty() {
        return Err(MelcError::EmptyClass("class +1 has no points"));
    }
    let mut p = plus.to_vec();
    let mut m = minus.to_vec();
    p.sort_by(f64::total_cmp);
    m.sort_by(f64::total_cmp);
    let prefix = |xs: &[f64]| {
        let mut acc = Vec::with_capacity(xs.len() + 1);
        acc.push(0.0);
        let mut s = 0.0;
        for x in xs {
            s += x;
            acc.push(s);
        }
        acc
    };
    let (pp, mp) = (prefix(&p), prefix(&m));
    let n = (p.len() + m.len()) as f64;

    let loss = |b: f64| -> f64 {
        // positives with p < b + 1 contribute 1 − p + b
        let k = p.partition_point(|&x| x < b + 1.0);
        let pos = k as f64 * (1.0 + b) - pp[k];
        // negatives with m > b − 1 contribute 1 + m − b
        let j = m.partition_point(|&x| x <= b - 1.0);
        let cnt = (m.len() - j) as f64;
        let neg = (mp[m.len()] - mp[j]) + cnt * (1.0 - b);
        (pos + neg) / n
    };

    let mut kinks: Vec<f64> = p
        .iter()
        .map(|x| x - 1.0)
        .chain(m.iter().map(|x| x + 1.0))
        .collect();
    kinks.sort_by(f64::total_cmp);
    let values: Vec<f64> = kinks.iter().map(|&b| loss(b).max(0.0)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = HINGE_TIE_TOL * (1.0 + best);
    let i = values.iter().position(|&v| v <= best + tol).unwrap_or(0);
    Ok((kinks[i], values[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(m: Vec<f64>, sm: f64, p: Vec<f64>, sp: f64) -> ProjectedPair {
        ProjectedPair::new(Kde1d::new(m, sm).unwrap(), Kde1d::new(p, sp).unwrap())
    }

    #[test]
    fn cip_examples() {
        assert!((cip(&pair(vec![0.0], 1.0, vec![0.0], 1.0)) - 0.282_094_8).abs() < 1e-7);
        assert!((cip(&pair(vec![0.0], 1.0, vec![1.0], 1.0)) - 0.219_695_6).abs() < 1e-7);
        assert!(cip(&pair(vec![0.0], 0.1, vec![100.0], 0.1)) < 1e-12);
    }

    #[test]
    fn entropy_examples() {
        let p = pair(vec![0.0], 1.0, vec![0.0], 1.0);
        assert!((renyi_cross_entropy(&p) - 1.265_512).abs() < 1e-6);
        let f = Kde1d::new(vec![0.0], 1.0).unwrap();
        assert!((renyi_entropy(&f) - 1.265_512).abs() < 1e-6);
        let wide = Kde1d::new(vec![0.0], 2.0).unwrap();
        assert!((renyi_entropy(&wide) - renyi_entropy(&f) - 2f64.ln()).abs() < 1e-14);
        let shifted = Kde1d::new(vec![5.0], 1.0).unwrap();
        assert!((renyi_entropy(&shifted) - renyi_entropy(&f)).abs() < 1e-15);
    }

    #[test]
    fn entropy_is_monotone_in_cip() {
        let near = pair(vec![0.0], 1.0, vec![0.5], 1.0);
        let far = pair(vec![0.0], 1.0, vec![1.5], 1.0);
        assert!(cip(&near) > cip(&far));
        assert!(renyi_cross_entropy(&near) < renyi_cross_entropy(&far));
    }

    #[test]
    fn divergence_cases() {
        let same = pair(vec![0.0, 1.0, 3.0], 0.4, vec![0.0, 1.0, 3.0], 0.4);
        assert!(cauchy_schwarz_divergence(&same).abs() < 1e-12);
        let perturbed = pair(vec![0.0, 1.0, 3.0], 0.4, vec![0.0, 1.1, 3.0], 0.4);
        assert!(cauchy_schwarz_divergence(&perturbed) > 1e-6);
        let d: Vec<f64> = [1.0, 5.0, 10.0]
            .iter()
            .map(|&s| cauchy_schwarz_divergence(&pair(vec![0.0, 0.3], 0.5, vec![s, s + 0.3], 0.5)))
            .collect();
        assert!(d[0] > 0.0 && d[0] < d[1] && d[1] < d[2], "{d:?}");
    }

    #[test]
    fn gaussian_closed_form_examples() {
        let a = GaussianSpec::new(vec![0.0, 0.0], 1.0).unwrap();
        let b = GaussianSpec::new(vec![1.0, 0.0], 1.0).unwrap();
        let v = UnitDirection::from_angle(0.0);
        let same = gaussian_cip_closed_form(&a, &a, &v).unwrap();
        assert!((same - 0.282_094_8).abs() < 1e-7);
        let apart = gaussian_cip_closed_form(&a, &b, &v).unwrap();
        let kde = cip(&pair(vec![0.0], 1.0, vec![1.0], 1.0));
        assert!((apart - kde).abs() < 1e-15);
        let v3 = UnitDirection::from_unit(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(gaussian_cip_closed_form(&a, &b, &v3).is_err());
    }

    #[test]
    fn gaussian_closed_form_maximizer_is_mean_difference() {
        let a = GaussianSpec::new(vec![0.3, -1.0], 0.7).unwrap();
        let b = GaussianSpec::new(vec![2.0, 1.5], 1.2).unwrap();
        let n = 20_000;
        let best = (0..n)
            .map(|k| k as f64 * PI / n as f64)
            .max_by(|&x, &y| {
                let h = |t| {
                    -gaussian_cip_closed_form(&a, &b, &UnitDirection::from_angle(t))
                        .unwrap()
                        .ln()
                };
                h(x).total_cmp(&h(y))
            })
            .unwrap();
        let target = UnitDirection::new(vec![2.0 - 0.3, 1.5 + 1.0]).unwrap();
        let got = UnitDirection::from_angle(best);
        assert!(crate::geometry::cosine_alignment(&got, &target).unwrap() > 1.0 - 1e-7);
    }

    #[test]
    fn hinge_examples() {
        assert_eq!(hinge_loss(&[2.0]).unwrap(), 0.0);
        assert_eq!(hinge_loss(&[0.5]).unwrap(), 0.5);
        assert_eq!(hinge_loss(&[-1.0]).unwrap(), 2.0);
        assert!(hinge_loss(&[]).is_err());
    }

    /// Loss of `s(x) = x − b` evaluated point by point.
    fn hinge_at(minus: &[f64], plus: &[f64], b: f64) -> f64 {
        let py: Vec<f64> = plus
            .iter()
            .map(|x| x - b)
            .chain(minus.iter().map(|x| -(x - b)))
            .collect();
        hinge_loss(&py).unwrap()
    }

    fn grid_min(minus: &[f64], plus: &[f64]) -> f64 {
        let lo = minus
            .iter()
            .chain(plus)
            .copied()
            .fold(f64::INFINITY, f64::min)
            - 2.0;
        let hi = minus
            .iter()
            .chain(plus)
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            + 2.0;
        let steps = ((hi - lo) / 1e-3).ceil() as usize;
        (0..=steps)
            .map(|k| hinge_at(minus, plus, lo + k as f64 * 1e-3))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn best_bias_separated() {
        let (b, loss) = best_bias_hinge(&[-2.0], &[2.0]).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(b, -1.0);
    }

    #[test]
    fn best_bias_coincident() {
        let (b, loss) = best_bias_hinge(&[0.0], &[0.0]).unwrap();
        assert!((loss - 1.0).abs() < 1e-15);
        assert_eq!(b, -1.0);
        assert!((grid_min(&[0.0], &[0.0]) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn best_bias_requires_both_classes() {
        assert!(best_bias_hinge(&[], &[1.0]).is_err());
        assert!(best_bias_hinge(&[1.0], &[]).is_err());
    }

    #[test]
    fn rescaled_pair_composes_maps() {
        let p = pair(vec![-1.0], 0.5, vec![3.0], 0.2);
        let r = p.rescaled_to_unit(3.0).unwrap();
        assert!((r.applied_map.scale() - 1.0 / 7.0).abs() < 1e-15);
        assert!((r.f_minus.centers()[0] - 3.0 / 14.0).abs() < 1e-15);
        assert!((r.f_minus.bandwidth() - 0.5 / 7.0).abs() < 1e-15);
        let rr = r.rescaled_to_unit(3.0).unwrap();
        assert!((rr.f_minus.centers()[0] - rr.applied_map.apply(-1.0)).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn breakpoint_scan_matches_grid(
                minus in prop::collection::vec(-3.0f64..3.0, 1..8),
                plus in prop::collection::vec(-3.0f64..3.0, 1..8),
            ) {
                let (b, loss) = best_bias_hinge(&minus, &plus).unwrap();
                prop_assert!((hinge_at(&minus, &plus, b) - loss).abs() < 1e-12);
                // the loss is 1-Lipschitz in b, so the 1e-3 grid is within 1e-3 of the optimum
                let g = grid_min(&minus, &plus);
                prop_assert!(loss <= g + 1e-12);
                prop_assert!(g - loss <= 1e-3 + 1e-12);
            }

            #[test]
            fn hinge_bounds_zero_one(py in prop::collection::vec(-5.0f64..5.0, 1..30)) {
                let zero_one = py.iter().filter(|&&v| v <= 0.0).count() as f64 / py.len() as f64;
                prop_assert!(zero_one <= hinge_loss(&py).unwrap());
            }

            #[test]
            fn zero_hinge_means_no_errors(
                minus in prop::collection::vec(-10.0f64..-2.0, 1..8),
                plus in prop::collection::vec(2.0f64..10.0, 1..8),
            ) {
                let (b, loss) = best_bias_hinge(&minus, &plus).unwrap();
                prop_assert_eq!(loss, 0.0);
                prop_assert!(plus.iter().all(|x| x - b > 0.0));
                prop_assert!(minus.iter().all(|x| x - b < 0.0));
            }

            #[test]
            fn divergence_nonnegative(
                m in prop::collection::vec(-4.0f64..4.0, 1..8),
                p in prop::collection::vec(-4.0f64..4.0, 1..8),
                sm in 0.05f64..2.0,
                sp in 0.05f64..2.0,
            ) {
                prop_assert!(cauchy_schwarz_divergence(&pair(m, sm, p, sp)) >= -1e-12);
            }
        }
    }
}
