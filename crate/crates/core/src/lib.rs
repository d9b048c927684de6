//! Entropy-based linear classifier objectives on one-dimensional projections.
//!
//! Labeled points are projected onto a unit direction, each class is smoothed
//! with a Gaussian KDE, and the resulting pair of densities is scored with
//! Rényi quadratic entropies, the Cauchy-Schwarz divergence and an estimate
//! of the Bayes risk attainable by a multithreshold classifier.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod datasets;
pub mod error;
pub mod geometry;
pub mod kde;
pub mod objectives;
pub mod risk;
pub mod sweep;

pub use error::{MelcError, Result};
pub use geometry::{AffineMap1d, Label, LabeledDataset, UnitDirection};
pub use kde::Kde1d;
pub use objectives::{IntegralMethod, ProjectedPair};
pub use risk::{BoundCheck, MultithresholdModel, RiskEstimate};
pub use sweep::{ComparisonRow, SweepOptions, SweepRecord};
