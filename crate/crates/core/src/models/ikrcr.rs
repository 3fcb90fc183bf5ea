//! Gaussian-kernel smoother on center and range views.
//!
//! Prediction is a kernel-weighted average of the training targets, with
//! independent weight sets for centers and half-ranges. Kernel weights are
//! computed in log space and shifted by the maximum exponent before
//! normalizing, so a far-away query cannot underflow every kernel into 0/0.
//! The Gaussian prefactor is constant across samples and cancels in the
//! normalization.

use crate::dataset::IntervalDataset;
use crate::error::{Error, Result};
use crate::interval::PredictedInterval;
use crate::scale::AffineScaler;

use super::FittedModel;

/// The stored (scaled) training set plus the bandwidth.
///
/// Center columns are z-scored and half-range columns divided by their
/// training std, matching the scaling used for the network models so one
/// bandwidth is meaningful across datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct IkrcrModel {
    centers: Vec<Vec<f64>>,
    ranges: Vec<Vec<f64>>,
    y_centers: Vec<f64>,
    y_ranges: Vec<f64>,
    center_scalers: Vec<AffineScaler>,
    range_scalers: Vec<AffineScaler>,
    pub bandwidth: f64,
}

impl IkrcrModel {
    pub fn n_predictors(&self) -> usize {
        self.center_scalers.len()
    }

    pub fn n_training_samples(&self) -> usize {
        self.y_centers.len()
    }

    /// Normalized kernel weights of every training sample for one scaled
    /// query point. Weights sum to 1 by construction.
    pub fn kernel_weights(points: &[Vec<f64>], query: &[f64], bandwidth: f64) -> Vec<f64> {
        let inv = 1.0 / (2.0 * bandwidth * bandwidth);
        let log_k: Vec<f64> = points
            .iter()
            .map(|x| {
                let d2 = x
                    .iter()
                    .zip(query)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                -d2 * inv
            })
            .collect();
        let shift = log_k.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mut weights: Vec<f64> = log_k.iter().map(|&l| (l - shift).exp()).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        weights
    }

    pub fn predict_row(&self, centers: &[f64], ranges: &[f64]) -> Result<PredictedInterval> {
        if centers.len() != self.n_predictors() || ranges.len() != self.n_predictors() {
            return Err(Error::DimensionMismatch {
                expected: self.n_predictors(),
                got: centers.len(),
            });
        }
        let qc: Vec<f64> = centers
            .iter()
            .zip(&self.center_scalers)
            .map(|(v, s)| s.apply(*v))
            .collect();
        let qr: Vec<f64> = ranges
            .iter()
            .zip(&self.range_scalers)
            .map(|(v, s)| s.apply(*v))
            .collect();
        let wc = Self::kernel_weights(&self.centers, &qc, self.bandwidth);
        let wr = Self::kernel_weights(&self.ranges, &qr, self.bandwidth);
        let c: f64 = wc.iter().zip(&self.y_centers).map(|(w, y)| w * y).sum();
        let r: f64 = wr.iter().zip(&self.y_ranges).map(|(w, y)| w * y).sum();
        Ok(PredictedInterval::new(c - r, c + r))
    }
}

pub fn train_ikrcr(train: &IntervalDataset, bandwidth: f64) -> Result<FittedModel> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::BandwidthInvalid(bandwidth));
    }
    if train.n_samples() == 0 {
        return Err(Error::Empty);
    }
    let n = train.n_samples();
    let p = train.n_predictors();

    let center_scalers: Vec<AffineScaler> = (0..p)
        .map(|j| AffineScaler::standardize((0..n).map(move |i| train.row(i)[j].center())))
        .collect();
    let range_scalers: Vec<AffineScaler> = (0..p)
        .map(|j| AffineScaler::spread_only((0..n).map(move |i| train.row(i)[j].half_range())))
        .collect();

    let centers = (0..n)
        .map(|i| {
            train
                .center_row(i)
                .iter()
                .zip(&center_scalers)
                .map(|(v, s)| s.apply(*v))
                .collect()
        })
        .collect();
    let ranges = (0..n)
        .map(|i| {
            train
                .range_row(i)
                .iter()
                .zip(&range_scalers)
                .map(|(v, s)| s.apply(*v))
                .collect()
        })
        .collect();
    let y_centers = (0..n).map(|i| train.target(i).center()).collect();
    let y_ranges = (0..n).map(|i| train.target(i).half_range()).collect();

    Ok(FittedModel::Ikrcr(IkrcrModel {
        centers,
        ranges,
        y_centers,
        y_ranges,
        center_scalers,
        range_scalers,
        bandwidth,
    }))
}
