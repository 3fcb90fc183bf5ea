//! Interval accuracy metrics: per-bound RMSE, mean Hausdorff distance and
//! coverage rate.
//!
//! Crossed predictions are handled explicitly rather than silently: for the
//! Hausdorff distance the bounds are swapped first (the distance to the set
//! of points the prediction spans), for coverage they contribute zero
//! overlap, and `crossed_count` reports how often either completion was
//! needed.

use crate::error::{Error, Result};
use crate::interval::{Interval, PredictedInterval};

/// Per-evaluation metric values plus the bookkeeping counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub mhd: f64,
    pub rmse_l: f64,
    pub rmse_u: f64,
    pub cr: f64,
    pub n: usize,
    /// Predictions with `lower_hat > upper_hat`.
    pub crossed_count: usize,
    /// Zero-width truth intervals excluded from the coverage average.
    pub zero_width_excluded: usize,
}

fn check_lengths(truth: &[Interval], pred: &[PredictedInterval]) -> Result<()> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// Root mean square error of each bound, as `(rmse_l, rmse_u)`.
pub fn rmse_bounds(truth: &[Interval], pred: &[PredictedInterval]) -> Result<(f64, f64)> {
    check_lengths(truth, pred)?;
    let n = truth.len() as f64;
    let mut sum_l = 0.0;
    let mut sum_u = 0.0;
    for (t, p) in truth.iter().zip(pred) {
        sum_l += (t.lower() - p.lower_hat).powi(2);
        sum_u += (t.upper() - p.upper_hat).powi(2);
    }
    Ok(((sum_l / n).sqrt(), (sum_u / n).sqrt()))
}

/// Hausdorff distance between two closed intervals.
///
/// For nonempty closed intervals the sup-inf set definition collapses to the
/// larger of the two bound-wise absolute differences.
pub fn hausdorff_interval(a: Interval, b: Interval) -> f64 {
    (a.lower() - b.lower())
        .abs()
        .max((a.upper() - b.upper()).abs())
}

/// Mean Hausdorff distance; crossed predictions are canonicalized by
/// swapping their bounds first.
pub fn mhd(truth: &[Interval], pred: &[PredictedInterval]) -> Result<f64> {
    check_lengths(truth, pred)?;
    let total: f64 = truth
        .iter()
        .zip(pred)
        .map(|(t, p)| {
            let (lo, hi) = p.canonical_bounds();
            (t.lower() - lo).abs().max((t.upper() - hi).abs())
        })
        .sum();
    Ok(total / truth.len() as f64)
}

/// Coverage rate plus the count of excluded zero-width truth intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub rate: f64,
    pub zero_width_excluded: usize,
}

/// Mean fraction of each truth interval's width overlapped by the
/// prediction. Crossed predictions cover nothing. Zero-width truth
/// intervals make the ratio undefined and are excluded (and counted);
/// if every interval is excluded the rate itself is undefined.
pub fn coverage_rate(truth: &[Interval], pred: &[PredictedInterval]) -> Result<Coverage> {
    check_lengths(truth, pred)?;
    let mut total = 0.0;
    let mut used = 0usize;
    for (t, p) in truth.iter().zip(pred) {
        let width = t.width();
        if width == 0.0 {
            continue;
        }
        used += 1;
        if p.crossed {
            continue;
        }
        let overlap = (t.upper().min(p.upper_hat) - t.lower().max(p.lower_hat)).max(0.0);
        total += overlap / width;
    }
    if used == 0 {
        return Err(Error::ZeroWidthTruth);
    }
    Ok(Coverage {
        rate: total / used as f64,
        zero_width_excluded: truth.len() - used,
    })
}

/// All four metrics over one prediction set.
pub fn evaluate(truth: &[Interval], pred: &[PredictedInterval]) -> Result<MetricsReport> {
    let (rmse_l, rmse_u) = rmse_bounds(truth, pred)?;
    let mhd = mhd(truth, pred)?;
    let coverage = coverage_rate(truth, pred)?;
    Ok(MetricsReport {
        mhd,
        rmse_l,
        rmse_u,
        cr: coverage.rate,
        n: truth.len(),
        crossed_count: pred.iter().filter(|p| p.crossed).count(),
        zero_width_excluded: coverage.zero_width_excluded,
    })
}
