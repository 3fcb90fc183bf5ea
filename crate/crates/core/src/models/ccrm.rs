//! Constrained center-and-range linear regression.
//!
//! Centers get an ordinary least squares fit; half-ranges get a least
//! squares fit with every coefficient (intercept included) constrained
//! non-negative, which keeps predicted half-ranges non-negative for any
//! valid query and therefore rules out bound crossings by construction.

use crate::dataset::IntervalDataset;
use crate::error::{Error, Result};
use crate::interval::PredictedInterval;

use super::linalg;
use super::nnls::nnls;
use super::FittedModel;

/// Fitted center/range coefficient vectors, intercept first.
#[derive(Debug, Clone, PartialEq)]
pub struct CcrmModel {
    pub center_coefs: Vec<f64>,
    pub range_coefs: Vec<f64>,
}

impl CcrmModel {
    pub fn n_predictors(&self) -> usize {
        self.center_coefs.len() - 1
    }

    pub fn predict_center_range(&self, centers: &[f64], ranges: &[f64]) -> (f64, f64) {
        let c = self.center_coefs[0]
            + self.center_coefs[1..]
                .iter()
                .zip(centers)
                .map(|(b, v)| b * v)
                .sum::<f64>();
        let r = self.range_coefs[0]
            + self.range_coefs[1..]
                .iter()
                .zip(ranges)
                .map(|(b, v)| b * v)
                .sum::<f64>();
        (c, r)
    }

    pub fn predict_row(&self, centers: &[f64], ranges: &[f64]) -> Result<PredictedInterval> {
        if centers.len() != self.n_predictors() || ranges.len() != self.n_predictors() {
            return Err(Error::DimensionMismatch {
                expected: self.n_predictors(),
                got: centers.len(),
            });
        }
        let (c, r) = self.predict_center_range(centers, ranges);
        Ok(PredictedInterval::new(c - r, c + r))
    }
}

pub fn train_ccrm(train: &IntervalDataset) -> Result<FittedModel> {
    let n = train.n_samples();
    let p = train.n_predictors();
    if n <= p + 1 {
        return Err(Error::RankDeficient);
    }

    let mut center_rows = Vec::with_capacity(n);
    let mut range_rows = Vec::with_capacity(n);
    let mut y_centers = Vec::with_capacity(n);
    let mut y_ranges = Vec::with_capacity(n);
    for i in 0..n {
        let mut c_row = Vec::with_capacity(p + 1);
        c_row.push(1.0);
        c_row.extend(train.center_row(i));
        center_rows.push(c_row);
        let mut r_row = Vec::with_capacity(p + 1);
        r_row.push(1.0);
        r_row.extend(train.range_row(i));
        range_rows.push(r_row);
        let target = train.target(i);
        y_centers.push(target.center());
        y_ranges.push(target.half_range());
    }

    let center_coefs = linalg::lstsq(&center_rows, &y_centers).ok_or(Error::RankDeficient)?;
    let range_coefs = nnls(&range_rows, &y_ranges)?;
    Ok(FittedModel::Ccrm(CcrmModel {
        center_coefs,
        range_coefs,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    fn linear_dataset(n: usize) -> IntervalDataset {
        // Noise-free: y_center = 4 + x_center, y_half_range = 1 + 0.5 x_half_range.
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let c = -3.0 + 0.37 * i as f64;
            let r = 0.2 + 0.05 * (i % 7) as f64;
            x.push(vec![Interval::from_center_range(c, r).unwrap()]);
            y.push(Interval::from_center_range(4.0 + c, 1.0 + 0.5 * r).unwrap());
        }
        IntervalDataset::new(x, y, vec!["x1".into()], "y".into()).unwrap()
    }

    #[test]
    fn recovers_exact_linear_coefficients() {
        let model = match train_ccrm(&linear_dataset(50)).unwrap() {
            FittedModel::Ccrm(m) => m,
            _ => unreachable!(),
        };
        assert!((model.center_coefs[0] - 4.0).abs() < 1e-8);
        assert!((model.center_coefs[1] - 1.0).abs() < 1e-8);
        assert!((model.range_coefs[0] - 1.0).abs() < 1e-8);
        assert!((model.range_coefs[1] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn underdetermined_fit_is_rejected() {
        let x = vec![
            vec![
                Interval::new(0.0, 1.0).unwrap(),
                Interval::new(0.0, 1.0).unwrap(),
            ],
            vec![
                Interval::new(1.0, 2.0).unwrap(),
                Interval::new(1.0, 2.0).unwrap(),
            ],
        ];
        let y = vec![
            Interval::new(0.0, 1.0).unwrap(),
            Interval::new(1.0, 2.0).unwrap(),
        ];
        let d = IntervalDataset::new(x, y, vec!["a".into(), "b".into()], "y".into()).unwrap();
        assert!(matches!(train_ccrm(&d), Err(Error::RankDeficient)));
    }

    #[test]
    fn hand_computed_prediction() {
        // Identity maps on center and range: query [0, 2] -> [0, 2].
        let model = CcrmModel {
            center_coefs: vec![0.0, 1.0],
            range_coefs: vec![0.0, 1.0],
        };
        let pred = model.predict_row(&[1.0], &[1.0]).unwrap();
        assert_eq!(pred.lower_hat, 0.0);
        assert_eq!(pred.upper_hat, 2.0);
        assert!(!pred.crossed);
    }
}
