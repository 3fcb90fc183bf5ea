//! Interval multi-layer perceptron on the center/range representation.
//!
//! Center and range paths share the connecting weights; the range path uses
//! their absolute values throughout and has no bias terms, which makes every
//! hidden range output and hence every predicted half-range non-negative.
//! Coherence of the predicted interval is therefore structural.
//!
//! Per hidden unit j with center input `xc` and (non-negative) range input
//! `xr`:
//!
//! ```text
//! hc_j = w_j . xc + b_j          hr_j = |w_j| . xr
//! Hc_j = (tanh(hc_j + hr_j) + tanh(hc_j - hr_j)) / 2
//! Hr_j = (tanh(hc_j + hr_j) - tanh(hc_j - hr_j)) / 2
//! yc   = sum_j wo_j Hc_j + bo    yr   = sum_j |wo_j| Hr_j
//! ```
//!
//! Training minimizes mean squared error on the reconstructed bounds
//! `yc -+ yr`, so the objective is commensurate with the bound-prediction
//! network's. Gradients flow through `|w|` with `sign(w)` (and `sign(0)=0`);
//! random initialization makes exact zeros a measure-zero event.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::IntervalDataset;
use crate::error::{Error, Result};
use crate::interval::{Interval, PredictedInterval};
use crate::nn::{AdamState, TrainConfig};
use crate::scale::AffineScaler;
use crate::seeding::derive_seed;

use super::{FittedModel, TrainingMeta};

/// Shared-weight parameters: `hidden_weights` is row-major `J x p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImlpParams {
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub out_weights: Vec<f64>,
    pub out_bias: f64,
    input_dim: usize,
    hidden_units: usize,
}

impl ImlpParams {
    pub fn zeros(n_predictors: usize, hidden_units: usize) -> Self {
        Self {
            hidden_weights: vec![0.0; hidden_units * n_predictors],
            hidden_biases: vec![0.0; hidden_units],
            out_weights: vec![0.0; hidden_units],
            out_bias: 0.0,
            input_dim: n_predictors,
            hidden_units,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_units(&self) -> usize {
        self.hidden_units
    }

    pub fn n_params(&self) -> usize {
        self.hidden_weights.len() + 2 * self.hidden_units + 1
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.n_params());
        flat.extend_from_slice(&self.hidden_weights);
        flat.extend_from_slice(&self.hidden_biases);
        flat.extend_from_slice(&self.out_weights);
        flat.push(self.out_bias);
        flat
    }

    pub fn assign_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.n_params() {
            return Err(Error::ShapeMismatch);
        }
        let (hw, rest) = flat.split_at(self.hidden_weights.len());
        let (hb, rest) = rest.split_at(self.hidden_units);
        let (wo, rest) = rest.split_at(self.hidden_units);
        self.hidden_weights.copy_from_slice(hw);
        self.hidden_biases.copy_from_slice(hb);
        self.out_weights.copy_from_slice(wo);
        self.out_bias = rest[0];
        Ok(())
    }

    fn hidden_row(&self, j: usize) -> &[f64] {
        &self.hidden_weights[j * self.input_dim..(j + 1) * self.input_dim]
    }

    /// Forward pass on scaled (center, range) inputs; returns
    /// `(yc, yr, per-unit trace)`.
    pub fn forward(&self, centers: &[f64], ranges: &[f64]) -> (f64, f64, Vec<UnitTrace>) {
        let mut traces = Vec::with_capacity(self.hidden_units);
        let mut yc = self.out_bias;
        let mut yr = 0.0;
        for j in 0..self.hidden_units {
            let row = self.hidden_row(j);
            let hc = row.iter().zip(centers).map(|(w, v)| w * v).sum::<f64>()
                + self.hidden_biases[j];
            let hr = row
                .iter()
                .zip(ranges)
                .map(|(w, v)| w.abs() * v)
                .sum::<f64>();
            let t_plus = (hc + hr).tanh();
            let t_minus = (hc - hr).tanh();
            let h_center = 0.5 * (t_plus + t_minus);
            let h_range = 0.5 * (t_plus - t_minus);
            yc += self.out_weights[j] * h_center;
            yr += self.out_weights[j].abs() * h_range;
            traces.push(UnitTrace {
                t_plus,
                t_minus,
                h_center,
                h_range,
            });
        }
        (yc, yr, traces)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UnitTrace {
    pub t_plus: f64,
    pub t_minus: f64,
    pub h_center: f64,
    pub h_range: f64,
}

/// Glorot-uniform initialization, deterministic in `seed`; biases zero.
pub fn init_imlp(n_predictors: usize, hidden_units: usize, seed: u64) -> ImlpParams {
    assert!(n_predictors >= 1 && hidden_units >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = ImlpParams::zeros(n_predictors, hidden_units);
    let hidden_limit = (6.0 / (n_predictors + hidden_units) as f64).sqrt();
    for w in params.hidden_weights.iter_mut() {
        *w = rng.random_range(-hidden_limit..hidden_limit);
    }
    let out_limit = (6.0 / (hidden_units + 1) as f64).sqrt();
    for w in params.out_weights.iter_mut() {
        *w = rng.random_range(-out_limit..out_limit);
    }
    params
}

/// A batch of scaled center/range rows with scaled bound targets.
#[derive(Debug, Clone, Copy)]
pub struct ImlpBatch<'a> {
    pub input_dim: usize,
    pub centers: &'a [f64],
    pub ranges: &'a [f64],
    pub lower: &'a [f64],
    pub upper: &'a [f64],
}

impl<'a> ImlpBatch<'a> {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    fn center_row(&self, k: usize) -> &'a [f64] {
        &self.centers[k * self.input_dim..(k + 1) * self.input_dim]
    }

    fn range_row(&self, k: usize) -> &'a [f64] {
        &self.ranges[k * self.input_dim..(k + 1) * self.input_dim]
    }

    fn validate(&self, expected_dim: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if self.input_dim != expected_dim {
            return Err(Error::DimensionMismatch {
                expected: expected_dim,
                got: self.input_dim,
            });
        }
        let n = self.len();
        if self.upper.len() != n
            || self.centers.len() != n * self.input_dim
            || self.ranges.len() != n * self.input_dim
        {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }
}

/// Mean squared error on the reconstructed bounds.
pub fn imlp_loss(params: &ImlpParams, batch: &ImlpBatch) -> Result<f64> {
    batch.validate(params.input_dim())?;
    let n = batch.len() as f64;
    let mut total = 0.0;
    for k in 0..batch.len() {
        let (yc, yr, _) = params.forward(batch.center_row(k), batch.range_row(k));
        let el = batch.lower[k] - (yc - yr);
        let eu = batch.upper[k] - (yc + yr);
        total += 0.5 * el * el + 0.5 * eu * eu;
    }
    Ok(total / n)
}

/// Analytic gradients of [`imlp_loss`], flat in the parameter layout.
pub fn imlp_gradients(params: &ImlpParams, batch: &ImlpBatch) -> Result<Vec<f64>> {
    batch.validate(params.input_dim())?;
    let n = batch.len() as f64;
    let p = params.input_dim();
    let j_units = params.hidden_units();
    let mut g_hidden = vec![0.0; j_units * p];
    let mut g_hidden_bias = vec![0.0; j_units];
    let mut g_out = vec![0.0; j_units];
    let mut g_out_bias = 0.0;

    for k in 0..batch.len() {
        let xc = batch.center_row(k);
        let xr = batch.range_row(k);
        let (yc, yr, traces) = params.forward(xc, xr);
        let d_lower = -(batch.lower[k] - (yc - yr)) / n;
        let d_upper = -(batch.upper[k] - (yc + yr)) / n;
        let d_yc = d_lower + d_upper;
        let d_yr = -d_lower + d_upper;

        g_out_bias += d_yc;
        for j in 0..j_units {
            let wo = params.out_weights[j];
            let trace = &traces[j];
            g_out[j] += d_yc * trace.h_center + d_yr * sign(wo) * trace.h_range;

            let d_h_center = d_yc * wo;
            let d_h_range = d_yr * wo.abs();
            let d_plus = 1.0 - trace.t_plus * trace.t_plus;
            let d_minus = 1.0 - trace.t_minus * trace.t_minus;
            let d_hc = 0.5 * (d_h_center * (d_plus + d_minus) + d_h_range * (d_plus - d_minus));
            let d_hr = 0.5 * (d_h_center * (d_plus - d_minus) + d_h_range * (d_plus + d_minus));

            g_hidden_bias[j] += d_hc;
            let row = params.hidden_row(j);
            let g_row = &mut g_hidden[j * p..(j + 1) * p];
            for i in 0..p {
                g_row[i] += d_hc * xc[i] + d_hr * sign(row[i]) * xr[i];
            }
        }
    }

    let mut flat = Vec::with_capacity(params.n_params());
    flat.extend_from_slice(&g_hidden);
    flat.extend_from_slice(&g_hidden_bias);
    flat.extend_from_slice(&g_out);
    flat.push(g_out_bias);
    Ok(flat)
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Finite-difference check of [`imlp_gradients`]; meaningful away from the
/// `|w|` kinks, i.e. at parameters with no exactly-zero weights.
pub fn imlp_check_gradients(params: &ImlpParams, batch: &ImlpBatch, eps: f64) -> f64 {
    assert!(eps > 0.0);
    let analytic = imlp_gradients(params, batch).expect("gradient evaluation failed");
    let base = params.flatten();
    let mut worst: f64 = 0.0;
    for i in 0..base.len() {
        let mut probe = params.clone();
        let mut flat = base.clone();
        flat[i] = base[i] + eps;
        probe.assign_flat(&flat).unwrap();
        let plus = imlp_loss(&probe, batch).unwrap();
        flat[i] = base[i] - eps;
        probe.assign_flat(&flat).unwrap();
        let minus = imlp_loss(&probe, batch).unwrap();
        let numeric = (plus - minus) / (2.0 * eps);
        let denom = (analytic[i].abs() + numeric.abs()).max(1e-12);
        worst = worst.max((analytic[i] - numeric).abs() / denom);
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImlpModel {
    pub params: ImlpParams,
    center_scalers: Vec<AffineScaler>,
    range_scalers: Vec<AffineScaler>,
    target_scaler: AffineScaler,
    pub config: TrainConfig,
    pub meta: TrainingMeta,
}

impl ImlpModel {
    pub fn n_predictors(&self) -> usize {
        self.center_scalers.len()
    }

    pub fn predict_row(&self, row: &[Interval]) -> Result<PredictedInterval> {
        if row.len() != self.n_predictors() {
            return Err(Error::DimensionMismatch {
                expected: self.n_predictors(),
                got: row.len(),
            });
        }
        let centers: Vec<f64> = row
            .iter()
            .zip(&self.center_scalers)
            .map(|(iv, s)| s.apply(iv.center()))
            .collect();
        let ranges: Vec<f64> = row
            .iter()
            .zip(&self.range_scalers)
            .map(|(iv, s)| s.apply(iv.half_range()))
            .collect();
        let (yc, yr, _) = self.params.forward(&centers, &ranges);
        Ok(PredictedInterval::new(
            self.target_scaler.invert(yc - yr),
            self.target_scaler.invert(yc + yr),
        ))
    }
}

/// Trains with the same seeded mini-batch Adam protocol as the
/// bound-prediction network. Centers are z-scored; half-ranges are divided
/// by their training std without a mean shift so they stay non-negative;
/// both target bounds share one affine transform.
pub fn train_imlp(train: &IntervalDataset, cfg: &TrainConfig) -> Result<FittedModel> {
    cfg.validate()?;
    let n = train.n_samples();
    let p = train.n_predictors();

    let center_scalers: Vec<AffineScaler> = (0..p)
        .map(|j| AffineScaler::standardize((0..n).map(move |i| train.row(i)[j].center())))
        .collect();
    let range_scalers: Vec<AffineScaler> = (0..p)
        .map(|j| AffineScaler::spread_only((0..n).map(move |i| train.row(i)[j].half_range())))
        .collect();
    let target_scaler = AffineScaler::standardize(
        (0..n)
            .map(|i| train.target(i).lower())
            .chain((0..n).map(|i| train.target(i).upper())),
    );

    let mut centers = vec![0.0; n * p];
    let mut ranges = vec![0.0; n * p];
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 0..n {
        for j in 0..p {
            centers[i * p + j] = center_scalers[j].apply(train.row(i)[j].center());
            ranges[i * p + j] = range_scalers[j].apply(train.row(i)[j].half_range());
        }
        lower[i] = target_scaler.apply(train.target(i).lower());
        upper[i] = target_scaler.apply(train.target(i).upper());
    }

    let mut params = init_imlp(p, cfg.hidden_units, cfg.seed);
    let mut state = AdamState::new(params.n_params());
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 1));
    let batch_size = cfg.batch_size.min(n);

    let mut order: Vec<usize> = (0..n).collect();
    let mut epoch_centers = vec![0.0; n * p];
    let mut epoch_ranges = vec![0.0; n * p];
    let mut epoch_lower = vec![0.0; n];
    let mut epoch_upper = vec![0.0; n];
    for _ in 0..cfg.epochs {
        if batch_size < n {
            order.shuffle(&mut shuffle_rng);
        }
        for (slot, &i) in order.iter().enumerate() {
            epoch_centers[slot * p..(slot + 1) * p].copy_from_slice(&centers[i * p..(i + 1) * p]);
            epoch_ranges[slot * p..(slot + 1) * p].copy_from_slice(&ranges[i * p..(i + 1) * p]);
            epoch_lower[slot] = lower[i];
            epoch_upper[slot] = upper[i];
        }
        let mut start = 0;
        while start < n {
            let end = (start + batch_size).min(n);
            let batch = ImlpBatch {
                input_dim: p,
                centers: &epoch_centers[start * p..end * p],
                ranges: &epoch_ranges[start * p..end * p],
                lower: &epoch_lower[start..end],
                upper: &epoch_upper[start..end],
            };
            let grads = imlp_gradients(&params, &batch)?;
            let mut flat = params.flatten();
            state
                .update_flat(&mut flat, &grads, cfg.learning_rate)
                .map_err(|e| match e {
                    Error::NonFiniteUpdate => {
                        Error::TrainingDiverged("non-finite parameter update".into())
                    }
                    other => other,
                })?;
            params.assign_flat(&flat)?;
            start = end;
        }
    }

    let full_batch = ImlpBatch {
        input_dim: p,
        centers: &centers,
        ranges: &ranges,
        lower: &lower,
        upper: &upper,
    };
    let final_loss = imlp_loss(&params, &full_batch)?;
    Ok(FittedModel::Imlp(ImlpModel {
        params,
        center_scalers,
        range_scalers,
        target_scaler,
        config: cfg.clone(),
        meta: TrainingMeta {
            final_loss,
            epochs_run: cfg.epochs,
        },
    }))
}
