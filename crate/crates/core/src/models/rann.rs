//! Training and prediction for the regularized bound-prediction network.
//!
//! Inputs are the 2p interleaved predictor bounds, z-scored per column on
//! training statistics. Both target bounds share one affine transform
//! (pooled mean and std of all training bound values): a shared positive
//! affine map preserves the sign of `lower_hat - upper_hat`, so crossings
//! agree between the scaled training space and the reported raw space.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::IntervalDataset;
use crate::error::{Error, Result};
use crate::interval::{Interval, PredictedInterval};
use crate::nn::{forward, gradients, init_params, loss, AdamState, Batch, RannParams, TrainConfig};
use crate::scale::AffineScaler;
use crate::seeding::derive_seed;

use super::{FittedModel, TrainingMeta};

#[derive(Debug, Clone, PartialEq)]
pub struct RannModel {
    pub params: RannParams,
    input_scalers: Vec<AffineScaler>,
    target_scaler: AffineScaler,
    pub config: TrainConfig,
    pub meta: TrainingMeta,
}

impl RannModel {
    pub fn n_predictors(&self) -> usize {
        self.input_scalers.len() / 2
    }

    pub fn predict_row(&self, row: &[Interval]) -> Result<PredictedInterval> {
        if row.len() != self.n_predictors() {
            return Err(Error::DimensionMismatch {
                expected: self.n_predictors(),
                got: row.len(),
            });
        }
        let mut x = Vec::with_capacity(2 * row.len());
        for iv in row {
            x.push(iv.lower());
            x.push(iv.upper());
        }
        for (v, s) in x.iter_mut().zip(&self.input_scalers) {
            *v = s.apply(*v);
        }
        let trace = forward(&self.params, &x, self.config.hidden_activation)?;
        Ok(PredictedInterval::new(
            self.target_scaler.invert(trace.lower_hat),
            self.target_scaler.invert(trace.upper_hat),
        ))
    }
}

/// Trains with seeded mini-batch Adam on the penalized bound loss.
///
/// Each epoch shuffles the row order (deterministically in the config seed)
/// and sweeps it in `batch_size` chunks, one optimizer step per chunk.
/// Equal `(train, cfg)` inputs produce bit-identical models.
pub fn train_rann(train: &IntervalDataset, cfg: &TrainConfig) -> Result<FittedModel> {
    cfg.validate()?;
    let n = train.n_samples();
    let p = train.n_predictors();
    let input_dim = 2 * p;

    let input_scalers: Vec<AffineScaler> = (0..input_dim)
        .map(|col| {
            let j = col / 2;
            let lower_col = col % 2 == 0;
            AffineScaler::standardize((0..n).map(move |i| {
                let iv = train.row(i)[j];
                if lower_col {
                    iv.lower()
                } else {
                    iv.upper()
                }
            }))
        })
        .collect();
    let target_scaler = AffineScaler::standardize(
        (0..n)
            .map(|i| train.target(i).lower())
            .chain((0..n).map(|i| train.target(i).upper())),
    );

    let mut inputs = vec![0.0; n * input_dim];
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 0..n {
        let bounds = train.bounds_row(i);
        for (col, v) in bounds.iter().enumerate() {
            inputs[i * input_dim + col] = input_scalers[col].apply(*v);
        }
        lower[i] = target_scaler.apply(train.target(i).lower());
        upper[i] = target_scaler.apply(train.target(i).upper());
    }

    let mut params = init_params(p, cfg.hidden_units, cfg.seed);
    let mut state = AdamState::new(params.n_params());
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 1));
    let batch_size = cfg.batch_size.min(n);

    let mut order: Vec<usize> = (0..n).collect();
    let mut epoch_inputs = vec![0.0; n * input_dim];
    let mut epoch_lower = vec![0.0; n];
    let mut epoch_upper = vec![0.0; n];
    for _ in 0..cfg.epochs {
        if batch_size < n {
            order.shuffle(&mut shuffle_rng);
        }
        for (slot, &i) in order.iter().enumerate() {
            epoch_inputs[slot * input_dim..(slot + 1) * input_dim]
                .copy_from_slice(&inputs[i * input_dim..(i + 1) * input_dim]);
            epoch_lower[slot] = lower[i];
            epoch_upper[slot] = upper[i];
        }
        let mut start = 0;
        while start < n {
            let end = (start + batch_size).min(n);
            let batch = Batch {
                input_dim,
                inputs: &epoch_inputs[start * input_dim..end * input_dim],
                lower: &epoch_lower[start..end],
                upper: &epoch_upper[start..end],
            };
            let grads = gradients(&params, &batch, cfg.lambda, cfg.hidden_activation)?;
            let mut flat = params.flatten();
            state
                .update_flat(&mut flat, &grads.flatten(), cfg.learning_rate)
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

    let full_batch = Batch {
        input_dim,
        inputs: &inputs,
        lower: &lower,
        upper: &upper,
    };
    let final_loss = loss(&params, &full_batch, cfg.lambda, cfg.hidden_activation)?;
    Ok(FittedModel::Rann(RannModel {
        params,
        input_scalers,
        target_scaler,
        config: cfg.clone(),
        meta: TrainingMeta {
            final_loss,
            epochs_run: cfg.epochs,
        },
    }))
}
