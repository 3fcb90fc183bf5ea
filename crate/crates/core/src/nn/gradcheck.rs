//! Finite-difference verification of the analytic gradients.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::activation::Activation;
use super::engine::{forward, gradients, loss, Batch};
use super::params::{init_params, RannParams};
use crate::seeding::derive_seed;

/// Maximum relative disagreement between analytic gradients and central
/// finite differences of the loss, over all parameters.
///
/// Relative error per parameter is
/// `|analytic - numeric| / max(1e-12, |analytic| + |numeric|)`.
pub fn check_gradients(
    params: &RannParams,
    batch: &Batch,
    lambda: f64,
    activation: Activation,
    eps: f64,
) -> f64 {
    assert!(eps > 0.0);
    let analytic = gradients(params, batch, lambda, activation)
        .expect("gradient evaluation failed")
        .flatten();
    let base = params.flatten();
    let mut worst: f64 = 0.0;
    for i in 0..base.len() {
        let mut probe = params.clone();
        let mut flat = base.clone();
        flat[i] = base[i] + eps;
        probe.assign_flat(&flat).unwrap();
        let plus = loss(&probe, batch, lambda, activation).unwrap();
        flat[i] = base[i] - eps;
        probe.assign_flat(&flat).unwrap();
        let minus = loss(&probe, batch, lambda, activation).unwrap();
        let numeric = (plus - minus) / (2.0 * eps);
        let denom = (analytic[i].abs() + numeric.abs()).max(1e-12);
        worst = worst.max((analytic[i] - numeric).abs() / denom);
    }
    worst
}

/// One randomized configuration checked by [`gradcheck_suite`].
#[derive(Debug, Clone)]
pub struct GradCheckCase {
    pub n_predictors: usize,
    pub hidden_units: usize,
    pub batch_len: usize,
    pub lambda: f64,
    pub crossed_rows: usize,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub cases: Vec<GradCheckCase>,
}

impl GradCheckReport {
    pub fn max_relative_error(&self) -> f64 {
        self.cases
            .iter()
            .map(|c| c.max_relative_error)
            .fold(0.0, f64::max)
    }

    pub fn cases_with_crossings(&self) -> usize {
        self.cases.iter().filter(|c| c.crossed_rows > 0).count()
    }
}

/// Randomized gradient-check sweep over network sizes, batches and penalty
/// weights (cycling through 0, 1 and 10), with roughly half the cases
/// engineered to contain crossed predictions so both hinge branches are
/// exercised.
pub fn gradcheck_suite(n_cases: usize, seed: u64) -> GradCheckReport {
    let lambdas = [0.0, 1.0, 10.0];
    let mut cases = Vec::with_capacity(n_cases);
    for case_idx in 0..n_cases {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, case_idx as u64));
        let n_predictors = rng.random_range(1..=3);
        let hidden_units = rng.random_range(2..=5);
        let batch_len = rng.random_range(3..=8);
        let lambda = lambdas[case_idx % lambdas.len()];
        let force_crossing = case_idx % 2 == 1;

        let mut params = init_params(n_predictors, hidden_units, rng.random());
        if force_crossing {
            // A dominant lower-head bias drives lower_hat above upper_hat.
            params.out_bias_lower += 3.0;
            params.out_bias_upper -= 3.0;
        } else {
            // Separate the heads so no row crosses and the hinge stays inert.
            params.out_bias_lower -= 3.0;
            params.out_bias_upper += 3.0;
        }

        let input_dim = 2 * n_predictors;
        let mut inputs = Vec::with_capacity(batch_len * input_dim);
        let mut lower = Vec::with_capacity(batch_len);
        let mut upper = Vec::with_capacity(batch_len);
        for _ in 0..batch_len {
            for _ in 0..input_dim {
                inputs.push(rng.random_range(-2.0..2.0));
            }
            let a = rng.random_range(-2.0..2.0);
            let b = rng.random_range(0.0..2.0);
            lower.push(a);
            upper.push(a + b);
        }
        let batch = Batch {
            input_dim,
            inputs: &inputs,
            lower: &lower,
            upper: &upper,
        };

        let crossed_rows = (0..batch.len())
            .filter(|&k| {
                let t = forward(&params, batch.row(k), Activation::Sigmoid).unwrap();
                t.lower_hat > t.upper_hat
            })
            .count();
        let max_relative_error =
            check_gradients(&params, &batch, lambda, Activation::Sigmoid, 1e-5);
        cases.push(GradCheckCase {
            n_predictors,
            hidden_units,
            batch_len,
            lambda,
            crossed_rows,
            max_relative_error,
        });
    }
    GradCheckReport { cases }
}
