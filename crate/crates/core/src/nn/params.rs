//! Network parameters, their gradients, and initialization.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::activation::Activation;
use crate::error::{Error, Result};

/// All weights and biases of the bound-prediction network: one hidden layer
/// shared by both bounds, and two linear output heads.
///
/// `hidden_weights` is row-major `J x 2p`; row `j` holds the weights from
/// all `2p` inputs into hidden unit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RannParams {
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub out_weights_lower: Vec<f64>,
    pub out_weights_upper: Vec<f64>,
    pub out_bias_lower: f64,
    pub out_bias_upper: f64,
    input_dim: usize,
    hidden_units: usize,
}

impl RannParams {
    pub fn zeros(n_predictors: usize, hidden_units: usize) -> Self {
        let input_dim = 2 * n_predictors;
        Self {
            hidden_weights: vec![0.0; hidden_units * input_dim],
            hidden_biases: vec![0.0; hidden_units],
            out_weights_lower: vec![0.0; hidden_units],
            out_weights_upper: vec![0.0; hidden_units],
            out_bias_lower: 0.0,
            out_bias_upper: 0.0,
            input_dim,
            hidden_units,
        }
    }

    /// Input dimension `2p` (interleaved lower/upper bounds of p predictors).
    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_units(&self) -> usize {
        self.hidden_units
    }

    pub fn hidden_row(&self, j: usize) -> &[f64] {
        &self.hidden_weights[j * self.input_dim..(j + 1) * self.input_dim]
    }

    pub fn n_params(&self) -> usize {
        self.hidden_weights.len() + 3 * self.hidden_units + 2
    }

    /// Canonical flat layout: hidden weights, hidden biases, lower head
    /// weights, upper head weights, lower bias, upper bias.
    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.n_params());
        flat.extend_from_slice(&self.hidden_weights);
        flat.extend_from_slice(&self.hidden_biases);
        flat.extend_from_slice(&self.out_weights_lower);
        flat.extend_from_slice(&self.out_weights_upper);
        flat.push(self.out_bias_lower);
        flat.push(self.out_bias_upper);
        flat
    }

    pub fn assign_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.n_params() {
            return Err(Error::ShapeMismatch);
        }
        let (hw, rest) = flat.split_at(self.hidden_weights.len());
        let (hb, rest) = rest.split_at(self.hidden_units);
        let (wl, rest) = rest.split_at(self.hidden_units);
        let (wu, rest) = rest.split_at(self.hidden_units);
        self.hidden_weights.copy_from_slice(hw);
        self.hidden_biases.copy_from_slice(hb);
        self.out_weights_lower.copy_from_slice(wl);
        self.out_weights_upper.copy_from_slice(wu);
        self.out_bias_lower = rest[0];
        self.out_bias_upper = rest[1];
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.flatten().iter().all(|v| v.is_finite())
    }
}

/// One loss gradient per parameter, in the same layout as [`RannParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet {
    pub hidden_weights: Vec<f64>,
    pub hidden_biases: Vec<f64>,
    pub out_weights_lower: Vec<f64>,
    pub out_weights_upper: Vec<f64>,
    pub out_bias_lower: f64,
    pub out_bias_upper: f64,
}

impl GradientSet {
    pub fn zeros_like(params: &RannParams) -> Self {
        Self {
            hidden_weights: vec![0.0; params.hidden_weights.len()],
            hidden_biases: vec![0.0; params.hidden_biases.len()],
            out_weights_lower: vec![0.0; params.out_weights_lower.len()],
            out_weights_upper: vec![0.0; params.out_weights_upper.len()],
            out_bias_lower: 0.0,
            out_bias_upper: 0.0,
        }
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(
            self.hidden_weights.len() + self.hidden_biases.len() + 2 * self.out_weights_lower.len() + 2,
        );
        flat.extend_from_slice(&self.hidden_weights);
        flat.extend_from_slice(&self.hidden_biases);
        flat.extend_from_slice(&self.out_weights_lower);
        flat.extend_from_slice(&self.out_weights_upper);
        flat.push(self.out_bias_lower);
        flat.push(self.out_bias_upper);
        flat
    }
}

/// Training hyper-parameters for the network models.
///
/// `batch_size` is clamped to the training-set size, so a value of
/// `usize::MAX` requests one full-batch step per epoch. `lambda` only
/// affects the bound-prediction network; the center/range perceptron has no
/// crossing penalty to weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub hidden_units: usize,
    pub lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub hidden_activation: Activation,
}

impl TrainConfig {
    pub fn rann_defaults() -> Self {
        Self {
            hidden_units: 5,
            lambda: 1.0,
            learning_rate: 1e-3,
            epochs: 500,
            batch_size: 4,
            seed: 0,
            hidden_activation: Activation::Sigmoid,
        }
    }

    pub fn imlp_defaults() -> Self {
        Self {
            hidden_units: 5,
            lambda: 0.0,
            learning_rate: 1e-3,
            epochs: 500,
            batch_size: 4,
            seed: 0,
            hidden_activation: Activation::Tanh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_units == 0 {
            return Err(Error::InvalidConfig("hidden_units must be >= 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be >= 1".into()));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "learning_rate must be finite and > 0, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }
}

/// Glorot-uniform initialization with zero biases, deterministic in `seed`.
///
/// Each layer's weights are drawn from `U(-l, l)` with
/// `l = sqrt(6 / (fan_in + fan_out))`: the hidden layer has fan `2p -> J`,
/// the output layer `J -> 2`. Draw order is hidden weights (row-major), then
/// the lower head, then the upper head.
pub fn init_params(n_predictors: usize, hidden_units: usize, seed: u64) -> RannParams {
    assert!(n_predictors >= 1 && hidden_units >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = RannParams::zeros(n_predictors, hidden_units);
    let input_dim = params.input_dim();

    let hidden_limit = (6.0 / (input_dim + hidden_units) as f64).sqrt();
    for w in params.hidden_weights.iter_mut() {
        *w = rng.random_range(-hidden_limit..hidden_limit);
    }
    let out_limit = (6.0 / (hidden_units + 2) as f64).sqrt();
    for w in params.out_weights_lower.iter_mut() {
        *w = rng.random_range(-out_limit..out_limit);
    }
    for w in params.out_weights_upper.iter_mut() {
        *w = rng.random_range(-out_limit..out_limit);
    }
    params
}
