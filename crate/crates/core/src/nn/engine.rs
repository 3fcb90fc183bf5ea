//! Forward pass, loss and analytic gradients.
//!
//! The loss is mean squared error on both bounds plus a squared hinge
//! penalty on crossings:
//!
//! ```text
//! L = 1/(2N) sum (yl - yl_hat)^2
//!   + 1/(2N) sum (yu - yu_hat)^2
//!   + lambda/(2N) sum max(0, yl_hat - yu_hat)^2
//! ```
//!
//! The penalty is active only where the predicted lower bound exceeds the
//! predicted upper bound, and it is continuously differentiable, so plain
//! backpropagation applies.

use super::activation::Activation;
use super::params::{GradientSet, RannParams};
use crate::error::{Error, Result};

/// A batch of scaled input rows with bound targets, stored row-major.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a> {
    pub input_dim: usize,
    /// `len() * input_dim` values, row-major.
    pub inputs: &'a [f64],
    pub lower: &'a [f64],
    pub upper: &'a [f64],
}

impl<'a> Batch<'a> {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn row(&self, k: usize) -> &'a [f64] {
        &self.inputs[k * self.input_dim..(k + 1) * self.input_dim]
    }

    pub fn validate(&self, expected_dim: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if self.lower.len() != self.upper.len() {
            return Err(Error::LengthMismatch {
                left: self.lower.len(),
                right: self.upper.len(),
            });
        }
        if self.inputs.len() != self.len() * self.input_dim {
            return Err(Error::LengthMismatch {
                left: self.inputs.len(),
                right: self.len() * self.input_dim,
            });
        }
        if self.input_dim != expected_dim {
            return Err(Error::DimensionMismatch {
                expected: expected_dim,
                got: self.input_dim,
            });
        }
        Ok(())
    }
}

/// Intermediate activations of one forward pass, kept for backpropagation.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub hidden_pre: Vec<f64>,
    pub hidden_out: Vec<f64>,
    pub lower_hat: f64,
    pub upper_hat: f64,
}

/// Runs the network on one input row of length `2p`.
pub fn forward(params: &RannParams, x: &[f64], activation: Activation) -> Result<ForwardTrace> {
    if x.len() != params.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.input_dim(),
            got: x.len(),
        });
    }
    let j_units = params.hidden_units();
    let mut hidden_pre = Vec::with_capacity(j_units);
    let mut hidden_out = Vec::with_capacity(j_units);
    for j in 0..j_units {
        let row = params.hidden_row(j);
        let pre = row
            .iter()
            .zip(x)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            + params.hidden_biases[j];
        hidden_pre.push(pre);
        hidden_out.push(activation.apply(pre));
    }
    let lower_hat = dot(&params.out_weights_lower, &hidden_out) + params.out_bias_lower;
    let upper_hat = dot(&params.out_weights_upper, &hidden_out) + params.out_bias_upper;
    Ok(ForwardTrace {
        hidden_pre,
        hidden_out,
        lower_hat,
        upper_hat,
    })
}

/// Batch loss; see the module docs for the formula.
pub fn loss(params: &RannParams, batch: &Batch, lambda: f64, activation: Activation) -> Result<f64> {
    batch.validate(params.input_dim())?;
    let n = batch.len() as f64;
    let mut total = 0.0;
    for k in 0..batch.len() {
        let trace = forward(params, batch.row(k), activation)?;
        let el = batch.lower[k] - trace.lower_hat;
        let eu = batch.upper[k] - trace.upper_hat;
        let crossing = (trace.lower_hat - trace.upper_hat).max(0.0);
        total += 0.5 * el * el + 0.5 * eu * eu + 0.5 * lambda * crossing * crossing;
    }
    Ok(total / n)
}

/// Analytic loss gradients, averaged over the batch.
///
/// With a linear output layer the head derivative is 1, so per sample:
/// `dL/d(lower_hat) = (-(yl - yl_hat) + lambda * max(0, yl_hat - yu_hat)) / N`
/// and the upper head gets the same hinge term with opposite sign. Hidden
/// parameters receive both heads' contributions through the shared units.
pub fn gradients(
    params: &RannParams,
    batch: &Batch,
    lambda: f64,
    activation: Activation,
) -> Result<GradientSet> {
    batch.validate(params.input_dim())?;
    let n = batch.len() as f64;
    let j_units = params.hidden_units();
    let input_dim = params.input_dim();
    let mut grads = GradientSet::zeros_like(params);

    for k in 0..batch.len() {
        let x = batch.row(k);
        let trace = forward(params, x, activation)?;
        let crossing = (trace.lower_hat - trace.upper_hat).max(0.0);
        let d_lower = (-(batch.lower[k] - trace.lower_hat) + lambda * crossing) / n;
        let d_upper = (-(batch.upper[k] - trace.upper_hat) - lambda * crossing) / n;

        grads.out_bias_lower += d_lower;
        grads.out_bias_upper += d_upper;
        for j in 0..j_units {
            let z = trace.hidden_out[j];
            grads.out_weights_lower[j] += d_lower * z;
            grads.out_weights_upper[j] += d_upper * z;

            let d_hidden = d_lower * params.out_weights_lower[j]
                + d_upper * params.out_weights_upper[j];
            let d_pre = d_hidden * activation.derivative_from_output(z);
            grads.hidden_biases[j] += d_pre;
            let row = &mut grads.hidden_weights[j * input_dim..(j + 1) * input_dim];
            for (g, v) in row.iter_mut().zip(x) {
                *g += d_pre * v;
            }
        }
    }
    Ok(grads)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
