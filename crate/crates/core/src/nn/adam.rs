//! Adam optimizer with bias correction.

use super::params::{GradientSet, RannParams};
use crate::error::{Error, Result};

/// First/second moment estimates over a flat parameter vector, plus the
/// step count used for bias correction. Shape-agnostic: any parameter
/// container with a canonical flat layout can drive it.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(n_params: usize) -> Self {
        Self {
            first_moment: vec![0.0; n_params],
            second_moment: vec![0.0; n_params],
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn n_params(&self) -> usize {
        self.first_moment.len()
    }

    /// Applies one bias-corrected update in place:
    /// `m <- b1 m + (1-b1) g`, `v <- b2 v + (1-b2) g^2`,
    /// `p <- p - lr * m_hat / (sqrt(v_hat) + eps)`.
    ///
    /// Returns `ShapeMismatch` if lengths disagree and `NonFiniteUpdate` if
    /// any updated value is non-finite (the update is still written).
    pub fn update_flat(&mut self, values: &mut [f64], grads: &[f64], lr: f64) -> Result<()> {
        if values.len() != self.first_moment.len() || grads.len() != values.len() {
            return Err(Error::ShapeMismatch);
        }
        self.step += 1;
        let t = self.step as i32;
        let bias1 = 1.0 - self.beta1.powi(t);
        let bias2 = 1.0 - self.beta2.powi(t);
        let mut finite = true;
        for i in 0..values.len() {
            let g = grads[i];
            self.first_moment[i] = self.beta1 * self.first_moment[i] + (1.0 - self.beta1) * g;
            self.second_moment[i] = self.beta2 * self.second_moment[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.first_moment[i] / bias1;
            let v_hat = self.second_moment[i] / bias2;
            values[i] -= lr * m_hat / (v_hat.sqrt() + self.epsilon);
            finite &= values[i].is_finite();
        }
        if finite {
            Ok(())
        } else {
            Err(Error::NonFiniteUpdate)
        }
    }
}

/// One Adam step over a network's parameters, returning the updated
/// parameters and advanced state.
pub fn adam_step(
    params: &RannParams,
    grads: &GradientSet,
    mut state: AdamState,
    lr: f64,
) -> Result<(RannParams, AdamState)> {
    let mut flat = params.flatten();
    let grad_flat = grads.flatten();
    state.update_flat(&mut flat, &grad_flat, lr)?;
    let mut updated = params.clone();
    updated.assign_flat(&flat)?;
    Ok((updated, state))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let params = RannParams::zeros(1, 2);
        let grads = GradientSet::zeros_like(&params);
        let state = AdamState::new(params.n_params());
        let (updated, state) = adam_step(&params, &grads, state, 0.001).unwrap();
        assert_eq!(updated, params);
        assert_eq!(state.step(), 1);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        // Scalar view: g = 1, lr = 0.001. After bias correction
        // m_hat = v_hat = 1, so the step is lr / (1 + eps) ~ lr.
        let mut value = [3.0];
        let mut state = AdamState::new(1);
        state.update_flat(&mut value, &[1.0], 0.001).unwrap();
        let moved = 3.0 - value[0];
        assert!((moved - 0.001).abs() < 1e-9, "moved {moved}");
    }

    #[test]
    fn repeated_identical_calls_differ_in_state() {
        let params = RannParams::zeros(1, 1);
        let mut grads = GradientSet::zeros_like(&params);
        grads.out_bias_lower = 0.5;
        let state = AdamState::new(params.n_params());
        let (p1, s1) = adam_step(&params, &grads, state, 0.01).unwrap();
        let (p2, s2) = adam_step(&p1, &grads, s1, 0.01).unwrap();
        assert_eq!(s2.step(), 2);
        // The same gradient applied twice keeps moving the parameter.
        assert!(p2.out_bias_lower < p1.out_bias_lower);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let params = RannParams::zeros(1, 2);
        let grads = GradientSet::zeros_like(&params);
        let state = AdamState::new(params.n_params() + 1);
        assert!(matches!(
            adam_step(&params, &grads, state, 0.001),
            Err(Error::ShapeMismatch)
        ));
    }

    #[test]
    fn non_finite_update_is_reported() {
        let mut value = [1.0];
        let mut state = AdamState::new(1);
        assert!(matches!(
            state.update_flat(&mut value, &[f64::NAN], 0.001),
            Err(Error::NonFiniteUpdate)
        ));
    }
}
