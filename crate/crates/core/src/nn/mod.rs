//! Dense feed-forward machinery for the regularized bound-prediction
//! network: parameter container, forward pass, loss with a squared hinge
//! non-crossing penalty, analytic gradients, Adam updates and a
//! finite-difference gradient checker.

mod activation;
mod adam;
mod engine;
mod gradcheck;
mod params;

pub use activation::Activation;
pub use adam::{adam_step, AdamState};
pub use engine::{forward, gradients, loss, Batch, ForwardTrace};
pub use gradcheck::{check_gradients, gradcheck_suite, GradCheckCase, GradCheckReport};
pub use params::{init_params, GradientSet, RannParams, TrainConfig};
