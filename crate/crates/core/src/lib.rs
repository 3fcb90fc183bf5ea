//! Benchmarking toolkit for interval-valued regression.
//!
//! Every observation is a closed interval `[lower, upper]` rather than a
//! point. The crate provides:
//!
//! - interval data structures, CSV ingestion and train/test splitting
//!   ([`interval`], [`dataset`]);
//! - a small dense feed-forward engine with analytic gradients, a squared
//!   hinge non-crossing penalty and an Adam optimizer ([`nn`]);
//! - four interval regression models behind one train/predict interface:
//!   a regularized neural network on the bound representation, an interval
//!   multi-layer perceptron on the center/range representation, constrained
//!   center-and-range linear regression and a Gaussian-kernel smoother
//!   ([`models`]);
//! - interval accuracy metrics: bound RMSEs, mean Hausdorff distance and
//!   coverage rate ([`metrics`]);
//! - two seeded synthetic data generators ([`simgen`]);
//! - a replicated split/train/score experiment harness with deterministic
//!   reports ([`bench`]).
//!
//! All randomness flows through explicitly seeded ChaCha8 streams, so every
//! operation is a pure function of its inputs and re-runs reproduce results
//! byte for byte.

pub mod bench;
pub mod dataset;
pub mod error;
pub mod interval;
pub mod metrics;
pub mod models;
pub mod nn;
pub mod seeding;
pub mod simgen;

pub(crate) mod scale;

pub use dataset::{IntervalDataset, SplitMode, SplitSpec};
pub use error::{Error, Result};
pub use interval::{CenterRange, Interval, PredictedInterval};
