//! Uniform train/predict interface over the four interval predictors.

pub mod ccrm;
pub mod ikrcr;
pub mod imlp;
mod linalg;
pub mod nnls;
pub mod rann;

use std::fmt;

use serde::Deserialize;

use crate::dataset::IntervalDataset;
use crate::error::{Error, Result};
use crate::interval::{Interval, PredictedInterval};

pub use ccrm::{train_ccrm, CcrmModel};
pub use ikrcr::{train_ikrcr, IkrcrModel};
pub use imlp::{train_imlp, ImlpModel, ImlpParams};
pub use nnls::nnls;
pub use rann::{train_rann, RannModel};

/// Model selector used by configs and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rann,
    Imlp,
    Ccrm,
    Ikrcr,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Rann,
        ModelKind::Imlp,
        ModelKind::Ccrm,
        ModelKind::Ikrcr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rann => "rann",
            ModelKind::Imlp => "imlp",
            ModelKind::Ccrm => "ccrm",
            ModelKind::Ikrcr => "ikrcr",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rann" => Ok(ModelKind::Rann),
            "imlp" => Ok(ModelKind::Imlp),
            "ccrm" => Ok(ModelKind::Ccrm),
            "ikrcr" => Ok(ModelKind::Ikrcr),
            other => Err(Error::InvalidConfig(format!("unknown model `{other}`"))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bookkeeping recorded by the network trainers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingMeta {
    pub final_loss: f64,
    pub epochs_run: usize,
}

/// A trained model of any kind, with a uniform predict contract.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Rann(RannModel),
    Imlp(ImlpModel),
    Ccrm(CcrmModel),
    Ikrcr(IkrcrModel),
}

impl FittedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            FittedModel::Rann(_) => ModelKind::Rann,
            FittedModel::Imlp(_) => ModelKind::Imlp,
            FittedModel::Ccrm(_) => ModelKind::Ccrm,
            FittedModel::Ikrcr(_) => ModelKind::Ikrcr,
        }
    }

    pub fn n_predictors(&self) -> usize {
        match self {
            FittedModel::Rann(m) => m.n_predictors(),
            FittedModel::Imlp(m) => m.n_predictors(),
            FittedModel::Ccrm(m) => m.n_predictors(),
            FittedModel::Ikrcr(m) => m.n_predictors(),
        }
    }

    pub fn training_meta(&self) -> Option<&TrainingMeta> {
        match self {
            FittedModel::Rann(m) => Some(&m.meta),
            FittedModel::Imlp(m) => Some(&m.meta),
            _ => None,
        }
    }

    pub fn predict_row(&self, row: &[Interval]) -> Result<PredictedInterval> {
        match self {
            FittedModel::Rann(m) => m.predict_row(row),
            FittedModel::Imlp(m) => m.predict_row(row),
            FittedModel::Ccrm(m) => {
                let centers: Vec<f64> = row.iter().map(|iv| iv.center()).collect();
                let ranges: Vec<f64> = row.iter().map(|iv| iv.half_range()).collect();
                m.predict_row(&centers, &ranges)
            }
            FittedModel::Ikrcr(m) => {
                let centers: Vec<f64> = row.iter().map(|iv| iv.center()).collect();
                let ranges: Vec<f64> = row.iter().map(|iv| iv.half_range()).collect();
                m.predict_row(&centers, &ranges)
            }
        }
    }

    /// Predicts every row of `data`, in row order.
    pub fn predict(&self, data: &IntervalDataset) -> Result<Vec<PredictedInterval>> {
        if data.n_predictors() != self.n_predictors() {
            return Err(Error::DimensionMismatch {
                expected: self.n_predictors(),
                got: data.n_predictors(),
            });
        }
        (0..data.n_samples())
            .map(|i| self.predict_row(data.row(i)))
            .collect()
    }
}

/// Trains `kind` on `train` with the given per-model settings.
pub fn train(
    kind: ModelKind,
    train_set: &IntervalDataset,
    rann_cfg: &crate::nn::TrainConfig,
    imlp_cfg: &crate::nn::TrainConfig,
    ikrcr_bandwidth: f64,
) -> Result<FittedModel> {
    match kind {
        ModelKind::Rann => train_rann(train_set, rann_cfg),
        ModelKind::Imlp => train_imlp(train_set, imlp_cfg),
        ModelKind::Ccrm => train_ccrm(train_set),
        ModelKind::Ikrcr => train_ikrcr(train_set, ikrcr_bandwidth),
    }
}
