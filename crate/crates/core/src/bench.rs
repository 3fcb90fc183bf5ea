//! Replicated experiment harness: split, train, score, aggregate.
//!
//! One experiment runs `replications` independent rounds. Round `i` derives
//! its own seeds from the master seed, generates (or reuses) the dataset,
//! draws one train/test split that every selected model shares, trains each
//! model on the training side and scores it on the test side. Aggregation
//! reports the mean and sample standard deviation (n - 1 denominator) of
//! every metric per model.
//!
//! Rounds own their data and RNG streams, so they run in parallel; results
//! are keyed by replication index and reduced in a fixed order, which makes
//! the emitted report identical no matter the execution schedule. Wall time
//! is tracked on the report struct but deliberately left out of the rendered
//! output so re-runs reproduce it byte for byte.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Deserialize;

use crate::dataset::{IntervalDataset, SplitMode, SplitSpec};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, MetricsReport};
use crate::models::{self, ModelKind};
use crate::nn::TrainConfig;
use crate::seeding::derive_seed;
use crate::simgen;

/// Where the experiment's data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Scenario1 { n: usize },
    Scenario2 { n: usize },
    Csv {
        path: PathBuf,
        target: String,
        /// Time-ordered files are split sequentially instead of randomly.
        time_ordered: bool,
    },
}

impl DataSource {
    fn label(&self) -> String {
        match self {
            DataSource::Scenario1 { n } => format!("scenario1(n={n})"),
            DataSource::Scenario2 { n } => format!("scenario2(n={n})"),
            DataSource::Csv {
                path,
                target,
                time_ordered,
            } => format!(
                "csv({}, target={target}, time_ordered={time_ordered})",
                path.display()
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Markdown,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub data_source: DataSource,
    pub models: Vec<ModelKind>,
    pub replications: usize,
    pub train_fraction: f64,
    /// `None` selects random splitting, or sequential for time-ordered CSV.
    pub split_mode: Option<SplitMode>,
    pub rann: TrainConfig,
    pub imlp: TrainConfig,
    pub ikrcr_bandwidth: f64,
    pub master_seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Protocol defaults: 30 replications of an 80/20 random split, both
    /// networks at 5 hidden units, 500 epochs, learning rate 1e-3, batch
    /// size 4, crossing penalty 1 for the bound network, kernel bandwidth
    /// 0.1.
    pub fn defaults_for(data_source: DataSource) -> Self {
        Self {
            data_source,
            models: ModelKind::ALL.to_vec(),
            replications: 30,
            train_fraction: 0.8,
            split_mode: None,
            rann: TrainConfig::rann_defaults(),
            imlp: TrainConfig::imlp_defaults(),
            ikrcr_bandwidth: 0.1,
            master_seed: 42,
            output_format: OutputFormat::Markdown,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::InvalidConfig("no models selected".into()));
        }
        let mut seen = Vec::new();
        for m in &self.models {
            if seen.contains(m) {
                return Err(Error::InvalidConfig(format!("model `{m}` listed twice")));
            }
            seen.push(*m);
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be >= 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train_fraction must be in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if !(self.ikrcr_bandwidth > 0.0 && self.ikrcr_bandwidth.is_finite()) {
            return Err(Error::BandwidthInvalid(self.ikrcr_bandwidth));
        }
        self.rann.validate()?;
        self.imlp.validate()?;
        Ok(())
    }

    /// Effective split mode: an explicit setting wins, otherwise sequential
    /// for time-ordered CSV sources and random everywhere else.
    pub fn effective_split_mode(&self) -> SplitMode {
        if let Some(mode) = self.split_mode {
            return mode;
        }
        match &self.data_source {
            DataSource::Csv {
                time_ordered: true, ..
            } => SplitMode::Sequential,
            _ => SplitMode::Random,
        }
    }

    /// Stable one-line echo of every effective setting.
    pub fn summary(&self) -> String {
        let models: Vec<&str> = self.models.iter().map(|m| m.name()).collect();
        let split_mode = match self.effective_split_mode() {
            SplitMode::Random => "random",
            SplitMode::Sequential => "sequential",
        };
        format!(
            "data={} models={} replications={} train_fraction={} split_mode={split_mode} \
             master_seed={} rann(J={},lambda={},lr={},epochs={},batch={}) \
             imlp(J={},lr={},epochs={},batch={}) ikrcr_bandwidth={}",
            self.data_source.label(),
            models.join("+"),
            self.replications,
            self.train_fraction,
            self.master_seed,
            self.rann.hidden_units,
            self.rann.lambda,
            self.rann.learning_rate,
            self.rann.epochs,
            self.rann.batch_size,
            self.imlp.hidden_units,
            self.imlp.learning_rate,
            self.imlp.epochs,
            self.imlp.batch_size,
            self.ikrcr_bandwidth,
        )
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        raw.into_config()
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}

/// Flat key/value config file schema. Defaults follow
/// [`ExperimentConfig::defaults_for`].
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    data_source: String,
    scenario_n: Option<usize>,
    csv_path: Option<PathBuf>,
    csv_target: Option<String>,
    #[serde(default)]
    time_ordered: bool,
    models: Option<Vec<String>>,
    replications: Option<usize>,
    train_fraction: Option<f64>,
    split_mode: Option<SplitMode>,
    master_seed: Option<u64>,
    ikrcr_bandwidth: Option<f64>,
    rann_hidden_units: Option<usize>,
    rann_lambda: Option<f64>,
    rann_learning_rate: Option<f64>,
    rann_epochs: Option<usize>,
    rann_batch_size: Option<usize>,
    imlp_hidden_units: Option<usize>,
    imlp_learning_rate: Option<f64>,
    imlp_epochs: Option<usize>,
    imlp_batch_size: Option<usize>,
    output_format: Option<String>,
    output_path: Option<PathBuf>,
}

impl RawConfig {
    fn into_config(self) -> Result<ExperimentConfig> {
        let scenario_n = self.scenario_n.unwrap_or(300);
        let data_source = match self.data_source.trim().to_ascii_lowercase().as_str() {
            "scenario1" => DataSource::Scenario1 { n: scenario_n },
            "scenario2" => DataSource::Scenario2 { n: scenario_n },
            "csv" => DataSource::Csv {
                path: self.csv_path.ok_or_else(|| {
                    Error::InvalidConfig("csv data source needs csv_path".into())
                })?,
                target: self.csv_target.ok_or_else(|| {
                    Error::InvalidConfig("csv data source needs csv_target".into())
                })?,
                time_ordered: self.time_ordered,
            },
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown data_source `{other}`"
                )))
            }
        };

        let mut cfg = ExperimentConfig::defaults_for(data_source);
        if let Some(models) = self.models {
            cfg.models = models
                .iter()
                .map(|m| ModelKind::parse(m))
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(v) = self.replications {
            cfg.replications = v;
        }
        if let Some(v) = self.train_fraction {
            cfg.train_fraction = v;
        }
        cfg.split_mode = self.split_mode;
        if let Some(v) = self.master_seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.ikrcr_bandwidth {
            cfg.ikrcr_bandwidth = v;
        }
        if let Some(v) = self.rann_hidden_units {
            cfg.rann.hidden_units = v;
        }
        if let Some(v) = self.rann_lambda {
            cfg.rann.lambda = v;
        }
        if let Some(v) = self.rann_learning_rate {
            cfg.rann.learning_rate = v;
        }
        if let Some(v) = self.rann_epochs {
            cfg.rann.epochs = v;
        }
        if let Some(v) = self.rann_batch_size {
            cfg.rann.batch_size = v;
        }
        if let Some(v) = self.imlp_hidden_units {
            cfg.imlp.hidden_units = v;
        }
        if let Some(v) = self.imlp_learning_rate {
            cfg.imlp.learning_rate = v;
        }
        if let Some(v) = self.imlp_epochs {
            cfg.imlp.epochs = v;
        }
        if let Some(v) = self.imlp_batch_size {
            cfg.imlp.batch_size = v;
        }
        if let Some(v) = self.output_format {
            cfg.output_format = OutputFormat::parse(&v)?;
        }
        cfg.output_path = self.output_path;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One model's scores on one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub model: ModelKind,
    pub replication: usize,
    pub metrics: MetricsReport,
    /// Hash of the training row indices; equal hashes within a replication
    /// confirm every model saw the same split.
    pub split_hash: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsSummary {
    pub mhd: f64,
    pub rmse_l: f64,
    pub rmse_u: f64,
    pub cr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelAggregate {
    pub model: ModelKind,
    pub mean: MetricsSummary,
    /// Sample standard deviations; absent for a single replication.
    pub std: Option<MetricsSummary>,
    pub crossed_total: usize,
    pub test_predictions_total: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config_summary: String,
    pub replications: usize,
    /// Ordered by (model position in the config, replication index).
    pub rows: Vec<ReplicationRecord>,
    pub aggregates: Vec<ModelAggregate>,
    pub wall_time: Duration,
}

impl ExperimentReport {
    pub fn aggregate_for(&self, model: ModelKind) -> Option<&ModelAggregate> {
        self.aggregates.iter().find(|a| a.model == model)
    }

    pub fn rows_for(&self, model: ModelKind) -> impl Iterator<Item = &ReplicationRecord> {
        self.rows.iter().filter(move |r| r.model == model)
    }
}

fn fnv1a(indices: &[usize]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &i in indices {
        for byte in (i as u64).to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}

// Per-replication seed streams.
const STREAM_DATA: u64 = 0;
const STREAM_SPLIT: u64 = 1;
const STREAM_RANN: u64 = 2;
const STREAM_IMLP: u64 = 3;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let started = Instant::now();

    let csv_data: Option<Arc<IntervalDataset>> = match &cfg.data_source {
        DataSource::Csv { path, target, .. } => {
            Some(Arc::new(IntervalDataset::load_csv(path, target)?))
        }
        _ => None,
    };
    let split_mode = cfg.effective_split_mode();

    let per_replication: Vec<Vec<ReplicationRecord>> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep, split_mode, csv_data.as_ref()))
        .collect::<Result<Vec<_>>>()?;

    // Reorder into (model, replication) blocks.
    let mut rows = Vec::with_capacity(cfg.replications * cfg.models.len());
    for (slot, model) in cfg.models.iter().enumerate() {
        for rep_records in &per_replication {
            debug_assert_eq!(rep_records[slot].model, *model);
            rows.push(rep_records[slot].clone());
        }
    }

    let aggregates = cfg
        .models
        .iter()
        .map(|&model| {
            let records: Vec<&ReplicationRecord> =
                rows.iter().filter(|r| r.model == model).collect();
            aggregate(model, &records)
        })
        .collect();

    Ok(ExperimentReport {
        config_summary: cfg.summary(),
        replications: cfg.replications,
        rows,
        aggregates,
        wall_time: started.elapsed(),
    })
}

fn run_replication(
    cfg: &ExperimentConfig,
    rep: usize,
    split_mode: SplitMode,
    csv_data: Option<&Arc<IntervalDataset>>,
) -> Result<Vec<ReplicationRecord>> {
    let rep_seed = derive_seed(cfg.master_seed, rep as u64);
    let annotate = |model: ModelKind| {
        move |e: Error| Error::ModelFailed {
            model: model.name().to_string(),
            replication: rep,
            source: Box::new(e),
        }
    };

    let data: IntervalDataset = match &cfg.data_source {
        DataSource::Scenario1 { n } => simgen::gen_scenario1(*n, derive_seed(rep_seed, STREAM_DATA))?,
        DataSource::Scenario2 { n } => simgen::gen_scenario2(*n, derive_seed(rep_seed, STREAM_DATA))?,
        DataSource::Csv { .. } => csv_data.unwrap().as_ref().clone(),
    };

    let spec = SplitSpec {
        train_fraction: cfg.train_fraction,
        mode: split_mode,
        seed: derive_seed(rep_seed, STREAM_SPLIT),
    };
    let (train_idx, test_idx) = data.split_indices(&spec)?;
    let split_hash = fnv1a(&train_idx);
    let train_set = data.subset(&train_idx)?;
    let test_set = data.subset(&test_idx)?;

    let mut rann_cfg = cfg.rann.clone();
    rann_cfg.seed = derive_seed(rep_seed, STREAM_RANN);
    let mut imlp_cfg = cfg.imlp.clone();
    imlp_cfg.seed = derive_seed(rep_seed, STREAM_IMLP);

    cfg.models
        .iter()
        .map(|&model| {
            let fitted =
                models::train(model, &train_set, &rann_cfg, &imlp_cfg, cfg.ikrcr_bandwidth)
                    .map_err(annotate(model))?;
            let predictions = fitted.predict(&test_set).map_err(annotate(model))?;
            let metrics = evaluate(test_set.targets(), &predictions).map_err(annotate(model))?;
            Ok(ReplicationRecord {
                model,
                replication: rep,
                metrics,
                split_hash,
            })
        })
        .collect()
}

fn aggregate(model: ModelKind, records: &[&ReplicationRecord]) -> ModelAggregate {
    let n = records.len();
    let mean_of = |f: &dyn Fn(&MetricsReport) -> f64| -> f64 {
        records.iter().map(|r| f(&r.metrics)).sum::<f64>() / n as f64
    };
    let std_of = |f: &dyn Fn(&MetricsReport) -> f64, mean: f64| -> f64 {
        let ss: f64 = records
            .iter()
            .map(|r| {
                let d = f(&r.metrics) - mean;
                d * d
            })
            .sum();
        (ss / (n as f64 - 1.0)).sqrt()
    };

    let mean = MetricsSummary {
        mhd: mean_of(&|m| m.mhd),
        rmse_l: mean_of(&|m| m.rmse_l),
        rmse_u: mean_of(&|m| m.rmse_u),
        cr: mean_of(&|m| m.cr),
    };
    let std = (n > 1).then(|| MetricsSummary {
        mhd: std_of(&|m| m.mhd, mean.mhd),
        rmse_l: std_of(&|m| m.rmse_l, mean.rmse_l),
        rmse_u: std_of(&|m| m.rmse_u, mean.rmse_u),
        cr: std_of(&|m| m.cr, mean.cr),
    });
    ModelAggregate {
        model,
        mean,
        std,
        crossed_total: records.iter().map(|r| r.metrics.crossed_count).sum(),
        test_predictions_total: records.iter().map(|r| r.metrics.n).sum(),
    }
}

/// Renders a report as markdown (one row per model, `mean (std)` cells) or
/// as tidy long-format CSV (`model,replication,metric,value` with `mean` and
/// `std` aggregate rows).
pub fn render_report(report: &ExperimentReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Markdown => render_markdown(report),
        OutputFormat::Csv => render_csv(report),
    }
}

fn fmt_cell(mean: f64, std: Option<f64>) -> String {
    match std {
        Some(s) => format!("{mean:.3} ({s:.3})"),
        None => format!("{mean:.3}"),
    }
}

fn render_markdown(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str("# Interval regression benchmark\n\n");
    out.push_str(&format!("- config: {}\n", report.config_summary));
    out.push_str(&format!("- replications: {}\n", report.replications));
    for agg in &report.aggregates {
        out.push_str(&format!(
            "- crossed predictions ({}): {}/{}\n",
            agg.model, agg.crossed_total, agg.test_predictions_total
        ));
    }
    out.push('\n');
    out.push_str("| model | MHD | RMSE_L | RMSE_U | CR |\n");
    out.push_str("|-------|-----|--------|--------|----|\n");
    for agg in &report.aggregates {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            agg.model,
            fmt_cell(agg.mean.mhd, agg.std.map(|s| s.mhd)),
            fmt_cell(agg.mean.rmse_l, agg.std.map(|s| s.rmse_l)),
            fmt_cell(agg.mean.rmse_u, agg.std.map(|s| s.rmse_u)),
            fmt_cell(agg.mean.cr, agg.std.map(|s| s.cr)),
        ));
    }
    out
}

fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("model,replication,metric,value\n");
    for row in &report.rows {
        let m = &row.metrics;
        for (name, value) in [
            ("mhd", m.mhd),
            ("rmse_l", m.rmse_l),
            ("rmse_u", m.rmse_u),
            ("cr", m.cr),
        ] {
            out.push_str(&format!(
                "{},{},{},{:.6}\n",
                row.model, row.replication, name, value
            ));
        }
    }
    for agg in &report.aggregates {
        for (name, mean, std) in [
            ("mhd", agg.mean.mhd, agg.std.map(|s| s.mhd)),
            ("rmse_l", agg.mean.rmse_l, agg.std.map(|s| s.rmse_l)),
            ("rmse_u", agg.mean.rmse_u, agg.std.map(|s| s.rmse_u)),
            ("cr", agg.mean.cr, agg.std.map(|s| s.cr)),
        ] {
            out.push_str(&format!("{},mean,{},{:.6}\n", agg.model, name, mean));
            if let Some(s) = std {
                out.push_str(&format!("{},std,{},{:.6}\n", agg.model, name, s));
            }
        }
    }
    out
}
