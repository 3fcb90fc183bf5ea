//! `interbench` — run replicated interval-regression experiments, generate
//! synthetic datasets, and verify the analytic gradients numerically.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use interbench_core::bench::{render_report, run_experiment, ExperimentConfig, OutputFormat};
use interbench_core::nn::gradcheck_suite;
use interbench_core::simgen::Scenario;

#[derive(Parser)]
#[command(name = "interbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file.
    Run {
        /// Path to the flat key/value (TOML) experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Write the rendered report here instead of the config's
        /// output_path (or stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format: `markdown` or `csv`.
        #[arg(long)]
        format: Option<String>,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate a synthetic dataset and write it as CSV.
    Gen {
        /// Scenario number: 1 (linear) or 2 (nonlinear).
        #[arg(long)]
        scenario: String,
        /// Number of samples.
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check analytic gradients against central finite differences.
    Gradcheck {
        /// Number of random configurations.
        #[arg(long, default_value_t = 24)]
        configs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Acceptance threshold on the max relative error.
        #[arg(long, default_value_t = 1e-5)]
        threshold: f64,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            format,
            seed,
        } => run(config, out, format, seed),
        Command::Gen {
            scenario,
            n,
            seed,
            out,
        } => gen(&scenario, n, seed, out),
        Command::Gradcheck {
            configs,
            seed,
            threshold,
        } => gradcheck(configs, seed, threshold),
    }
}

fn run(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<String>,
    seed: Option<u64>,
) -> anyhow::Result<()> {
    let mut cfg = ExperimentConfig::load(&config)
        .with_context(|| format!("loading config {}", config.display()))?;
    if let Some(seed) = seed {
        cfg.master_seed = seed;
    }
    if let Some(format) = format {
        cfg.output_format = OutputFormat::parse(&format)?;
    }
    if let Some(path) = out {
        cfg.output_path = Some(path);
    }

    let started = Instant::now();
    let report = run_experiment(&cfg)?;
    eprintln!(
        "ran {} replications x {} models in {:.2?}",
        report.replications,
        cfg.models.len(),
        started.elapsed()
    );

    let rendered = render_report(&report, cfg.output_format);
    match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, rendered)
                .with_context(|| format!("writing report to {}", path.display()))?;
            eprintln!("report written to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn gen(scenario: &str, n: usize, seed: u64, out: PathBuf) -> anyhow::Result<()> {
    let dataset = Scenario::parse(scenario)?.generate(n, seed)?;
    dataset
        .write_csv(&out)
        .with_context(|| format!("writing dataset to {}", out.display()))?;
    eprintln!(
        "wrote {} rows x {} predictors to {}",
        dataset.n_samples(),
        dataset.n_predictors(),
        out.display()
    );
    Ok(())
}

fn gradcheck(configs: usize, seed: u64, threshold: f64) -> anyhow::Result<()> {
    let started = Instant::now();
    let report = gradcheck_suite(configs, seed);
    for (i, case) in report.cases.iter().enumerate() {
        println!(
            "case {i:2}: p={} J={} batch={} lambda={:>4} crossed_rows={} max_rel_err={:.3e}",
            case.n_predictors,
            case.hidden_units,
            case.batch_len,
            case.lambda,
            case.crossed_rows,
            case.max_relative_error
        );
    }
    let max = report.max_relative_error();
    println!(
        "max relative error over {} configurations: {:.3e} ({:.2?})",
        report.cases.len(),
        max,
        started.elapsed()
    );
    if !max.is_finite() || max >= threshold {
        bail!("gradient check failed: {max:.3e} >= {threshold:.1e}");
    }
    Ok(())
}
