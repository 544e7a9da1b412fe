//! Seeded Monte Carlo harness over random SEM pairs.
//!
//! Trial `t` draws its pair from stream `(seed, [t, PAIR])` and its datasets
//! from `(seed, [t, SAMPLE_FIRST])` and `(seed, [t, SAMPLE_SECOND])`, so every
//! grid point of a trial sees the same structure and noise. Trials run in
//! parallel and are reduced in trial order.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dci_core::dci::{dci_moments, dci_population, DatasetPair, DciConfig, InitMode};
use dci_core::graph::unordered;
use dci_core::rng;
use dci_core::sem::{random_sem_pair, SemPair, POPULATION_TOL};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, InitChoice};
use crate::error::{CliError, CliResult};
use crate::metrics::{
    recovery, skeleton_test_bound, write_metrics, write_trials, Confusion, MetricsRow, TrialRecord,
    TrialScore,
};

/// Largest changed-node set for which the population reference orientation
/// is computed; beyond it every true edge counts as orientable.
pub const REFERENCE_MAX_CHANGED: usize = 12;

pub struct BenchmarkOutput {
    pub rows: Vec<MetricsRow>,
    /// Trial-major, then grid order.
    pub trials: Vec<TrialRecord>,
}

fn grid(cfg: &ExperimentConfig) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for v in cfg.variance_grid() {
        for &n in &cfg.n_samples {
            for &alpha in &cfg.alphas {
                out.push((v, n, alpha));
            }
        }
    }
    out
}

/// Unordered pairs that the population oracle orients, started from the true
/// D-UG.
fn orientable_edges(pair: &SemPair) -> Option<BTreeSet<(usize, usize)>> {
    let init = pair.true_dug();
    if init.1.len() > REFERENCE_MAX_CHANGED {
        return None;
    }
    match dci_population(pair, Some(init), POPULATION_TOL) {
        Ok(out) => Some(
            out.ddag
                .arrows()
                .iter()
                .map(|&(a, b)| unordered(a, b))
                .collect(),
        ),
        Err(e) => {
            log::debug!("population reference failed: {e}");
            None
        }
    }
}

fn dci_config(cfg: &ExperimentConfig, alpha: f64) -> DciConfig {
    let init = match cfg.init {
        InitChoice::Complete => InitMode::Complete,
        InitChoice::ConstraintBased => InitMode::ConstraintBased,
    };
    DciConfig::with_alpha(alpha)
        .init(init)
        .max_condition_size(cfg.max_condition_size)
}

fn failed(trial: usize, point: (usize, usize, f64), message: &str) -> TrialRecord {
    TrialRecord {
        trial,
        v: point.0,
        n: point.1,
        alpha: point.2,
        outcome: Err(message.to_owned()),
        wall_ms: 0.0,
    }
}

/// Runs every grid point of one trial.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Vec<TrialRecord> {
    let t = trial as u64;
    let mut out = Vec::new();
    for v in cfg.variance_grid() {
        let gen = cfg.gen.clone().with_changed_variances(v);
        let pair = match random_sem_pair(&gen, &mut rng::stream(cfg.seed, &[t, rng::PAIR])) {
            Ok(pair) => pair,
            Err(e) => {
                for &n in &cfg.n_samples {
                    for &alpha in &cfg.alphas {
                        out.push(failed(trial, (v, n, alpha), &e.to_string()));
                    }
                }
                continue;
            }
        };
        let truth = pair.true_ddag();
        let orientable = orientable_edges(&pair);
        for &n in &cfg.n_samples {
            let d1 = pair
                .first
                .sample(n, &mut rng::stream(cfg.seed, &[t, rng::SAMPLE_FIRST]));
            let d2 = pair
                .second
                .sample(n, &mut rng::stream(cfg.seed, &[t, rng::SAMPLE_SECOND]));
            let data = DatasetPair::new(&d1, &d2);
            for &alpha in &cfg.alphas {
                let point = (v, n, alpha);
                let data = match &data {
                    Ok(d) => d,
                    Err(e) => {
                        out.push(failed(trial, point, &e.to_string()));
                        continue;
                    }
                };
                let start = Instant::now();
                let result = dci_moments(data, &dci_config(cfg, alpha));
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                let outcome = result
                    .map(|est| TrialScore {
                        recovery: recovery(&est.ddag, &truth, orientable.as_ref()),
                        confusion: Confusion::new(&est.ddag, &truth),
                        test_count: est.test_count,
                        skeleton_tests: est.skeleton_tests,
                        skeleton_bound: skeleton_test_bound(est.dug.len(), est.changed_nodes.len()),
                    })
                    .map_err(|e| e.to_string());
                if let Err(e) = &outcome {
                    log::warn!("trial {trial} at v={v}, n={n}, alpha={alpha} failed: {e}");
                }
                out.push(TrialRecord {
                    trial,
                    v,
                    n,
                    alpha,
                    outcome,
                    wall_ms,
                });
            }
        }
    }
    out
}

pub fn run_benchmark(cfg: &ExperimentConfig) -> CliResult<BenchmarkOutput> {
    cfg.validate()?;
    let points = grid(cfg);
    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, trial))
        .collect();
    let rows = points
        .iter()
        .enumerate()
        .map(|(g, &point)| {
            let records: Vec<&TrialRecord> = per_trial.iter().map(|t| &t[g]).collect();
            MetricsRow::aggregate(cfg.protocol, cfg.gen.p, cfg.gen.s, point, &records)
        })
        .collect();
    Ok(BenchmarkOutput {
        rows,
        trials: per_trial.into_iter().flatten().collect(),
    })
}

/// Metrics and per-trial CSV paths for `cfg` under `dir`.
pub fn output_paths(cfg: &ExperimentConfig, dir: &Path) -> (PathBuf, PathBuf) {
    let metrics = match &cfg.output_path {
        Some(p) => dir.join(p),
        None => dir.join(format!(
            "benchmark_{}.csv",
            crate::metrics::protocol_name(cfg.protocol)
        )),
    };
    let stem = metrics
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "benchmark".into());
    let trials = metrics.with_file_name(format!("{stem}_trials.csv"));
    (metrics, trials)
}

/// Runs the benchmark and writes both CSVs, returning their paths.
pub fn cmd_benchmark(cfg: &ExperimentConfig, dir: &Path) -> CliResult<(PathBuf, PathBuf)> {
    let output = run_benchmark(cfg)?;
    let (metrics, trials) = output_paths(cfg, dir);
    if let Some(parent) = metrics.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let file = std::fs::File::create(&metrics).map_err(|e| CliError::io(&metrics, e))?;
    write_metrics(std::io::BufWriter::new(file), &output.rows)
        .map_err(|e| CliError::io(&metrics, e))?;
    let file = std::fs::File::create(&trials).map_err(|e| CliError::io(&trials, e))?;
    write_trials(std::io::BufWriter::new(file), &output.trials)
        .map_err(|e| CliError::io(&trials, e))?;
    Ok((metrics, trials))
}
