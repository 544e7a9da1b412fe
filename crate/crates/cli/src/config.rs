//! Experiment configuration and the built-in protocol presets.

use std::path::{Path, PathBuf};

use dci_core::sem::GenConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "DCI_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Recovery rates over a grid of sample sizes and significance levels.
    Consistency,
    /// Recovery and orientation rates as more noise variances change.
    VarianceSweep,
    /// Edgewise true/false positive rates along a significance sweep.
    Roc,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InitChoice {
    #[default]
    Complete,
    ConstraintBased,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    pub gen: GenConfig,
    pub n_samples: Vec<usize>,
    pub alphas: Vec<f64>,
    /// Grid over the number of changed noise variances. Empty means the single
    /// value in `gen`.
    #[serde(default)]
    pub variance_counts: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub init: InitChoice,
    #[serde(default)]
    pub max_condition_size: Option<usize>,
    /// Metrics CSV path. Relative paths resolve against the output directory.
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Ten nodes, neighbourhood size three, one in ten edges flipped.
    pub fn consistency() -> Self {
        ExperimentConfig {
            protocol: Protocol::Consistency,
            gen: GenConfig::bernoulli(10, 3.0, 0.1),
            n_samples: vec![1_000, 10_000],
            alphas: vec![0.01, 0.05],
            variance_counts: Vec::new(),
            trials: 100,
            seed: 0,
            init: InitChoice::Complete,
            max_condition_size: None,
            output_path: None,
        }
    }

    pub fn variance_sweep() -> Self {
        ExperimentConfig {
            protocol: Protocol::VarianceSweep,
            n_samples: vec![10_000],
            alphas: vec![0.05],
            variance_counts: vec![0, 2, 4, 6],
            ..ExperimentConfig::consistency()
        }
    }

    /// Thirty nodes with neighbourhood size six and a 5% change budget;
    /// `full_scale` switches to 100 nodes and neighbourhood size ten.
    pub fn roc(full_scale: bool) -> Self {
        let (p, s) = if full_scale { (100, 10.0) } else { (30, 6.0) };
        ExperimentConfig {
            protocol: Protocol::Roc,
            gen: GenConfig::budget(p, s, 0.05),
            n_samples: vec![300],
            alphas: vec![0.2, 0.1, 0.05, 0.01, 0.001],
            variance_counts: Vec::new(),
            trials: 20,
            seed: 0,
            init: InitChoice::Complete,
            max_condition_size: Some(2),
            output_path: None,
        }
    }

    pub fn preset(protocol: Protocol) -> Self {
        match protocol {
            Protocol::Consistency => ExperimentConfig::consistency(),
            Protocol::VarianceSweep => ExperimentConfig::variance_sweep(),
            Protocol::Roc => ExperimentConfig::roc(false),
        }
    }

    pub fn from_json_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Values of `v` swept over.
    pub fn variance_grid(&self) -> Vec<usize> {
        if self.variance_counts.is_empty() {
            vec![self.gen.changed_variances]
        } else {
            self.variance_counts.clone()
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.gen.validate()?;
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.n_samples.is_empty() || self.alphas.is_empty() {
            return Err(CliError::Config(
                "sample-size and significance grids must be nonempty".into(),
            ));
        }
        if let Some(&n) = self.n_samples.iter().find(|&&n| n < 2) {
            return Err(CliError::Config(format!("sample size {n} is below 2")));
        }
        if let Some(a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return Err(CliError::Config(format!(
                "significance level {a} outside (0, 1)"
            )));
        }
        if let Some(v) = self.variance_grid().into_iter().find(|&v| v > self.gen.p) {
            return Err(CliError::Config(format!(
                "{v} changed variances requested for {} nodes",
                self.gen.p
            )));
        }
        Ok(())
    }
}

/// Output directory: the given one, else `$DCI_OUTPUT_DIR`, else `.`.
pub fn output_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for protocol in [
            Protocol::Consistency,
            Protocol::VarianceSweep,
            Protocol::Roc,
        ] {
            ExperimentConfig::preset(protocol).validate().unwrap();
        }
        ExperimentConfig::roc(true).validate().unwrap();
    }

    #[test]
    fn rejects_empty_grids() {
        let mut cfg = ExperimentConfig::consistency();
        cfg.alphas.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::consistency();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = ExperimentConfig::variance_sweep();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
}
