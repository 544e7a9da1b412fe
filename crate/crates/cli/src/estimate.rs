use std::path::{Path, PathBuf};

use dci_core::dci::{dci, DciConfig, DciOutput, InitMode};
use dci_core::graph::Pdag;
use dci_core::io::read_samples_path;
use serde::{Deserialize, Serialize};

use crate::config::InitChoice;
use crate::error::{CliError, CliResult};
use crate::simulate::parse_node_list;

/// Estimator settings as accepted by `estimate --config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateOptions {
    pub alpha: f64,
    pub alpha_skeleton: Option<f64>,
    pub alpha_orient: Option<f64>,
    pub alpha_dug: Option<f64>,
    pub init: InitChoice,
    /// Edge-list file with a D-UG to start from instead of `init`.
    pub dug: Option<PathBuf>,
    /// Changed-node list to pair with `dug`; defaults to its endpoints.
    pub changed_nodes: Option<PathBuf>,
    pub max_condition_size: Option<usize>,
    pub header: bool,
    pub record_tests: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            alpha: 0.05,
            alpha_skeleton: None,
            alpha_orient: None,
            alpha_dug: None,
            init: InitChoice::Complete,
            dug: None,
            changed_nodes: None,
            max_condition_size: None,
            header: false,
            record_tests: false,
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

impl EstimateOptions {
    pub fn dci_config(&self, p: usize) -> CliResult<DciConfig> {
        let mut cfg = DciConfig::with_alpha(self.alpha)
            .max_condition_size(self.max_condition_size)
            .record_tests(self.record_tests);
        cfg.alpha_skeleton = self.alpha_skeleton.unwrap_or(self.alpha);
        cfg.alpha_orient = self.alpha_orient.unwrap_or(self.alpha);
        cfg.alpha_dug = self.alpha_dug.unwrap_or(self.alpha);
        cfg.init = match (&self.dug, &self.changed_nodes) {
            (Some(dug_path), changed_path) => {
                let dug = Pdag::parse_edge_list(&read(dug_path)?, Some(p))?.skeleton();
                let changed_nodes = match changed_path {
                    Some(path) => parse_node_list(&read(path)?)?,
                    None => dug.incident_nodes(),
                };
                InitMode::Provided { dug, changed_nodes }
            }
            (None, Some(_)) => {
                return Err(CliError::Config(
                    "a changed-node list needs a D-UG file".into(),
                ))
            }
            (None, None) => match self.init {
                InitChoice::Complete => InitMode::Complete,
                InitChoice::ConstraintBased => InitMode::ConstraintBased,
            },
        };
        Ok(cfg)
    }
}

/// Runs the estimator on two CSV files and writes `dci.json` and
/// `ddag.txt` under `dir`.
pub fn cmd_estimate(
    data1: &Path,
    data2: &Path,
    opts: &EstimateOptions,
    dir: &Path,
) -> CliResult<DciOutput> {
    let s1 = read_samples_path(data1, opts.header)?;
    let s2 = read_samples_path(data2, opts.header)?;
    if s1.data.ncols() != s2.data.ncols() {
        return Err(dci_core::Error::InvalidInput(format!(
            "{} has {} columns, {} has {}",
            data1.display(),
            s1.data.ncols(),
            data2.display(),
            s2.data.ncols()
        ))
        .into());
    }
    if let (Some(a), Some(b)) = (&s1.labels, &s2.labels) {
        if a != b {
            return Err(
                dci_core::Error::InvalidInput("column labels differ between files".into()).into(),
            );
        }
    }
    let cfg = opts.dci_config(s1.data.ncols())?;
    let out = dci(&s1.data, &s2.data, &cfg)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let json = dir.join("dci.json");
    std::fs::write(&json, out.to_json()?).map_err(|e| CliError::io(&json, e))?;
    let edges = dir.join("ddag.txt");
    std::fs::write(&edges, out.ddag.to_edge_list()).map_err(|e| CliError::io(&edges, e))?;
    Ok(out)
}
