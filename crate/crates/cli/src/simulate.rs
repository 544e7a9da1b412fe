use std::path::{Path, PathBuf};

use dci_core::graph::NodeSet;
use dci_core::io::write_samples_path;
use dci_core::rng;
use dci_core::sem::{random_sem_pair, GenConfig, SemPair};

use crate::error::{CliError, CliResult};

/// Files written by [`cmd_simulate`].
#[derive(Debug, Clone)]
pub struct SimulatedFiles {
    pub sem1: PathBuf,
    pub sem2: PathBuf,
    pub data1: PathBuf,
    pub data2: PathBuf,
    pub true_ddag: PathBuf,
    pub true_dug: PathBuf,
    pub changed_nodes: PathBuf,
}

impl SimulatedFiles {
    fn under(dir: &Path) -> Self {
        SimulatedFiles {
            sem1: dir.join("sem1.json"),
            sem2: dir.join("sem2.json"),
            data1: dir.join("data1.csv"),
            data2: dir.join("data2.csv"),
            true_ddag: dir.join("true_ddag.txt"),
            true_dug: dir.join("true_dug.txt"),
            changed_nodes: dir.join("changed_nodes.txt"),
        }
    }
}

/// One 1-based label per line.
pub fn node_list(nodes: &NodeSet) -> String {
    nodes.iter().map(|v| format!("{}\n", v + 1)).collect()
}

/// Parses 1-based labels separated by whitespace or commas; `#` starts a
/// comment.
pub fn parse_node_list(text: &str) -> CliResult<NodeSet> {
    let mut out = NodeSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split(|c: char| c.is_whitespace() || c == ',') {
            if token.is_empty() {
                continue;
            }
            match token.parse::<usize>() {
                Ok(v) if v > 0 => {
                    out.insert(v - 1);
                }
                _ => {
                    return Err(dci_core::Error::Parse {
                        line: lineno + 1,
                        message: format!("bad node label `{token}`"),
                    }
                    .into())
                }
            }
        }
    }
    Ok(out)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Draws a pair and two datasets of `n` rows from seed `seed` (trial 0 of the
/// benchmark streams) and writes them with the ground truth under `dir`.
pub fn cmd_simulate(
    gen: &GenConfig,
    n: usize,
    seed: u64,
    header: bool,
    dir: &Path,
) -> CliResult<(SemPair, SimulatedFiles)> {
    if n == 0 {
        return Err(CliError::Config("sample size must be positive".into()));
    }
    let pair = random_sem_pair(gen, &mut rng::stream(seed, &[0, rng::PAIR]))?;
    let d1 = pair
        .first
        .sample(n, &mut rng::stream(seed, &[0, rng::SAMPLE_FIRST]));
    let d2 = pair
        .second
        .sample(n, &mut rng::stream(seed, &[0, rng::SAMPLE_SECOND]));

    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let files = SimulatedFiles::under(dir);
    write(&files.sem1, &pair.first.to_json()?)?;
    write(&files.sem2, &pair.second.to_json()?)?;
    let labels: Option<Vec<String>> =
        header.then(|| (1..=pair.p()).map(|k| format!("X{k}")).collect());
    write_samples_path(&files.data1, &d1, labels.as_deref())?;
    write_samples_path(&files.data2, &d2, labels.as_deref())?;
    let (dug, changed) = pair.true_dug();
    write(&files.true_ddag, &pair.true_ddag().to_edge_list())?;
    write(&files.true_dug, &dug.to_edge_list())?;
    write(&files.changed_nodes, &node_list(&changed))?;
    Ok((pair, files))
}
