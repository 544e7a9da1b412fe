//! The difference-DAG estimator: D-UG initialization, skeleton search over
//! coefficient invariances, and orientation from residual-variance
//! invariances.

mod assumptions;
mod dug;
mod oracle;
mod orient;
mod skeleton;

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeSet, Pdag, UndirectedGraph};
use crate::sem::{SemPair, POPULATION_TOL};

pub use assumptions::{check_assumptions, check_assumptions_over, Assumption, Violation};
pub use dug::{estimate_dug_constraint_based, init_dug_complete};
pub use oracle::DatasetPair;
pub use orient::orient_edges;
pub use skeleton::estimate_skeleton;

use oracle::{Oracle, PopulationOracle, SampleOracle};

/// Conditioning-set cap applied to sample runs when none is configured.
pub const DEFAULT_SAMPLE_CONDITION_CAP: usize = 12;

/// Where the D-UG and changed-node set come from.
#[derive(Debug, Clone, PartialEq)]
pub enum InitMode {
    /// Complete graph with every node marked as changed.
    Complete,
    /// Per-entry tests on the two inverse sample covariances.
    ConstraintBased,
    /// Supplied by the caller, e.g. from an external D-UG estimator.
    Provided {
        dug: UndirectedGraph,
        changed_nodes: NodeSet,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DciConfig {
    pub alpha_skeleton: f64,
    pub alpha_orient: f64,
    pub alpha_dug: f64,
    /// Largest conditioning set tried; `None` means
    /// [`DEFAULT_SAMPLE_CONDITION_CAP`] for sample runs and unbounded for
    /// population runs.
    pub max_condition_size: Option<usize>,
    pub init: InitMode,
    /// Keep a record of every test in the output.
    pub record_tests: bool,
}

impl Default for DciConfig {
    fn default() -> Self {
        DciConfig::with_alpha(0.05)
    }
}

impl DciConfig {
    /// One significance level for all three phases.
    pub fn with_alpha(alpha: f64) -> Self {
        DciConfig {
            alpha_skeleton: alpha,
            alpha_orient: alpha,
            alpha_dug: alpha,
            max_condition_size: None,
            init: InitMode::Complete,
            record_tests: false,
        }
    }

    pub fn init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    pub fn max_condition_size(mut self, cap: Option<usize>) -> Self {
        self.max_condition_size = cap;
        self
    }

    pub fn record_tests(mut self, on: bool) -> Self {
        self.record_tests = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("alpha_skeleton", self.alpha_skeleton),
            ("alpha_orient", self.alpha_orient),
            ("alpha_dug", self.alpha_dug),
        ] {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidInput(format!("{name} = {a} outside (0, 1)")));
            }
        }
        Ok(())
    }

    fn cap(&self) -> usize {
        self.max_condition_size
            .unwrap_or(DEFAULT_SAMPLE_CONDITION_CAP)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Dug,
    Skeleton,
    Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    /// `β_{i,j|S}` invariance.
    Coefficient,
    /// `σ²_{j|S}` invariance.
    Variance,
    /// Off-diagonal precision entry invariance.
    PrecisionEntry,
    /// Zero partial correlation within one dataset.
    PartialCorrelation,
}

/// One executed test. Node indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub phase: Phase,
    pub kind: TestKind,
    pub i: Option<usize>,
    pub j: usize,
    pub cond: Vec<usize>,
    /// Set for single-dataset tests (1 or 2).
    pub dataset: Option<u8>,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// `None` if the test failed to run.
    pub reject: Option<bool>,
    pub error: Option<String>,
}

/// Counts and optional record of executed tests.
#[derive(Debug, Default)]
pub(crate) struct Ledger {
    pub records: Option<Vec<TestRecord>>,
    pub dug: usize,
    pub skeleton: usize,
    pub orientation: usize,
}

impl Ledger {
    pub fn new(record: bool) -> Self {
        Ledger {
            records: record.then(Vec::new),
            ..Ledger::default()
        }
    }

    pub fn push(&mut self, record: TestRecord) {
        match record.phase {
            Phase::Dug => self.dug += 1,
            Phase::Skeleton => self.skeleton += 1,
            Phase::Orientation => self.orientation += 1,
        }
        if let Some(r) = self.records.as_mut() {
            r.push(record);
        }
    }
}

/// Subsets of `candidates` with at most `max_size` elements, by size and then
/// lexicographically.
pub(crate) fn subsets(
    candidates: &[usize],
    max_size: usize,
) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..=max_size.min(candidates.len()))
        .flat_map(move |k| candidates.iter().copied().combinations(k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DciOutput {
    /// Estimated difference DAG: skeleton with the oriented subset.
    pub ddag: Pdag,
    pub dug: UndirectedGraph,
    pub changed_nodes: NodeSet,
    pub test_count: usize,
    pub dug_tests: usize,
    pub skeleton_tests: usize,
    pub orientation_tests: usize,
    /// Edges kept only because every test on them failed to run.
    pub flagged_edges: Vec<(usize, usize)>,
    /// Edges left undirected because orientation votes tied.
    pub orientation_ties: Vec<(usize, usize)>,
    /// Voted arrows dropped because they would close a directed cycle.
    pub skipped_arrows: Vec<(usize, usize)>,
    pub test_log: Option<Vec<TestRecord>>,
}

/// JSON form of [`DciOutput`] with 1-based node labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DciReport {
    pub p: usize,
    pub arrows: Vec<(usize, usize)>,
    pub undirected: Vec<(usize, usize)>,
    pub dug: Vec<(usize, usize)>,
    pub changed_nodes: Vec<usize>,
    pub test_count: usize,
    pub dug_tests: usize,
    pub skeleton_tests: usize,
    pub orientation_tests: usize,
    pub flagged_edges: Vec<(usize, usize)>,
    pub orientation_ties: Vec<(usize, usize)>,
    pub skipped_arrows: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub test_log: Option<Vec<TestRecord>>,
}

fn one_based<'a>(pairs: impl IntoIterator<Item = &'a (usize, usize)>) -> Vec<(usize, usize)> {
    pairs.into_iter().map(|&(a, b)| (a + 1, b + 1)).collect()
}

impl DciOutput {
    pub fn report(&self) -> DciReport {
        let log = self.test_log.as_ref().map(|records| {
            records
                .iter()
                .map(|r| TestRecord {
                    i: r.i.map(|i| i + 1),
                    j: r.j + 1,
                    cond: r.cond.iter().map(|c| c + 1).collect(),
                    ..r.clone()
                })
                .collect()
        });
        DciReport {
            p: self.ddag.p(),
            arrows: one_based(self.ddag.arrows()),
            undirected: one_based(self.ddag.undirected()),
            dug: one_based(self.dug.edges()),
            changed_nodes: self.changed_nodes.iter().map(|v| v + 1).collect(),
            test_count: self.test_count,
            dug_tests: self.dug_tests,
            skeleton_tests: self.skeleton_tests,
            orientation_tests: self.orientation_tests,
            flagged_edges: one_based(&self.flagged_edges),
            orientation_ties: one_based(&self.orientation_ties),
            skipped_arrows: one_based(&self.skipped_arrows),
            test_log: log,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.report())?)
    }
}

fn check_provided(p: usize, dug: &UndirectedGraph, changed: &NodeSet) -> Result<()> {
    if dug.p() != p {
        return Err(Error::InvalidInput(format!(
            "provided D-UG has {} nodes, data has {p}",
            dug.p()
        )));
    }
    if let Some(v) = changed.iter().find(|&&v| v >= p) {
        return Err(Error::InvalidInput(format!(
            "changed node {} out of range",
            v + 1
        )));
    }
    if let Some(v) = dug
        .incident_nodes()
        .into_iter()
        .find(|v| !changed.contains(v))
    {
        return Err(Error::InvalidInput(format!(
            "node {} has a D-UG edge but is not in the changed-node set",
            v + 1
        )));
    }
    Ok(())
}

fn run(
    skeleton_oracle: &dyn Oracle,
    orient_oracle: &dyn Oracle,
    dug: UndirectedGraph,
    changed_nodes: NodeSet,
    cap: usize,
    mut ledger: Ledger,
) -> Result<DciOutput> {
    let skel = skeleton::skeleton_with(skeleton_oracle, &dug, &changed_nodes, cap, &mut ledger)?;
    let orient = orient::orient_with(
        orient_oracle,
        &changed_nodes,
        &skel.skeleton,
        cap,
        &mut ledger,
    )?;
    Ok(DciOutput {
        ddag: orient.pdag,
        dug,
        changed_nodes,
        test_count: ledger.dug + ledger.skeleton + ledger.orientation,
        dug_tests: ledger.dug,
        skeleton_tests: ledger.skeleton,
        orientation_tests: ledger.orientation,
        flagged_edges: skel.flagged,
        orientation_ties: orient.ties,
        skipped_arrows: orient.skipped,
        test_log: ledger.records,
    })
}

/// Runs the estimator on two sample matrices with the same columns.
pub fn dci(data1: &DMatrix<f64>, data2: &DMatrix<f64>, cfg: &DciConfig) -> Result<DciOutput> {
    dci_moments(&DatasetPair::new(data1, data2)?, cfg)
}

/// [`dci`] on precomputed sample moments.
pub fn dci_moments(data: &DatasetPair, cfg: &DciConfig) -> Result<DciOutput> {
    cfg.validate()?;
    let p = data.p();
    let mut ledger = Ledger::new(cfg.record_tests);
    let (dug, changed) = match &cfg.init {
        InitMode::Complete => init_dug_complete(p),
        InitMode::ConstraintBased => dug::dug_with(data, cfg.alpha_dug, &mut ledger)?,
        InitMode::Provided { dug, changed_nodes } => {
            check_provided(p, dug, changed_nodes)?;
            (dug.clone(), changed_nodes.clone())
        }
    };
    let skeleton_oracle = SampleOracle {
        data,
        alpha: cfg.alpha_skeleton,
    };
    let orient_oracle = SampleOracle {
        data,
        alpha: cfg.alpha_orient,
    };
    run(
        &skeleton_oracle,
        &orient_oracle,
        dug,
        changed,
        cfg.cap(),
        ledger,
    )
}

/// The estimator with every test replaced by exact comparison of population
/// regression quantities (`|difference| ≤ tol` means invariant).
///
/// `init` defaults to the complete graph with all nodes changed. Conflicting
/// orientation evidence is an error rather than a vote.
pub fn dci_population(
    pair: &SemPair,
    init: Option<(UndirectedGraph, NodeSet)>,
    tol: f64,
) -> Result<DciOutput> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let p = pair.p();
    let (dug, changed) = match init {
        Some((dug, changed)) => {
            check_provided(p, &dug, &changed)?;
            (dug, changed)
        }
        None => init_dug_complete(p),
    };
    let oracle = PopulationOracle::new(pair, tol);
    run(
        &oracle,
        &oracle,
        dug,
        changed,
        usize::MAX,
        Ledger::new(false),
    )
}

/// [`dci_population`] with the default tolerance.
pub fn dci_population_default(pair: &SemPair) -> Result<DciOutput> {
    dci_population(pair, None, POPULATION_TOL)
}
