//! Scoring an estimate against the true difference DAG and aggregating
//! trials into one row per grid point.

use std::collections::BTreeSet;
use std::io::Write;

use dci_core::graph::{unordered, Dag, Pdag};
use serde::Serialize;

use crate::config::Protocol;

/// First line of every metrics CSV.
pub const METRICS_SCHEMA: &str = "# dci-metrics v1";
/// First line of every per-trial CSV.
pub const TRIALS_SCHEMA: &str = "# dci-trials v1";

/// Edge-level comparison of one estimate with the truth.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub skeleton_tp: usize,
    pub skeleton_fp: usize,
    pub skeleton_pos: usize,
    pub skeleton_neg: usize,
    pub arrow_tp: usize,
    pub arrow_fp: usize,
    pub arrow_pos: usize,
    pub arrow_neg: usize,
}

impl Confusion {
    /// Skeleton rates use all unordered pairs as the universe; arrow rates
    /// use all ordered pairs, counting only printed arrows as claims.
    pub fn new(estimate: &Pdag, truth: &Dag) -> Self {
        let p = truth.p();
        let true_skel = truth.skeleton();
        let est_skel = estimate.skeleton();
        let skeleton_tp = est_skel.edges().intersection(true_skel.edges()).count();
        let arrow_tp = estimate
            .arrows()
            .iter()
            .filter(|&&(a, b)| truth.contains(a, b))
            .count();
        let pairs = p * p.saturating_sub(1) / 2;
        Confusion {
            skeleton_tp,
            skeleton_fp: est_skel.len() - skeleton_tp,
            skeleton_pos: true_skel.len(),
            skeleton_neg: pairs - true_skel.len(),
            arrow_tp,
            arrow_fp: estimate.arrows().len() - arrow_tp,
            arrow_pos: truth.arrows().len(),
            arrow_neg: 2 * pairs - truth.arrows().len(),
        }
    }

    fn add(&mut self, o: &Confusion) {
        self.skeleton_tp += o.skeleton_tp;
        self.skeleton_fp += o.skeleton_fp;
        self.skeleton_pos += o.skeleton_pos;
        self.skeleton_neg += o.skeleton_neg;
        self.arrow_tp += o.arrow_tp;
        self.arrow_fp += o.arrow_fp;
        self.arrow_pos += o.arrow_pos;
        self.arrow_neg += o.arrow_neg;
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Recovery flags for one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recovery {
    pub skeleton_exact: bool,
    /// Skeleton exact and no printed arrow wrong.
    pub no_wrong_arrow: bool,
    /// Additionally, nothing the population oracle orients is left undirected.
    pub full_exact: bool,
    pub oriented: usize,
    pub edges: usize,
}

/// `orientable` lists the unordered pairs the population oracle orients;
/// `None` means every true edge counts as orientable.
pub fn recovery(
    estimate: &Pdag,
    truth: &Dag,
    orientable: Option<&BTreeSet<(usize, usize)>>,
) -> Recovery {
    let skeleton_exact = estimate.skeleton() == truth.skeleton();
    let no_wrong_arrow =
        skeleton_exact && estimate.arrows().iter().all(|&(a, b)| truth.contains(a, b));
    let complete = estimate
        .undirected()
        .iter()
        .all(|&(a, b)| match orientable {
            Some(set) => !set.contains(&unordered(a, b)),
            None => false,
        });
    Recovery {
        skeleton_exact,
        no_wrong_arrow,
        full_exact: no_wrong_arrow && complete,
        oriented: estimate.arrows().len(),
        edges: estimate.adjacency_count(),
    }
}

/// Everything recorded about one estimator run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub v: usize,
    pub n: usize,
    pub alpha: f64,
    pub outcome: Result<TrialScore, String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialScore {
    pub recovery: Recovery,
    pub confusion: Confusion,
    pub test_count: usize,
    pub skeleton_tests: usize,
    /// `|Δ_Θ| · 2^{|S_Θ|−1}` for the D-UG the run started from.
    pub skeleton_bound: f64,
}

impl TrialScore {
    pub fn within_bound(&self) -> bool {
        self.skeleton_tests as f64 <= self.skeleton_bound
    }
}

/// Worst-case skeleton-phase test count for a D-UG with `edges` edges over
/// `changed` nodes.
pub fn skeleton_test_bound(edges: usize, changed: usize) -> f64 {
    if edges == 0 {
        0.0
    } else {
        edges as f64 * 2f64.powi(changed as i32 - 1)
    }
}

/// One aggregated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub protocol: &'static str,
    pub p: usize,
    pub s: f64,
    pub v: usize,
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub skeleton_exact: f64,
    pub full_exact: f64,
    pub full_exact_weak: f64,
    pub oriented_fraction: f64,
    pub skeleton_tpr: f64,
    pub skeleton_fpr: f64,
    pub tpr: f64,
    pub fpr: f64,
    pub mean_test_count: f64,
    pub mean_skeleton_tests: f64,
    pub bound_violations: usize,
    pub failures: usize,
}

pub fn protocol_name(protocol: Protocol) -> &'static str {
    match protocol {
        Protocol::Consistency => "consistency",
        Protocol::VarianceSweep => "variance_sweep",
        Protocol::Roc => "roc",
    }
}

impl MetricsRow {
    /// Exactness fractions count failed trials as misses; rates and means are
    /// over successful trials. An estimate with no edges counts as fully
    /// oriented.
    pub fn aggregate(
        protocol: Protocol,
        p: usize,
        s: f64,
        (v, n, alpha): (usize, usize, f64),
        records: &[&TrialRecord],
    ) -> Self {
        let trials = records.len();
        let scores: Vec<&TrialScore> = records
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok())
            .collect();
        let ok = scores.len();
        let frac = |f: &dyn Fn(&Recovery) -> bool| {
            ratio(scores.iter().filter(|s| f(&s.recovery)).count(), trials)
        };
        let mut total = Confusion::default();
        for s in &scores {
            total.add(&s.confusion);
        }
        let mean = |f: &dyn Fn(&TrialScore) -> f64| {
            if ok == 0 {
                0.0
            } else {
                scores.iter().map(|s| f(s)).sum::<f64>() / ok as f64
            }
        };
        MetricsRow {
            protocol: protocol_name(protocol),
            p,
            s,
            v,
            n,
            alpha,
            trials,
            skeleton_exact: frac(&|r| r.skeleton_exact),
            full_exact: frac(&|r| r.full_exact),
            full_exact_weak: frac(&|r| r.no_wrong_arrow),
            oriented_fraction: mean(&|s| {
                let r = &s.recovery;
                if r.edges == 0 {
                    1.0
                } else {
                    r.oriented as f64 / r.edges as f64
                }
            }),
            skeleton_tpr: ratio(total.skeleton_tp, total.skeleton_pos),
            skeleton_fpr: ratio(total.skeleton_fp, total.skeleton_neg),
            tpr: ratio(total.arrow_tp, total.arrow_pos),
            fpr: ratio(total.arrow_fp, total.arrow_neg),
            mean_test_count: mean(&|s| s.test_count as f64),
            mean_skeleton_tests: mean(&|s| s.skeleton_tests as f64),
            bound_violations: scores.iter().filter(|s| !s.within_bound()).count(),
            failures: trials - ok,
        }
    }
}

pub fn write_metrics<W: Write>(mut out: W, rows: &[MetricsRow]) -> std::io::Result<()> {
    writeln!(out, "{METRICS_SCHEMA}")?;
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()
}

#[derive(Serialize)]
struct TrialRow<'a> {
    trial: usize,
    v: usize,
    n: usize,
    alpha: f64,
    status: &'a str,
    skeleton_exact: Option<bool>,
    full_exact: Option<bool>,
    full_exact_weak: Option<bool>,
    edges: Option<usize>,
    oriented: Option<usize>,
    test_count: Option<usize>,
    skeleton_tests: Option<usize>,
    skeleton_bound: Option<f64>,
    wall_ms: f64,
}

pub fn write_trials<W: Write>(mut out: W, records: &[TrialRecord]) -> std::io::Result<()> {
    writeln!(out, "{TRIALS_SCHEMA}")?;
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in records {
        let s = r.outcome.as_ref().ok();
        wtr.serialize(TrialRow {
            trial: r.trial,
            v: r.v,
            n: r.n,
            alpha: r.alpha,
            status: match &r.outcome {
                Ok(_) => "ok",
                Err(e) => e,
            },
            skeleton_exact: s.map(|s| s.recovery.skeleton_exact),
            full_exact: s.map(|s| s.recovery.full_exact),
            full_exact_weak: s.map(|s| s.recovery.no_wrong_arrow),
            edges: s.map(|s| s.recovery.edges),
            oriented: s.map(|s| s.recovery.oriented),
            test_count: s.map(|s| s.test_count),
            skeleton_tests: s.map(|s| s.skeleton_tests),
            skeleton_bound: s.map(|s| s.skeleton_bound),
            wall_ms: r.wall_ms,
        })?;
    }
    wtr.flush()
}
