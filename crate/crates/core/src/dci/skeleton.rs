//! Skeleton search: drop an edge once some conditioning set makes either
//! regression coefficient invariant.

use super::oracle::{DatasetPair, Oracle, SampleOracle};
use super::{subsets, DciConfig, Ledger, Phase, TestKind, TestRecord};
use crate::error::Result;
use crate::graph::{NodeSet, UndirectedGraph};

pub(crate) struct SkeletonRun {
    pub skeleton: UndirectedGraph,
    pub flagged: Vec<(usize, usize)>,
}

pub(crate) fn skeleton_with(
    oracle: &dyn Oracle,
    dug: &UndirectedGraph,
    changed: &NodeSet,
    cap: usize,
    ledger: &mut Ledger,
) -> Result<SkeletonRun> {
    let mut kept = Vec::new();
    let mut flagged = Vec::new();
    for &(i, j) in dug.edges() {
        let candidates: Vec<usize> = changed
            .iter()
            .copied()
            .filter(|&v| v != i && v != j)
            .collect();
        let (mut attempts, mut failures) = (0usize, 0usize);
        let mut deleted = false;
        'search: for cond in subsets(&candidates, cap) {
            for (a, b) in [(i, j), (j, i)] {
                attempts += 1;
                let outcome = oracle.coefficient(a, b, &cond);
                let mut record = TestRecord {
                    phase: Phase::Skeleton,
                    kind: TestKind::Coefficient,
                    i: Some(a),
                    j: b,
                    cond: Vec::new(),
                    dataset: None,
                    statistic: None,
                    p_value: None,
                    reject: None,
                    error: None,
                };
                let invariant = match outcome {
                    Ok(probe) => {
                        record.statistic = Some(probe.statistic);
                        record.p_value = probe.p_value;
                        record.reject = Some(!probe.invariant);
                        probe.invariant
                    }
                    Err(e) => {
                        if oracle.exact() {
                            return Err(e);
                        }
                        log::debug!(
                            "coefficient test {}->{} | {:?} failed: {e}",
                            a + 1,
                            b + 1,
                            cond
                        );
                        failures += 1;
                        record.error = Some(e.to_string());
                        false
                    }
                };
                record.cond = cond.clone();
                ledger.push(record);
                if invariant {
                    deleted = true;
                    break 'search;
                }
            }
        }
        if !deleted {
            kept.push((i, j));
            if attempts > 0 && failures == attempts {
                log::warn!("every test on edge {}-{} failed; keeping it", i + 1, j + 1);
                flagged.push((i, j));
            }
        }
    }
    Ok(SkeletonRun {
        skeleton: UndirectedGraph::new(dug.p(), kept)?,
        flagged,
    })
}

/// Prunes `dug` to the estimated skeleton of the difference DAG, conditioning
/// on subsets of `changed`.
pub fn estimate_skeleton(
    data: &DatasetPair,
    dug: &UndirectedGraph,
    changed: &NodeSet,
    cfg: &DciConfig,
) -> Result<UndirectedGraph> {
    cfg.validate()?;
    let oracle = SampleOracle {
        data,
        alpha: cfg.alpha_skeleton,
    };
    let mut ledger = Ledger::new(false);
    Ok(skeleton_with(&oracle, dug, changed, cfg.cap(), &mut ledger)?.skeleton)
}
