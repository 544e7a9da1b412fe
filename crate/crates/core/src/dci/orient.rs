//! Orientation from residual-variance invariances followed by the chain rule.

use std::collections::{BTreeMap, BTreeSet};

use super::oracle::{DatasetPair, Oracle, SampleOracle};
use super::{subsets, DciConfig, Ledger, Phase, TestKind, TestRecord};
use crate::error::{Error, Result};
use crate::graph::{unordered, NodeSet, Pdag, UndirectedGraph};

pub(crate) struct OrientRun {
    pub pdag: Pdag,
    pub ties: Vec<(usize, usize)>,
    pub skipped: Vec<(usize, usize)>,
}

/// Votes on one edge `a - b` (`a < b`): `forward` counts `a -> b`.
#[derive(Default)]
struct Tally {
    forward: usize,
    backward: usize,
}

fn reaches(children: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; children.len()];
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend_from_slice(&children[v]);
        }
    }
    false
}

pub(crate) fn orient_with(
    oracle: &dyn Oracle,
    changed: &NodeSet,
    skeleton: &UndirectedGraph,
    cap: usize,
    ledger: &mut Ledger,
) -> Result<OrientRun> {
    let p = skeleton.p();
    let mut votes: BTreeMap<(usize, usize), Tally> = BTreeMap::new();
    for j in skeleton.incident_nodes() {
        let neighbors = skeleton.neighbors(j);
        let candidates: Vec<usize> = changed.iter().copied().filter(|&v| v != j).collect();
        for cond in subsets(&candidates, cap) {
            let mut record = TestRecord {
                phase: Phase::Orientation,
                kind: TestKind::Variance,
                i: None,
                j,
                cond: Vec::new(),
                dataset: None,
                statistic: None,
                p_value: None,
                reject: None,
                error: None,
            };
            let invariant = match oracle.variance(j, &cond) {
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
                    log::debug!("variance test {} | {:?} failed: {e}", j + 1, cond);
                    record.error = Some(e.to_string());
                    false
                }
            };
            record.cond = cond.clone();
            ledger.push(record);
            if invariant {
                for &i in &neighbors {
                    let (from, to) = if cond.binary_search(&i).is_ok() {
                        (i, j)
                    } else {
                        (j, i)
                    };
                    let tally = votes.entry(unordered(from, to)).or_default();
                    if from < to {
                        tally.forward += 1;
                    } else {
                        tally.backward += 1;
                    }
                }
                break;
            }
        }
    }

    let mut decided = Vec::new();
    let mut ties = Vec::new();
    for (&(a, b), tally) in &votes {
        if oracle.exact() && tally.forward > 0 && tally.backward > 0 {
            return Err(Error::Inconsistency {
                i: a,
                j: b,
                reason: "endpoints' invariant variance sets imply opposite directions".into(),
            });
        }
        let margin = tally.forward.abs_diff(tally.backward);
        match tally.forward.cmp(&tally.backward) {
            std::cmp::Ordering::Greater => decided.push((margin, (a, b))),
            std::cmp::Ordering::Less => decided.push((margin, (b, a))),
            std::cmp::Ordering::Equal => {
                log::info!("orientation of {}-{} tied; left undirected", a + 1, b + 1);
                ties.push((a, b));
            }
        }
    }
    // Stronger majorities first, then edge order.
    decided.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut children = vec![Vec::new(); p];
    let mut arrows = Vec::new();
    let mut skipped = Vec::new();
    for (_, (from, to)) in decided {
        if reaches(&children, to, from) {
            if oracle.exact() {
                return Err(Error::Inconsistency {
                    i: from,
                    j: to,
                    reason: "voted arrows form a directed cycle".into(),
                });
            }
            log::info!(
                "arrow {}->{} would close a cycle; skipped",
                from + 1,
                to + 1
            );
            skipped.push((from, to));
            continue;
        }
        children[from].push(to);
        arrows.push((from, to));
    }
    let directed: BTreeSet<(usize, usize)> = arrows.iter().map(|&(a, b)| unordered(a, b)).collect();
    let undirected = skeleton
        .edges()
        .difference(&directed)
        .copied()
        .collect::<Vec<_>>();
    let pdag = Pdag::new(p, arrows, undirected)?.propagate_chain_orientations()?;
    Ok(OrientRun {
        pdag,
        ties,
        skipped,
    })
}

/// Orients edges of `skeleton` using residual-variance invariances given
/// subsets of `changed`, then applies the chain rule.
pub fn orient_edges(
    data: &DatasetPair,
    changed: &NodeSet,
    skeleton: &UndirectedGraph,
    cfg: &DciConfig,
) -> Result<Pdag> {
    cfg.validate()?;
    let oracle = SampleOracle {
        data,
        alpha: cfg.alpha_orient,
    };
    let mut ledger = Ledger::new(false);
    Ok(orient_with(&oracle, changed, skeleton, cfg.cap(), &mut ledger)?.pdag)
}
