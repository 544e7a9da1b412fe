//! Population-level check of the faithfulness-type conditions under which
//! the estimator is consistent.

use serde::{Deserialize, Serialize};

use super::oracle::{Oracle, PopulationOracle};
use super::subsets;
use crate::error::Result;
use crate::graph::NodeSet;
use crate::sem::SemPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// A changed weight `B_ij` leaves `β_{i,j|S}` or `β_{j,i|S}` unchanged.
    AdjacencyFaithfulness,
    /// A changed weight `B_ij` leaves `σ_{j|S}` or `σ_{i|S∪{j}}` unchanged.
    OrientationFaithfulnessEdge,
    /// A changed noise variance of `j` leaves `σ_{j|S}` unchanged.
    OrientationFaithfulnessVariance,
    /// A changed weight `B_ij` is invisible in `Θ_ij`, or a co-parent of `j`
    /// is missing from the changed-node set.
    PrecisionFaithfulnessEdge,
    /// A changed noise variance of `j` is invisible in `Θ_jj`, or a parent of
    /// `j` is missing from the changed-node set.
    PrecisionFaithfulnessVariance,
}

/// One failed condition. Node indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub assumption: Assumption,
    pub i: Option<usize>,
    pub j: usize,
    pub cond: Vec<usize>,
}

fn changed_weights(pair: &SemPair) -> Vec<(usize, usize)> {
    let p = pair.p();
    let (b1, b2) = (pair.first.weights(), pair.second.weights());
    (0..p)
        .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
        .filter(|&(i, j)| b1[(i, j)] != b2[(i, j)])
        .collect()
}

fn changed_variances(pair: &SemPair) -> Vec<usize> {
    let (w1, w2) = (pair.first.noise_variances(), pair.second.noise_variances());
    (0..pair.p()).filter(|&j| w1[j] != w2[j]).collect()
}

/// Checks the coefficient and residual-variance conditions with conditioning
/// sets drawn from `nodes` (pairs and nodes outside `nodes` are not
/// quantified over).
pub fn check_assumptions_over(pair: &SemPair, nodes: &NodeSet, tol: f64) -> Result<Vec<Violation>> {
    let oracle = PopulationOracle::new(pair, tol);
    let mut out = Vec::new();
    for (i, j) in changed_weights(pair) {
        if !nodes.contains(&i) || !nodes.contains(&j) {
            continue;
        }
        let candidates: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|&v| v != i && v != j)
            .collect();
        for cond in subsets(&candidates, usize::MAX) {
            if oracle.coefficient(i, j, &cond)?.invariant
                || oracle.coefficient(j, i, &cond)?.invariant
            {
                out.push(Violation {
                    assumption: Assumption::AdjacencyFaithfulness,
                    i: Some(i),
                    j,
                    cond: cond.clone(),
                });
            }
            let mut with_j = cond.clone();
            with_j.push(j);
            with_j.sort_unstable();
            if oracle.variance(j, &cond)?.invariant || oracle.variance(i, &with_j)?.invariant {
                out.push(Violation {
                    assumption: Assumption::OrientationFaithfulnessEdge,
                    i: Some(i),
                    j,
                    cond,
                });
            }
        }
    }
    for j in changed_variances(pair) {
        if !nodes.contains(&j) {
            continue;
        }
        let candidates: Vec<usize> = nodes.iter().copied().filter(|&v| v != j).collect();
        for cond in subsets(&candidates, usize::MAX) {
            if oracle.variance(j, &cond)?.invariant {
                out.push(Violation {
                    assumption: Assumption::OrientationFaithfulnessVariance,
                    i: None,
                    j,
                    cond,
                });
            }
        }
    }
    Ok(out)
}

/// Checks all conditions with the pair's true changed-node set, including
/// the requirement that changes show up in the precision matrices.
/// An empty result means every condition holds at tolerance `tol`.
pub fn check_assumptions(pair: &SemPair, tol: f64) -> Result<Vec<Violation>> {
    let (dug, changed) = pair.true_dug_with_tol(tol);
    let mut out = check_assumptions_over(pair, &changed, tol)?;
    let t1 = pair.first.precision_matrix();
    let t2 = pair.second.precision_matrix();
    let sems = [&pair.first, &pair.second];
    for (i, j) in changed_weights(pair) {
        let coparent_missing = sems.iter().any(|m| {
            m.weights()[(i, j)] != 0.0
                && m.parents(j)
                    .iter()
                    .any(|&l| l != i && !changed.contains(&l))
        });
        if !dug.contains(i, j) || coparent_missing {
            out.push(Violation {
                assumption: Assumption::PrecisionFaithfulnessEdge,
                i: Some(i),
                j,
                cond: Vec::new(),
            });
        }
    }
    for j in changed_variances(pair) {
        let parent_missing = sems
            .iter()
            .any(|m| m.parents(j).iter().any(|l| !changed.contains(l)));
        if (t1[(j, j)] - t2[(j, j)]).abs() <= tol || parent_missing {
            out.push(Violation {
                assumption: Assumption::PrecisionFaithfulnessVariance,
                i: None,
                j,
                cond: Vec::new(),
            });
        }
    }
    Ok(out)
}
