//! D-UG initialization.

use super::oracle::DatasetPair;
use super::{Ledger, Phase, TestKind, TestRecord};
use crate::error::{Error, Result};
use crate::graph::{NodeSet, UndirectedGraph};
use crate::stats::{
    partial_correlation_test_from, precision_entry_test_from, precision_of, variance_test,
    InvarianceTest,
};

/// Complete graph on `p` nodes with every node changed.
pub fn init_dug_complete(p: usize) -> (UndirectedGraph, NodeSet) {
    (UndirectedGraph::complete(p), (0..p).collect())
}

fn record(
    kind: TestKind,
    i: Option<usize>,
    j: usize,
    cond: Vec<usize>,
    dataset: Option<u8>,
    t: &InvarianceTest,
) -> TestRecord {
    TestRecord {
        phase: Phase::Dug,
        kind,
        i,
        j,
        cond,
        dataset,
        statistic: Some(t.statistic),
        p_value: Some(t.p_value),
        reject: Some(t.reject),
        error: None,
    }
}

pub(crate) fn dug_with(
    data: &DatasetPair,
    alpha: f64,
    ledger: &mut Ledger,
) -> Result<(UndirectedGraph, NodeSet)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!(
            "significance level {alpha} outside (0, 1)"
        )));
    }
    let p = data.p();
    let (n1, n2) = (data.first.n(), data.second.n());
    let theta1 = precision_of(&data.first)?;
    let theta2 = precision_of(&data.second)?;
    let mut edges = Vec::new();
    let mut changed = NodeSet::new();
    for i in 0..p {
        for j in i + 1..p {
            let pc1 = partial_correlation_test_from(&theta1, n1, i, j, alpha)?;
            ledger.push(record(
                TestKind::PartialCorrelation,
                Some(i),
                j,
                Vec::new(),
                Some(1),
                &pc1,
            ));
            let pc2 = partial_correlation_test_from(&theta2, n2, i, j, alpha)?;
            ledger.push(record(
                TestKind::PartialCorrelation,
                Some(i),
                j,
                Vec::new(),
                Some(2),
                &pc2,
            ));
            let differs = match (pc1.reject, pc2.reject) {
                (true, true) => {
                    let q = precision_entry_test_from(&theta1, n1, &theta2, n2, i, j, alpha);
                    ledger.push(record(
                        TestKind::PrecisionEntry,
                        Some(i),
                        j,
                        Vec::new(),
                        None,
                        &q,
                    ));
                    q.reject
                }
                (false, false) => false,
                _ => true,
            };
            if differs {
                edges.push((i, j));
                changed.insert(i);
                changed.insert(j);
            }
        }
    }
    for i in 0..p {
        let rest: Vec<usize> = (0..p).filter(|&v| v != i).collect();
        let t = variance_test(&data.first, &data.second, i, &rest, alpha)?;
        ledger.push(record(TestKind::Variance, None, i, rest, None, &t));
        if t.reject {
            changed.insert(i);
        }
    }
    Ok((UndirectedGraph::new(p, edges)?, changed))
}

/// Estimates the D-UG and changed-node set from per-entry tests on the two
/// inverse sample covariances. Needs more than `p + 1` samples per dataset.
pub fn estimate_dug_constraint_based(
    data: &DatasetPair,
    alpha: f64,
) -> Result<(UndirectedGraph, NodeSet)> {
    dug_with(data, alpha, &mut Ledger::new(false))
}
