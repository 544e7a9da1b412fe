use std::collections::BTreeSet;

use dci_core::graph::{unordered, Dag, Pdag, UndirectedGraph};
use dci_core::rng;
use dci_core::sem::{random_sem_pair, GenConfig};
use proptest::prelude::*;

/// Arrows over `p` nodes drawn from `mask`, oriented along `perm`.
fn arrows_from(p: usize, perm: &[usize], mask: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut k = 0;
    for a in 0..p {
        for b in a + 1..p {
            if mask[k] {
                out.push((perm[a], perm[b]));
            }
            k += 1;
        }
    }
    out
}

fn reach_matrix(p: usize, arrows: &BTreeSet<(usize, usize)>) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; p]; p];
    for &(a, b) in arrows {
        r[a][b] = true;
    }
    for k in 0..p {
        for i in 0..p {
            for j in 0..p {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn pdag_strategy() -> impl Strategy<Value = Pdag> {
    (2usize..8)
        .prop_flat_map(|p| {
            let pairs = p * (p - 1) / 2;
            (
                Just(p),
                Just((0..p).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(0u8..3, pairs),
            )
        })
        .prop_map(|(p, perm, kinds)| {
            let directed: Vec<bool> = kinds.iter().map(|&k| k == 1).collect();
            let undirected: Vec<bool> = kinds.iter().map(|&k| k == 2).collect();
            let arrows = arrows_from(p, &perm, &directed);
            let edges = arrows_from(p, &perm, &undirected);
            Pdag::new(p, arrows, edges).unwrap()
        })
}

proptest! {
    #[test]
    fn topological_order_sorts_every_arrow(
        (p, perm, mask) in (1usize..9).prop_flat_map(|p| (
            Just(p),
            Just((0..p).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), p * p.saturating_sub(1) / 2),
        ))
    ) {
        let dag = Dag::new(p, arrows_from(p, &perm, &mask)).unwrap();
        let order = dag.topological_order();
        let mut position = vec![0; p];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k;
        }
        prop_assert_eq!(order.len(), p);
        for &(a, b) in dag.arrows() {
            prop_assert!(position[a] < position[b]);
        }
    }

    #[test]
    fn chain_propagation_is_idempotent_and_keeps_skeleton(g in pdag_strategy()) {
        let once = g.propagate_chain_orientations().unwrap();
        let twice = once.propagate_chain_orientations().unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.skeleton(), g.skeleton());
        prop_assert!(g.arrows().is_subset(once.arrows()));
        // Directed part stays acyclic.
        prop_assert!(Dag::new(g.p(), once.arrows().iter().copied()).is_ok());
        // No remaining undirected edge is implied by a directed path.
        let reach = reach_matrix(g.p(), once.arrows());
        for &(a, b) in once.undirected() {
            prop_assert!(!reach[a][b] && !reach[b][a]);
        }
        // Every new arrow is implied by a directed path among the final arrows.
        let without_new: BTreeSet<_> = g.arrows().clone();
        for &(a, b) in once.arrows().difference(&without_new) {
            let others: BTreeSet<_> = once.arrows().iter().copied().filter(|&e| e != (a, b)).collect();
            prop_assert!(reach_matrix(g.p(), &others)[a][b]);
        }
    }

    #[test]
    fn moral_graph_contains_skeleton(seed in any::<u64>()) {
        let pair = random_sem_pair(&GenConfig::bernoulli(8, 3.0, 0.1), &mut rng::stream(seed, &[0])).unwrap();
        let dag = pair.first.dag();
        let moral = dag.moral_graph();
        prop_assert!(dag.skeleton().is_subgraph_of(&moral));
        for j in 0..dag.p() {
            let parents: Vec<usize> = dag.parents(j).into_iter().collect();
            for (x, &a) in parents.iter().enumerate() {
                for &b in &parents[x + 1..] {
                    prop_assert!(moral.contains(a, b));
                }
            }
        }
    }

    #[test]
    fn edge_list_round_trip(g in pdag_strategy()) {
        let back = Pdag::parse_edge_list(&g.to_edge_list(), Some(g.p())).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn cycle_is_rejected() {
    assert!(Dag::new(3, [(0, 1), (1, 2), (2, 0)]).is_err());
    assert!(Pdag::new(3, [(0, 1), (1, 0)], []).is_err());
}

#[test]
fn chain_rule_orients_shortcut() {
    let g = Pdag::new(3, [(0, 1), (1, 2)], [(0, 2)]).unwrap();
    let out = g.propagate_chain_orientations().unwrap();
    assert!(out.arrows().contains(&(0, 2)));
    assert!(out.undirected().is_empty());
}

#[test]
fn undirected_neighbors_and_edges() {
    let g = UndirectedGraph::new(4, [(2, 0), (1, 2)]).unwrap();
    assert_eq!(
        g.edges().iter().copied().collect::<Vec<_>>(),
        vec![(0, 2), (1, 2)]
    );
    assert_eq!(g.neighbors(2), [0, 1].into());
    assert_eq!(unordered(3, 1), (1, 3));
    assert!(UndirectedGraph::new(2, [(1, 1)]).is_err());
    assert!(UndirectedGraph::new(2, [(0, 2)]).is_err());
}
