//! Directed, undirected and partially directed graphs over a fixed node set.
//!
//! Nodes are `0..p` internally and printed 1-based. All graph values are
//! immutable once built; operations return new values.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

/// Ordered set of node indices.
pub type NodeSet = BTreeSet<usize>;

/// Normalizes an unordered pair so the smaller index comes first.
#[inline]
pub fn unordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_pair(p: usize, a: usize, b: usize) -> Result<()> {
    if a == b {
        return Err(Error::InvalidInput(format!("self-loop at node {}", a + 1)));
    }
    if a >= p || b >= p {
        return Err(Error::InvalidInput(format!(
            "edge {}-{} out of range for {} nodes",
            a + 1,
            b + 1,
            p
        )));
    }
    Ok(())
}

/// Directed acyclic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    p: usize,
    arrows: BTreeSet<(usize, usize)>,
}

impl Dag {
    /// Builds a DAG, rejecting self-loops, out-of-range nodes and cycles.
    pub fn new(p: usize, arrows: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let arrows: BTreeSet<_> = arrows.into_iter().collect();
        for &(a, b) in &arrows {
            check_pair(p, a, b)?;
        }
        topological_order(p, &arrows)?;
        Ok(Dag { p, arrows })
    }

    pub fn empty(p: usize) -> Self {
        Dag {
            p,
            arrows: BTreeSet::new(),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn arrows(&self) -> &BTreeSet<(usize, usize)> {
        &self.arrows
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.arrows.contains(&(from, to))
    }

    pub fn parents(&self, node: usize) -> NodeSet {
        self.arrows
            .iter()
            .filter(|&&(_, b)| b == node)
            .map(|&(a, _)| a)
            .collect()
    }

    /// Undirected version of the arrow set.
    pub fn skeleton(&self) -> UndirectedGraph {
        UndirectedGraph {
            p: self.p,
            edges: self.arrows.iter().map(|&(a, b)| unordered(a, b)).collect(),
        }
    }

    /// Order in which every arrow points forward; ties broken by index.
    pub fn topological_order(&self) -> Vec<usize> {
        topological_order(self.p, &self.arrows).expect("Dag invariant: acyclic")
    }

    /// Skeleton plus an edge between every pair of nodes with a common child.
    pub fn moral_graph(&self) -> UndirectedGraph {
        let mut edges: BTreeSet<(usize, usize)> =
            self.arrows.iter().map(|&(a, b)| unordered(a, b)).collect();
        for child in 0..self.p {
            let parents: Vec<usize> = self.parents(child).into_iter().collect();
            for (k, &a) in parents.iter().enumerate() {
                for &b in &parents[k + 1..] {
                    edges.insert(unordered(a, b));
                }
            }
        }
        UndirectedGraph { p: self.p, edges }
    }
}

/// Kahn's algorithm with a min-heap so that unconstrained nodes come out in
/// index order. On failure the error names one directed cycle.
pub fn topological_order(p: usize, arrows: &BTreeSet<(usize, usize)>) -> Result<Vec<usize>> {
    let mut indegree = vec![0usize; p];
    let mut children = vec![Vec::new(); p];
    for &(a, b) in arrows {
        indegree[b] += 1;
        children[a].push(b);
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..p).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(p);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(Reverse(c));
            }
        }
    }
    if order.len() == p {
        return Ok(order);
    }
    // Every remaining node has an unprocessed parent, so walking parents
    // backwards from any of them must revisit a node.
    let remaining: Vec<bool> = (0..p).map(|v| indegree[v] > 0).collect();
    let mut parent_of = vec![usize::MAX; p];
    for &(a, b) in arrows {
        if remaining[a] && remaining[b] && parent_of[b] == usize::MAX {
            parent_of[b] = a;
        }
    }
    let start = remaining.iter().position(|&r| r).unwrap();
    let mut seen = vec![usize::MAX; p];
    let mut walk = Vec::new();
    let mut v = start;
    while seen[v] == usize::MAX {
        seen[v] = walk.len();
        walk.push(v);
        v = parent_of[v];
    }
    let mut cycle: Vec<usize> = walk[seen[v]..].to_vec();
    cycle.reverse();
    Err(Error::Cycle { cycle })
}

/// Undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    p: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(p: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            check_pair(p, a, b)?;
            set.insert(unordered(a, b));
        }
        Ok(UndirectedGraph { p, edges: set })
    }

    pub fn empty(p: usize) -> Self {
        UndirectedGraph {
            p,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(p: usize) -> Self {
        let edges = (0..p)
            .flat_map(|a| (a + 1..p).map(move |b| (a, b)))
            .collect();
        UndirectedGraph { p, edges }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Edges as `(smaller, larger)` pairs in lexicographic order.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&unordered(a, b))
    }

    pub fn neighbors(&self, node: usize) -> NodeSet {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == node {
                    Some(b)
                } else if b == node {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Nodes incident to at least one edge.
    pub fn incident_nodes(&self) -> NodeSet {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.edges.is_subset(&other.edges)
    }
}

/// Partially directed graph: disjoint arrows and undirected edges with an
/// acyclic directed part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdag {
    p: usize,
    arrows: BTreeSet<(usize, usize)>,
    edges: BTreeSet<(usize, usize)>,
}

impl Pdag {
    pub fn new(
        p: usize,
        arrows: impl IntoIterator<Item = (usize, usize)>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let arrows: BTreeSet<_> = arrows.into_iter().collect();
        let mut adjacent = BTreeSet::new();
        for &(a, b) in &arrows {
            check_pair(p, a, b)?;
            if !adjacent.insert(unordered(a, b)) {
                return Err(Error::InvalidInput(format!(
                    "nodes {} and {} joined by arrows in both directions",
                    a + 1,
                    b + 1
                )));
            }
        }
        let mut undirected = BTreeSet::new();
        for (a, b) in edges {
            check_pair(p, a, b)?;
            let e = unordered(a, b);
            if adjacent.contains(&e) {
                return Err(Error::InvalidInput(format!(
                    "nodes {} and {} joined by both an arrow and an undirected edge",
                    e.0 + 1,
                    e.1 + 1
                )));
            }
            undirected.insert(e);
        }
        topological_order(p, &arrows)?;
        Ok(Pdag {
            p,
            arrows,
            edges: undirected,
        })
    }

    pub fn empty(p: usize) -> Self {
        Pdag {
            p,
            arrows: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    /// All adjacencies left undirected.
    pub fn from_skeleton(skeleton: &UndirectedGraph) -> Self {
        Pdag {
            p: skeleton.p,
            arrows: BTreeSet::new(),
            edges: skeleton.edges.clone(),
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn arrows(&self) -> &BTreeSet<(usize, usize)> {
        &self.arrows
    }

    pub fn undirected(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        let mut edges = self.edges.clone();
        edges.extend(self.arrows.iter().map(|&(a, b)| unordered(a, b)));
        UndirectedGraph { p: self.p, edges }
    }

    pub fn adjacency_count(&self) -> usize {
        self.arrows.len() + self.edges.len()
    }

    /// Nodes reachable from each node along arrows (excluding itself unless
    /// on a cycle, which the invariant rules out).
    fn reachability(&self) -> Vec<Vec<bool>> {
        let mut children = vec![Vec::new(); self.p];
        for &(a, b) in &self.arrows {
            children[a].push(b);
        }
        (0..self.p)
            .map(|start| {
                let mut seen = vec![false; self.p];
                let mut stack = children[start].clone();
                while let Some(v) = stack.pop() {
                    if !seen[v] {
                        seen[v] = true;
                        stack.extend_from_slice(&children[v]);
                    }
                }
                seen
            })
            .collect()
    }

    /// Orients `i - j` as `i -> j` whenever a directed path from `i` to `j`
    /// exists, repeating until nothing changes.
    ///
    /// Fails if both directions are reachable for some undirected edge.
    pub fn propagate_chain_orientations(&self) -> Result<Pdag> {
        let mut current = self.clone();
        loop {
            let reach = current.reachability();
            let mut oriented = Vec::new();
            for &(a, b) in &current.edges {
                match (reach[a][b], reach[b][a]) {
                    (true, true) => {
                        return Err(Error::Inconsistency {
                            i: a,
                            j: b,
                            reason: "directed paths exist in both directions".into(),
                        })
                    }
                    (true, false) => oriented.push((a, b)),
                    (false, true) => oriented.push((b, a)),
                    (false, false) => {}
                }
            }
            if oriented.is_empty() {
                return Ok(current);
            }
            for (a, b) in oriented {
                current.edges.remove(&unordered(a, b));
                current.arrows.insert((a, b));
            }
        }
    }

    /// Edge-list text: `i -> j` per arrow, `i -- j` per undirected edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# nodes: {}", self.p);
        for &(a, b) in &self.arrows {
            let _ = writeln!(out, "{} -> {}", a + 1, b + 1);
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} -- {}", a + 1, b + 1);
        }
        out
    }

    /// Parses the edge-list text format. When `p` is `None` the node count is
    /// the largest label seen.
    pub fn parse_edge_list(text: &str, p: Option<usize>) -> Result<Pdag> {
        let mut arrows = Vec::new();
        let mut edges = Vec::new();
        let mut max_label = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let (lhs, rhs, directed) = if let Some((l, r)) = line.split_once("->") {
                (l, r, true)
            } else if let Some((l, r)) = line.split_once("--") {
                (l, r, false)
            } else {
                return Err(parse_err(format!(
                    "expected `i -> j` or `i -- j`, got `{line}`"
                )));
            };
            let label = |s: &str| -> Result<usize> {
                let v: usize = s
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("bad node label `{}`", s.trim())))?;
                if v == 0 {
                    return Err(parse_err("node labels are 1-based".into()));
                }
                Ok(v)
            };
            let (a, b) = (label(lhs)?, label(rhs)?);
            max_label = max_label.max(a).max(b);
            if directed {
                arrows.push((a - 1, b - 1));
            } else {
                edges.push((a - 1, b - 1));
            }
        }
        let p = p.unwrap_or(max_label);
        Pdag::new(p, arrows, edges)
    }
}

impl UndirectedGraph {
    pub fn to_edge_list(&self) -> String {
        Pdag::from_skeleton(self).to_edge_list()
    }
}

impl Dag {
    pub fn to_edge_list(&self) -> String {
        Pdag {
            p: self.p,
            arrows: self.arrows.clone(),
            edges: BTreeSet::new(),
        }
        .to_edge_list()
    }
}

impl fmt::Display for Pdag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .arrows
            .iter()
            .map(|&(a, b)| format!("{}->{}", a + 1, b + 1))
            .collect();
        parts.extend(
            self.edges
                .iter()
                .map(|&(a, b)| format!("{}-{}", a + 1, b + 1)),
        );
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn topological_order_of_chain() {
        let g = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.topological_order(), vec![0, 1, 2]);
    }

    #[test]
    fn topological_order_of_empty_graph_is_identity() {
        assert_eq!(Dag::empty(3).topological_order(), vec![0, 1, 2]);
    }

    #[test]
    fn two_cycle_is_reported() {
        match Dag::new(2, [(0, 1), (1, 0)]) {
            Err(Error::Cycle { cycle }) => {
                let mut c = cycle.clone();
                c.sort();
                assert_eq!(c, vec![0, 1]);
            }
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn longer_cycle_names_its_nodes() {
        let err =
            topological_order(5, &set(&[(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)])).unwrap_err();
        let Error::Cycle { cycle } = err else {
            panic!()
        };
        let mut c = cycle.clone();
        c.sort();
        assert_eq!(c, vec![1, 2, 3]);
        for w in 0..cycle.len() {
            let (a, b) = (cycle[w], cycle[(w + 1) % cycle.len()]);
            assert!(set(&[(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)]).contains(&(a, b)));
        }
    }

    #[test]
    fn self_loop_rejected() {
        assert!(Dag::new(2, [(1, 1)]).is_err());
    }

    #[test]
    fn moral_graph_of_v_structure() {
        let g = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(g.moral_graph().edges(), &set(&[(0, 1), (0, 2), (1, 2)]));
    }

    #[test]
    fn moral_graph_of_chain() {
        let g = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.moral_graph().edges(), &set(&[(0, 1), (1, 2)]));
        assert!(Dag::empty(4).moral_graph().is_empty());
    }

    #[test]
    fn chain_rule_orients_shortcut() {
        let g = Pdag::new(3, [(0, 1), (1, 2)], [(0, 2)]).unwrap();
        let out = g.propagate_chain_orientations().unwrap();
        assert_eq!(out.arrows(), &set(&[(0, 1), (1, 2), (0, 2)]));
        assert!(out.undirected().is_empty());
    }

    #[test]
    fn chain_rule_leaves_disconnected_edges() {
        let g = Pdag::new(4, [(0, 1)], [(2, 3)]).unwrap();
        assert_eq!(g.propagate_chain_orientations().unwrap(), g);
    }

    #[test]
    fn chain_rule_two_edges() {
        let g = Pdag::new(4, [(0, 1), (1, 2), (2, 3)], [(0, 3), (1, 3)]).unwrap();
        let out = g.propagate_chain_orientations().unwrap();
        assert_eq!(
            out.arrows(),
            &set(&[(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)])
        );
        assert!(out.undirected().is_empty());
    }

    #[test]
    fn pdag_rejects_overlap_and_cycles() {
        assert!(Pdag::new(3, [(0, 1)], [(1, 0)]).is_err());
        assert!(Pdag::new(3, [(0, 1), (1, 0)], []).is_err());
        assert!(matches!(
            Pdag::new(3, [(0, 1), (1, 2), (2, 0)], []),
            Err(Error::Cycle { .. })
        ));
    }

    #[test]
    fn edge_list_parses_comments_and_both_kinds() {
        let text = "# header\n1 -> 2\n\n 2 -- 3 \n# trailing\n";
        let g = Pdag::parse_edge_list(text, None).unwrap();
        assert_eq!(g.p(), 3);
        assert_eq!(g.arrows(), &set(&[(0, 1)]));
        assert_eq!(g.undirected(), &set(&[(1, 2)]));
        let again = Pdag::parse_edge_list(&g.to_edge_list(), Some(3)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn edge_list_rejects_garbage() {
        assert!(matches!(
            Pdag::parse_edge_list("1 => 2", None),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(Pdag::parse_edge_list("0 -> 2", None).is_err());
        assert!(Pdag::parse_edge_list("1 -> x", None).is_err());
    }
}
