//! Linear Gaussian structural equation models `X = BᵀX + ε`, their exact
//! population quantities, sampling and random pair generation.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeSet, UndirectedGraph};
use crate::rng::Rng;

/// Absolute tolerance used when comparing population quantities.
pub const POPULATION_TOL: f64 = 1e-9;

/// SEM with strictly upper-triangular weights `b` and noise variances `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSem {
    b: DMatrix<f64>,
    omega: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl LinearSem {
    pub fn new(b: DMatrix<f64>, omega: Vec<f64>) -> Result<Self> {
        let p = omega.len();
        if b.nrows() != p || b.ncols() != p {
            return Err(Error::InvalidInput(format!(
                "weight matrix is {}x{} but {} noise variances were given",
                b.nrows(),
                b.ncols(),
                p
            )));
        }
        for i in 0..p {
            for j in 0..=i {
                if b[(i, j)] != 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "weight B[{},{}] is not strictly upper triangular",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if b.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("non-finite edge weight".into()));
        }
        if let Some(k) = omega.iter().position(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "noise variance of node {} must be positive and finite",
                k + 1
            )));
        }
        Ok(LinearSem {
            b,
            omega,
            labels: None,
        })
    }

    /// Builds a SEM from `(from, to, weight)` triples with 0-based nodes.
    pub fn from_edges(p: usize, edges: &[(usize, usize, f64)], omega: Vec<f64>) -> Result<Self> {
        let mut b = DMatrix::zeros(p, p);
        for &(i, j, w) in edges {
            if i >= p || j >= p {
                return Err(Error::InvalidInput(format!(
                    "edge {}->{} out of range",
                    i + 1,
                    j + 1
                )));
            }
            b[(i, j)] = w;
        }
        LinearSem::new(b, omega)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.p() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.p()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn p(&self) -> usize {
        self.omega.len()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn noise_variances(&self) -> &[f64] {
        &self.omega
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn parents(&self, j: usize) -> NodeSet {
        (0..j).filter(|&i| self.b[(i, j)] != 0.0).collect()
    }

    pub fn dag(&self) -> Dag {
        let p = self.p();
        let arrows = (0..p)
            .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
            .filter(|&(i, j)| self.b[(i, j)] != 0.0);
        Dag::new(p, arrows).expect("upper-triangular support is acyclic")
    }

    pub fn edge_count(&self) -> usize {
        self.b.iter().filter(|w| **w != 0.0).count()
    }

    /// `Θ = (I − B) Ω⁻¹ (I − B)ᵀ`.
    pub fn precision_matrix(&self) -> DMatrix<f64> {
        let p = self.p();
        let a = DMatrix::identity(p, p) - &self.b;
        let inv_omega = DMatrix::from_diagonal(&DVector::from_iterator(
            p,
            self.omega.iter().map(|w| 1.0 / w),
        ));
        let theta = &a * inv_omega * a.transpose();
        symmetrize(theta)
    }

    /// `Σ = (I − B)⁻ᵀ Ω (I − B)⁻¹`, the inverse of [`Self::precision_matrix`].
    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        let p = self.p();
        let a = DMatrix::identity(p, p) - &self.b;
        // I − B is unit upper triangular, so the solve is exact back-substitution.
        let a_inv = a
            .solve_upper_triangular(&DMatrix::identity(p, p))
            .expect("unit triangular matrix is invertible");
        let omega = DMatrix::from_diagonal(&DVector::from_column_slice(&self.omega));
        symmetrize(a_inv.transpose() * omega * a_inv)
    }

    /// Draws `n` i.i.d. observations as rows of an `n × p` matrix by forward
    /// substitution of `x_j = Σ_i B_ij x_i + ε_j` in index order.
    pub fn sample(&self, n: usize, rng: &mut Rng) -> DMatrix<f64> {
        let p = self.p();
        let sd: Vec<f64> = self.omega.iter().map(|w| w.sqrt()).collect();
        let parents: Vec<Vec<(usize, f64)>> = (0..p)
            .map(|j| {
                (0..j)
                    .filter(|&i| self.b[(i, j)] != 0.0)
                    .map(|i| (i, self.b[(i, j)]))
                    .collect()
            })
            .collect();
        let mut data = DMatrix::zeros(n, p);
        let mut row = vec![0.0; p];
        for r in 0..n {
            for j in 0..p {
                let z: f64 = rng.sample(StandardNormal);
                let mut x = sd[j] * z;
                for &(i, w) in &parents[j] {
                    x += w * row[i];
                }
                row[j] = x;
            }
            for j in 0..p {
                data[(r, j)] = row[j];
            }
        }
        data
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Two SEMs over the same nodes sharing the index order as topological order.
#[derive(Debug, Clone, PartialEq)]
pub struct SemPair {
    pub first: LinearSem,
    pub second: LinearSem,
}

impl SemPair {
    pub fn new(first: LinearSem, second: LinearSem) -> Result<Self> {
        if first.p() != second.p() {
            return Err(Error::InvalidInput(format!(
                "SEMs have {} and {} nodes",
                first.p(),
                second.p()
            )));
        }
        Ok(SemPair { first, second })
    }

    pub fn p(&self) -> usize {
        self.first.p()
    }

    /// Arrows `i -> j` wherever the stored weights differ.
    pub fn true_ddag(&self) -> Dag {
        let p = self.p();
        let (b1, b2) = (self.first.weights(), self.second.weights());
        let arrows = (0..p)
            .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
            .filter(|&(i, j)| b1[(i, j)] != b2[(i, j)]);
        Dag::new(p, arrows).expect("upper-triangular support is acyclic")
    }

    /// Difference of the population precision matrices: edges where
    /// off-diagonal entries differ and the set of changed nodes.
    pub fn true_dug(&self) -> (UndirectedGraph, NodeSet) {
        self.true_dug_with_tol(POPULATION_TOL)
    }

    pub fn true_dug_with_tol(&self, tol: f64) -> (UndirectedGraph, NodeSet) {
        let p = self.p();
        let t1 = self.first.precision_matrix();
        let t2 = self.second.precision_matrix();
        let mut edges = Vec::new();
        let mut changed = NodeSet::new();
        for i in 0..p {
            if (t1[(i, i)] - t2[(i, i)]).abs() > tol {
                changed.insert(i);
            }
            for j in i + 1..p {
                if (t1[(i, j)] - t2[(i, j)]).abs() > tol {
                    edges.push((i, j));
                    changed.insert(i);
                    changed.insert(j);
                }
            }
        }
        (
            UndirectedGraph::new(p, edges).expect("pairs are valid"),
            changed,
        )
    }
}

/// How the second SEM's edges are derived from the first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ChangeMode {
    /// Each existing edge is deleted, and each absent edge inserted, with the
    /// flip probability.
    Bernoulli { flip_prob: f64 },
    /// A fixed number of changes, `round(fraction · |edges|)`, split into
    /// `⌊k/2⌋` deletions and `⌈k/2⌉` insertions.
    Budget { fraction: f64 },
}

/// Parameters of the random SEM-pair generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub p: usize,
    /// Expected neighbourhood size; the edge probability is `s / (p − 1)`.
    pub s: f64,
    pub change: ChangeMode,
    pub weight_range: (f64, f64),
    /// Number of nodes whose noise variance is redrawn in the second SEM.
    pub changed_variances: usize,
    pub variance_range: (f64, f64),
}

impl GenConfig {
    pub fn bernoulli(p: usize, s: f64, flip_prob: f64) -> Self {
        GenConfig {
            p,
            s,
            change: ChangeMode::Bernoulli { flip_prob },
            weight_range: (0.25, 1.0),
            changed_variances: 0,
            variance_range: (1.25, 2.0),
        }
    }

    pub fn budget(p: usize, s: f64, fraction: f64) -> Self {
        GenConfig {
            change: ChangeMode::Budget { fraction },
            ..GenConfig::bernoulli(p, s, 0.1)
        }
    }

    pub fn with_changed_variances(mut self, v: usize) -> Self {
        self.changed_variances = v;
        self
    }

    pub fn edge_probability(&self) -> f64 {
        if self.p < 2 {
            0.0
        } else {
            (self.s / (self.p - 1) as f64).min(1.0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.p == 0 {
            return bad("node count must be positive".into());
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return bad(format!("neighbourhood size {} must be nonnegative", self.s));
        }
        match self.change {
            ChangeMode::Bernoulli { flip_prob } if !(0.0..1.0).contains(&flip_prob) => {
                return bad(format!("flip probability {flip_prob} outside [0, 1)"));
            }
            ChangeMode::Budget { fraction } if !(0.0..=1.0).contains(&fraction) => {
                return bad(format!("change fraction {fraction} outside [0, 1]"));
            }
            _ => {}
        }
        let (lo, hi) = self.weight_range;
        if !(0.0 < lo && lo < hi && hi.is_finite()) {
            return bad(format!(
                "weight interval [{lo}, {hi}] must satisfy 0 < lo < hi"
            ));
        }
        let (lo, hi) = self.variance_range;
        if !(0.0 < lo && lo <= hi && hi.is_finite()) {
            return bad(format!(
                "variance interval [{lo}, {hi}] must satisfy 0 < lo <= hi"
            ));
        }
        if self.changed_variances > self.p {
            return bad(format!(
                "{} changed variances requested for {} nodes",
                self.changed_variances, self.p
            ));
        }
        Ok(())
    }
}

fn draw_weight(range: (f64, f64), rng: &mut Rng) -> f64 {
    let magnitude = rng.random_range(range.0..=range.1);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// Draws a random SEM pair.
///
/// The first SEM has an Erdős–Rényi skeleton compatible with the index order,
/// unit noise variances and weights uniform on `±[lo, hi]`. The second SEM
/// applies edge changes per [`ChangeMode`] (inserted edges get fresh weights),
/// then redraws the noise variance of `changed_variances` uniformly chosen
/// nodes. Variance draws come last, so configs differing only in the number of
/// changed variances share their edge structure under a common stream.
pub fn random_sem_pair(cfg: &GenConfig, rng: &mut Rng) -> Result<SemPair> {
    cfg.validate()?;
    let p = cfg.p;
    let prob = cfg.edge_probability();
    let mut b1 = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in i + 1..p {
            if rng.random_bool(prob) {
                b1[(i, j)] = draw_weight(cfg.weight_range, rng);
            }
        }
    }
    let mut b2 = b1.clone();
    match cfg.change {
        ChangeMode::Bernoulli { flip_prob } => {
            for i in 0..p {
                for j in i + 1..p {
                    if b1[(i, j)] != 0.0 {
                        if rng.random_bool(flip_prob) {
                            b2[(i, j)] = 0.0;
                        }
                    } else if rng.random_bool(flip_prob) {
                        b2[(i, j)] = draw_weight(cfg.weight_range, rng);
                    }
                }
            }
        }
        ChangeMode::Budget { fraction } => {
            let (present, absent): (Vec<_>, Vec<_>) = (0..p)
                .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
                .partition(|&(i, j)| b1[(i, j)] != 0.0);
            let total = (fraction * present.len() as f64).round() as usize;
            let deletions = total / 2;
            let insertions = total - deletions;
            if deletions > present.len() || insertions > absent.len() {
                return Err(Error::Generation(format!(
                    "cannot delete {deletions} of {} edges and insert {insertions} of {} non-edges",
                    present.len(),
                    absent.len()
                )));
            }
            for k in index::sample(rng, present.len(), deletions) {
                let (i, j) = present[k];
                b2[(i, j)] = 0.0;
            }
            for k in index::sample(rng, absent.len(), insertions) {
                let (i, j) = absent[k];
                b2[(i, j)] = draw_weight(cfg.weight_range, rng);
            }
        }
    }
    let omega1 = vec![1.0; p];
    let mut omega2 = omega1.clone();
    for k in index::sample(rng, p, cfg.changed_variances) {
        omega2[k] = rng.random_range(cfg.variance_range.0..=cfg.variance_range.1);
    }
    SemPair::new(LinearSem::new(b1, omega1)?, LinearSem::new(b2, omega2)?)
}

/// JSON form of a SEM: nonzero weights as 1-based `[i, j, weight]` triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemDocument {
    pub p: usize,
    pub weights: Vec<(usize, usize, f64)>,
    pub omega: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&LinearSem> for SemDocument {
    fn from(sem: &LinearSem) -> Self {
        let p = sem.p();
        let mut weights = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                let w = sem.b[(i, j)];
                if w != 0.0 {
                    weights.push((i + 1, j + 1, w));
                }
            }
        }
        SemDocument {
            p,
            weights,
            omega: sem.omega.clone(),
            labels: sem.labels.clone(),
        }
    }
}

impl TryFrom<SemDocument> for LinearSem {
    type Error = Error;

    fn try_from(doc: SemDocument) -> Result<Self> {
        if doc.omega.len() != doc.p {
            return Err(Error::InvalidInput(format!(
                "omega has {} entries for {} nodes",
                doc.omega.len(),
                doc.p
            )));
        }
        let mut edges = Vec::with_capacity(doc.weights.len());
        for &(i, j, w) in &doc.weights {
            if i == 0 || j == 0 {
                return Err(Error::InvalidInput("weight indices are 1-based".into()));
            }
            edges.push((i - 1, j - 1, w));
        }
        let sem = LinearSem::from_edges(doc.p, &edges, doc.omega)?;
        match doc.labels {
            Some(labels) => sem.with_labels(labels),
            None => Ok(sem),
        }
    }
}

impl LinearSem {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SemDocument::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SemDocument = serde_json::from_str(text)?;
        LinearSem::try_from(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use approx::assert_abs_diff_eq;

    fn chain(b12: f64, b23: f64) -> LinearSem {
        LinearSem::from_edges(3, &[(0, 1, b12), (1, 2, b23)], vec![1.0; 3]).unwrap()
    }

    #[test]
    fn rejects_lower_triangular_weights() {
        let mut b = DMatrix::zeros(2, 2);
        b[(1, 0)] = 0.3;
        assert!(LinearSem::new(b, vec![1.0, 1.0]).is_err());
        assert!(LinearSem::new(DMatrix::zeros(2, 2), vec![1.0, 0.0]).is_err());
        assert!(LinearSem::new(DMatrix::zeros(2, 2), vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn precision_of_empty_sem_is_identity() {
        let sem = LinearSem::new(DMatrix::zeros(4, 4), vec![1.0; 4]).unwrap();
        assert_eq!(sem.precision_matrix(), DMatrix::identity(4, 4));
    }

    #[test]
    fn precision_of_single_edge() {
        let b = 0.7;
        let sem = LinearSem::from_edges(2, &[(0, 1, b)], vec![1.0, 1.0]).unwrap();
        let theta = sem.precision_matrix();
        assert_abs_diff_eq!(theta[(0, 0)], 1.0 + b * b, epsilon = 1e-15);
        assert_abs_diff_eq!(theta[(0, 1)], -b, epsilon = 1e-15);
        assert_abs_diff_eq!(theta[(1, 0)], -b, epsilon = 1e-15);
        assert_abs_diff_eq!(theta[(1, 1)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn precision_of_chain() {
        let theta = chain(0.5, 0.5).precision_matrix();
        assert_abs_diff_eq!(theta[(0, 2)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(theta[(0, 1)], -0.5, epsilon = 1e-15);
    }

    /// Entrywise formula, written out independently of the matrix product.
    fn precision_entry(sem: &LinearSem, i: usize, j: usize) -> f64 {
        let b = sem.weights();
        let w = sem.noise_variances();
        let p = sem.p();
        if i == j {
            1.0 / w[i] + (i + 1..p).map(|k| b[(i, k)].powi(2) / w[k]).sum::<f64>()
        } else {
            let (i, j) = (i.min(j), i.max(j));
            -b[(i, j)] / w[j]
                + (j + 1..p)
                    .map(|k| b[(i, k)] * b[(j, k)] / w[k])
                    .sum::<f64>()
        }
    }

    #[test]
    fn precision_matches_entrywise_formula() {
        let cfg = GenConfig::bernoulli(7, 3.0, 0.2).with_changed_variances(3);
        for seed in 0..20 {
            let pair = random_sem_pair(&cfg, &mut rng::stream(seed, &[])).unwrap();
            for sem in [&pair.first, &pair.second] {
                let theta = sem.precision_matrix();
                for i in 0..7 {
                    for j in 0..7 {
                        assert_abs_diff_eq!(
                            theta[(i, j)],
                            precision_entry(sem, i, j),
                            epsilon = 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn covariance_examples() {
        let sem = LinearSem::new(DMatrix::zeros(3, 3), vec![0.5, 2.0, 3.0]).unwrap();
        assert_eq!(
            sem.covariance_matrix(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 2.0, 3.0]))
        );
        let b = -0.6;
        let sigma = LinearSem::from_edges(2, &[(0, 1, b)], vec![1.0, 1.0])
            .unwrap()
            .covariance_matrix();
        assert_abs_diff_eq!(sigma[(0, 0)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sigma[(0, 1)], b, epsilon = 1e-15);
        assert_abs_diff_eq!(sigma[(1, 1)], 1.0 + b * b, epsilon = 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let sem = chain(0.5, -0.8);
        let a = sem.sample(5, &mut rng::stream(11, &[1]));
        let b = sem.sample(5, &mut rng::stream(11, &[1]));
        assert_eq!(a, b);
        assert_ne!(a, sem.sample(5, &mut rng::stream(12, &[1])));
    }

    #[test]
    fn true_ddag_examples() {
        let a = chain(0.5, 0.5);
        let same = SemPair::new(a.clone(), a.clone()).unwrap();
        assert!(same.true_ddag().arrows().is_empty());
        let changed = SemPair::new(a.clone(), chain(1.0, 0.5)).unwrap();
        assert_eq!(
            changed
                .true_ddag()
                .arrows()
                .iter()
                .copied()
                .collect::<Vec<_>>(),
            vec![(0, 1)]
        );
        let deleted = SemPair::new(a, chain(0.0, 0.5)).unwrap();
        assert_eq!(
            deleted
                .true_ddag()
                .arrows()
                .iter()
                .copied()
                .collect::<Vec<_>>(),
            vec![(0, 1)]
        );
    }

    #[test]
    fn true_dug_examples() {
        let a = chain(0.5, 0.5);
        let (g, s) = SemPair::new(a.clone(), a.clone()).unwrap().true_dug();
        assert!(g.is_empty() && s.is_empty());

        let (g, s) = SemPair::new(a.clone(), chain(1.0, 0.5)).unwrap().true_dug();
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![0, 1]);

        // Only σ₃ changes: Θ₂₂ (node 2 is the parent of 3), Θ₂₃ and Θ₃₃ move.
        let b = a.weights().clone();
        let second = LinearSem::new(b, vec![1.0, 1.0, 2.0]).unwrap();
        let (g, s) = SemPair::new(a, second).unwrap().true_dug();
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn degenerate_generator_gives_identical_sems() {
        let cfg = GenConfig::bernoulli(8, 3.0, 0.0);
        let pair = random_sem_pair(&cfg, &mut rng::stream(3, &[])).unwrap();
        assert_eq!(pair.first, pair.second);
    }

    #[test]
    fn generator_weights_respect_interval() {
        let cfg = GenConfig::bernoulli(12, 4.0, 0.3).with_changed_variances(5);
        let pair = random_sem_pair(&cfg, &mut rng::stream(9, &[])).unwrap();
        for sem in [&pair.first, &pair.second] {
            for &w in sem.weights().iter().filter(|w| **w != 0.0) {
                assert!((0.25..=1.0).contains(&w.abs()));
            }
        }
        assert!(pair.first.noise_variances().iter().all(|&w| w == 1.0));
        let changed: Vec<f64> = pair
            .second
            .noise_variances()
            .iter()
            .copied()
            .filter(|&w| w != 1.0)
            .collect();
        assert_eq!(changed.len(), 5);
        assert!(changed.iter().all(|w| (1.25..=2.0).contains(w)));
    }

    #[test]
    fn budget_mode_splits_changes() {
        let cfg = GenConfig::budget(40, 8.0, 0.05);
        for seed in 0..10 {
            let pair = random_sem_pair(&cfg, &mut rng::stream(seed, &[])).unwrap();
            let edges = pair.first.edge_count();
            let total = (0.05 * edges as f64).round() as usize;
            let ddag = pair.true_ddag();
            assert_eq!(ddag.arrows().len(), total);
            let deletions = ddag
                .arrows()
                .iter()
                .filter(|&&(i, j)| pair.second.weights()[(i, j)] == 0.0)
                .count();
            assert_eq!(deletions, total / 2);
        }
    }

    #[test]
    fn budget_mode_infeasible() {
        // A complete graph has no room for insertions.
        let cfg = GenConfig {
            s: 1e9,
            ..GenConfig::budget(4, 3.0, 1.0)
        };
        assert!(matches!(
            random_sem_pair(&cfg, &mut rng::stream(0, &[])),
            Err(Error::Generation(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let sem = chain(0.5, -0.25)
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let text = sem.to_json().unwrap();
        assert_eq!(LinearSem::from_json(&text).unwrap(), sem);
        assert!(LinearSem::from_json(r#"{"p":2,"weights":[[2,1,0.5]],"omega":[1,1]}"#).is_err());
    }
}
