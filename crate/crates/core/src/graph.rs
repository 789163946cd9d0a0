//! Simple connected graphs whose edges carry s×s positive definite weights.
//!
//! Vertices are 0-based in memory and 1-based in the JSON format. Every edge
//! is stored with `u < v`; its canonical orientation runs from `u` (origin)
//! to `v` (terminus).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{default_rank_tol, sym_eigen, DenseMatrix, LinalgError, SYMMETRY_TOLERANCE};

/// Connectivity retries for the G(n, p) model.
pub const GNP_MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("malformed graph JSON: {0}")]
    Json(String),
    #[error("graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("block size must be at least 1")]
    ZeroBlockSize,
    #[error("edge {edge}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge}: self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge}: endpoints must satisfy u < v, got ({u}, {v})")]
    NonCanonical { edge: usize, u: usize, v: usize },
    #[error("edge {edge}: duplicate of edge ({u}, {v})")]
    DuplicateEdge { edge: usize, u: usize, v: usize },
    #[error("edge {edge}: weight is {rows}x{cols}, expected {s}x{s}")]
    WeightShape { edge: usize, rows: usize, cols: usize, s: usize },
    #[error("edge {edge}: weight is not symmetric (defect {defect:e})")]
    AsymmetricWeight { edge: usize, defect: f64 },
    #[error("edge {edge}: weight is not positive definite (smallest eigenvalue {smallest:e})")]
    NotPositiveDefinite { edge: usize, smallest: f64 },
    #[error("edge {edge}: weight factorization failed: {source}")]
    Weight { edge: usize, source: LinalgError },
    #[error("graph has {m} edges, a connected graph on {n} vertices needs at least {}", n - 1)]
    TooFewEdges { n: usize, m: usize },
    #[error("graph is disconnected: {reached} of {n} vertices reachable from vertex 1")]
    Disconnected { reached: usize, n: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("no connected G({n}, {p}) sample in {attempts} attempts")]
    RetryCapExceeded { n: usize, p: f64, attempts: usize },
}

/// One edge: endpoints (0-based, `u < v`) and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: DenseMatrix,
}

/// Per-edge origin/terminus assignment. `flipped[k]` reverses edge k from
/// the canonical (origin = u) direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrientation {
    flipped: Vec<bool>,
}

impl EdgeOrientation {
    pub fn canonical(m: usize) -> Self {
        Self {
            flipped: vec![false; m],
        }
    }

    pub fn with_flips(flipped: Vec<bool>) -> Self {
        Self { flipped }
    }

    pub fn len(&self) -> usize {
        self.flipped.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flipped.is_empty()
    }

    /// (origin, terminus) of edge `k`.
    pub fn endpoints(&self, edge: &Edge, k: usize) -> (usize, usize) {
        if self.flipped[k] {
            (edge.v, edge.u)
        } else {
            (edge.u, edge.v)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightedGraph {
    n: usize,
    s: usize,
    edges: Vec<Edge>,
}

impl MatrixWeightedGraph {
    /// Builds and validates a graph. Weights are symmetrized; the first
    /// violated invariant is returned as the error.
    pub fn new(n: usize, s: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut edges = edges;
        for (k, e) in edges.iter_mut().enumerate() {
            if e.weight.is_square() && e.weight.rows() == s {
                let defect = e.weight.asymmetry().unwrap_or(0.0);
                if defect > SYMMETRY_TOLERANCE * (1.0 + e.weight.max_abs()) {
                    return Err(GraphError::AsymmetricWeight { edge: k + 1, defect });
                }
                e.weight = e.weight.symmetrized();
            }
        }
        let g = Self { n, s, edges };
        match validate(&g).failures.into_iter().next() {
            Some(err) => Err(err),
            None => Ok(g),
        }
    }

    /// Builds a graph without any checks, for feeding `validate`.
    pub fn new_unchecked(n: usize, s: usize, edges: Vec<Edge>) -> Self {
        Self { n, s, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn orientation(&self) -> EdgeOrientation {
        EdgeOrientation::canonical(self.m())
    }

    pub fn is_tree(&self) -> bool {
        self.m() + 1 == self.n
    }

    /// s = 1 and every weight equals 1.
    pub fn is_unit_scalar(&self) -> bool {
        self.s == 1 && self.edges.iter().all(|e| e.weight[(0, 0)] == 1.0)
    }

    /// Adjacency lists of (neighbor, edge index).
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, k));
            adj[e.v].push((e.u, k));
        }
        adj
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile::from(self)).expect("graph serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    s: usize,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: usize,
    v: usize,
    w: Vec<Vec<f64>>,
}

impl From<&MatrixWeightedGraph> for GraphFile {
    fn from(g: &MatrixWeightedGraph) -> Self {
        GraphFile {
            n: g.n,
            s: g.s,
            edges: g
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    u: e.u + 1,
                    v: e.v + 1,
                    w: e.weight.to_rows(),
                })
                .collect(),
        }
    }
}

/// Parses and validates the graph JSON format.
pub fn parse_graph(text: &[u8]) -> Result<MatrixWeightedGraph, GraphError> {
    let file: GraphFile = serde_json::from_slice(text).map_err(|e| GraphError::Json(e.to_string()))?;
    if file.s == 0 {
        return Err(GraphError::ZeroBlockSize);
    }
    let mut edges = Vec::with_capacity(file.edges.len());
    for (k, rec) in file.edges.into_iter().enumerate() {
        let edge = k + 1;
        for vertex in [rec.u, rec.v] {
            if vertex == 0 || vertex > file.n {
                return Err(GraphError::VertexOutOfRange { edge, vertex, n: file.n });
            }
        }
        if rec.u == rec.v {
            return Err(GraphError::SelfLoop { edge, vertex: rec.u });
        }
        if rec.u > rec.v {
            return Err(GraphError::NonCanonical { edge, u: rec.u, v: rec.v });
        }
        let rows = rec.w.len();
        let cols = rec.w.first().map_or(0, Vec::len);
        if rows != file.s || rec.w.iter().any(|r| r.len() != file.s) {
            return Err(GraphError::WeightShape { edge, rows, cols, s: file.s });
        }
        let weight = DenseMatrix::from_rows(&rec.w).map_err(|source| GraphError::Weight { edge, source })?;
        edges.push(Edge {
            u: rec.u - 1,
            v: rec.v - 1,
            weight,
        });
    }
    MatrixWeightedGraph::new(file.n, file.s, edges)
}

/// Outcome of `validate`: empty `failures` means every invariant holds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub failures: Vec<GraphError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every graph invariant and lists each violation. Edge numbers in
/// the report are 1-based.
pub fn validate(g: &MatrixWeightedGraph) -> ValidationReport {
    let mut failures = Vec::new();
    if g.n < 2 {
        failures.push(GraphError::TooFewVertices(g.n));
    }
    if g.s == 0 {
        failures.push(GraphError::ZeroBlockSize);
    }
    let mut seen = HashSet::new();
    let mut structurally_sound = true;
    for (k, e) in g.edges.iter().enumerate() {
        let edge = k + 1;
        if e.u >= g.n || e.v >= g.n {
            failures.push(GraphError::VertexOutOfRange {
                edge,
                vertex: e.u.max(e.v) + 1,
                n: g.n,
            });
            structurally_sound = false;
            continue;
        }
        if e.u == e.v {
            failures.push(GraphError::SelfLoop { edge, vertex: e.u + 1 });
        } else if e.u > e.v {
            failures.push(GraphError::NonCanonical { edge, u: e.u + 1, v: e.v + 1 });
        }
        if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
            failures.push(GraphError::DuplicateEdge { edge, u: e.u + 1, v: e.v + 1 });
        }
        if g.s > 0 {
            if let Some(err) = weight_failure(edge, &e.weight, g.s) {
                failures.push(err);
            }
        }
    }
    if g.n >= 2 && g.m() + 1 < g.n {
        failures.push(GraphError::TooFewEdges { n: g.n, m: g.m() });
    }
    if g.n >= 1 && structurally_sound {
        let reached = reachable_count(g);
        if reached < g.n {
            failures.push(GraphError::Disconnected { reached, n: g.n });
        }
    }
    ValidationReport { failures }
}

fn weight_failure(edge: usize, w: &DenseMatrix, s: usize) -> Option<GraphError> {
    if w.rows() != s || w.cols() != s {
        return Some(GraphError::WeightShape {
            edge,
            rows: w.rows(),
            cols: w.cols(),
            s,
        });
    }
    match sym_eigen(w) {
        Ok(d) => {
            let smallest = d.min();
            if smallest <= default_rank_tol(s) * d.spectral_radius() {
                Some(GraphError::NotPositiveDefinite { edge, smallest })
            } else {
                None
            }
        }
        Err(LinalgError::Asymmetric { defect }) => Some(GraphError::AsymmetricWeight { edge, defect }),
        Err(source) => Some(GraphError::Weight { edge, source }),
    }
}

/// Breadth-first traversal from vertex 0.
fn reachable_count(g: &MatrixWeightedGraph) -> usize {
    let adj = g.adjacency();
    let mut visited = vec![false; g.n];
    let mut queue = VecDeque::from([0]);
    visited[0] = true;
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x] {
            if !visited[y] {
                visited[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count
}

/// Random graph families for building test corpora.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GraphModel {
    Gnp { p: f64 },
    Tree,
    Cycle,
    Complete,
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphModel::Gnp { p } => write!(f, "gnp({p})"),
            GraphModel::Tree => f.write_str("tree"),
            GraphModel::Cycle => f.write_str("cycle"),
            GraphModel::Complete => f.write_str("complete"),
        }
    }
}

impl FromStr for GraphModel {
    type Err = GraphError;

    /// Accepts `tree`, `cycle`, `complete`, `gnp(p)` and `gnp:p`.
    fn from_str(text: &str) -> Result<Self, GraphError> {
        match text {
            "tree" => Ok(GraphModel::Tree),
            "cycle" => Ok(GraphModel::Cycle),
            "complete" => Ok(GraphModel::Complete),
            _ => {
                let p = text
                    .strip_prefix("gnp(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| text.strip_prefix("gnp:"))
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| GraphError::InvalidParameters(format!("unknown model '{text}'")))?;
                Ok(GraphModel::Gnp { p })
            }
        }
    }
}

/// Seeded random graph. Structure is drawn first, then one weight
/// W = B′B + 0.1·s·I per edge in edge order, with B uniform on [−1, 1].
pub fn random_graph(n: usize, s: usize, model: GraphModel, seed: u64) -> Result<MatrixWeightedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    if s == 0 {
        return Err(GraphError::ZeroBlockSize);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = match model {
        GraphModel::Tree => {
            let mut labels: Vec<usize> = (0..n).collect();
            labels.shuffle(&mut rng);
            let mut pairs: Vec<_> = (1..n)
                .map(|k| {
                    let parent = labels[rng.gen_range(0..k)];
                    let child = labels[k];
                    (parent.min(child), parent.max(child))
                })
                .collect();
            pairs.sort_unstable();
            pairs
        }
        GraphModel::Cycle => {
            if n < 3 {
                return Err(GraphError::InvalidParameters("a cycle needs at least 3 vertices".into()));
            }
            let mut pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            pairs.push((0, n - 1));
            pairs
        }
        GraphModel::Complete => (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect(),
        GraphModel::Gnp { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::InvalidParameters(format!("edge probability {p} outside [0, 1]")));
            }
            let mut found = None;
            for _ in 0..GNP_MAX_ATTEMPTS {
                let pairs: Vec<_> = (0..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .filter(|_| rng.gen_bool(p))
                    .collect();
                let skeleton = MatrixWeightedGraph::new_unchecked(
                    n,
                    s,
                    pairs
                        .iter()
                        .map(|&(u, v)| Edge {
                            u,
                            v,
                            weight: DenseMatrix::identity(s),
                        })
                        .collect(),
                );
                if reachable_count(&skeleton) == n {
                    found = Some(pairs);
                    break;
                }
            }
            found.ok_or(GraphError::RetryCapExceeded {
                n,
                p,
                attempts: GNP_MAX_ATTEMPTS,
            })?
        }
    };
    with_weights_from(n, s, &pairs, &mut rng)
}

/// Places seeded random weights W = B′B + 0.1·s·I on a fixed edge list
/// (0-based pairs with u < v).
pub fn with_random_weights(
    n: usize,
    s: usize,
    pairs: &[(usize, usize)],
    seed: u64,
) -> Result<MatrixWeightedGraph, GraphError> {
    with_weights_from(n, s, pairs, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn with_weights_from(
    n: usize,
    s: usize,
    pairs: &[(usize, usize)],
    rng: &mut ChaCha8Rng,
) -> Result<MatrixWeightedGraph, GraphError> {
    let edges = pairs
        .iter()
        .map(|&(u, v)| Edge {
            u,
            v,
            weight: random_pd_weight(rng, s),
        })
        .collect();
    MatrixWeightedGraph::new(n, s, edges)
}

fn random_pd_weight(rng: &mut impl Rng, s: usize) -> DenseMatrix {
    let b = DenseMatrix::from_fn(s, s, |_, _| rng.gen_range(-1.0..=1.0));
    let shift = DenseMatrix::identity(s).scale(0.1 * s as f64);
    (&(&b.transpose() * &b) + &shift).symmetrized()
}
