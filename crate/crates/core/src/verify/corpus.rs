use serde::{Deserialize, Serialize};

use crate::graph::{random_graph, with_random_weights, GraphError, GraphModel, MatrixWeightedGraph};
use crate::linalg::DenseMatrix;
use crate::graph::Edge;

use super::{run_suite, GraphDescriptor, Selection, SuiteReport};

/// One seeded random graph to generate and verify.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    #[serde(flatten)]
    pub model: GraphModel,
    pub n: usize,
    pub s: usize,
    pub seed: u64,
}

/// Per-spec outcome: a report, or the reason the graph could not be built or verified.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub spec: CorpusSpec,
    pub report: Option<SuiteReport>,
    pub error: Option<String>,
}

impl CorpusEntry {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.passed)
    }
}

/// Generates and verifies each spec with the full registry, in order.
pub fn run_corpus(specs: &[CorpusSpec]) -> Vec<CorpusEntry> {
    specs
        .iter()
        .map(|spec| {
            let outcome = random_graph(spec.n, spec.s, spec.model, spec.seed)
                .map_err(|e| e.to_string())
                .and_then(|g| run_suite(&g, &Selection::All).map_err(|e| e.to_string()));
            match outcome {
                Ok(mut report) => {
                    report.graph.model = Some(spec.model.to_string());
                    report.graph.seed = Some(spec.seed);
                    CorpusEntry {
                        spec: *spec,
                        report: Some(report),
                        error: None,
                    }
                }
                Err(error) => CorpusEntry {
                    spec: *spec,
                    report: None,
                    error: Some(error),
                },
            }
        })
        .collect()
}

/// A corpus graph with its descriptor.
#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub descriptor: GraphDescriptor,
    pub graph: MatrixWeightedGraph,
}

const RANDOM_MODELS: [GraphModel; 5] = [
    GraphModel::Tree,
    GraphModel::Gnp { p: 0.5 },
    GraphModel::Cycle,
    GraphModel::Complete,
    GraphModel::Tree,
];

/// The 25 seeded random entries of the standard corpus (n ≤ 8, s ≤ 3).
pub fn standard_random_specs() -> Vec<CorpusSpec> {
    (0..25u64)
        .map(|k| {
            let model = RANDOM_MODELS[(k % 5) as usize];
            let mut n = 2 + ((k * 3) % 7) as usize;
            if matches!(model, GraphModel::Cycle) {
                n = n.max(3);
            }
            CorpusSpec {
                model,
                n,
                s: 1 + (k % 3) as usize,
                seed: 1000 + k,
            }
        })
        .collect()
}

/// P2, P3, K3, C4 and the star on four vertices, each with s ∈ {1, 2, 3} and
/// either identity or seeded random PD weights, followed by 25 seeded random graphs.
pub fn standard_corpus() -> Result<Vec<NamedGraph>, GraphError> {
    let shapes: [(&str, usize, &[(usize, usize)]); 5] = [
        ("P2", 2, &[(0, 1)]),
        ("P3", 3, &[(0, 1), (1, 2)]),
        ("K3", 3, &[(0, 1), (0, 2), (1, 2)]),
        ("C4", 4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
        ("S4", 4, &[(0, 1), (0, 2), (0, 3)]),
    ];
    let mut out = Vec::new();
    for (name, n, pairs) in shapes {
        for s in 1..=3 {
            let unit = MatrixWeightedGraph::new(
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
            )?;
            out.push(named(unit, format!("{name}/unit"), None));
            let seed = 17 * n as u64 + s as u64;
            let random = with_random_weights(n, s, pairs, seed)?;
            out.push(named(random, format!("{name}/random"), Some(seed)));
        }
    }
    for spec in standard_random_specs() {
        let g = random_graph(spec.n, spec.s, spec.model, spec.seed)?;
        out.push(named(g, spec.model.to_string(), Some(spec.seed)));
    }
    Ok(out)
}

fn named(graph: MatrixWeightedGraph, model: String, seed: Option<u64>) -> NamedGraph {
    let mut descriptor = GraphDescriptor::of(&graph);
    descriptor.model = Some(model);
    descriptor.seed = seed;
    NamedGraph { descriptor, graph }
}
