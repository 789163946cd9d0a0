//! Resistance matrices of connected graphs whose edge weights are s×s
//! positive definite matrices, together with closed forms for their
//! determinant, inverse, inertia and eigenvalue interlacing, and a
//! verifier that checks each identity numerically.

pub mod graph;
pub mod laplacian;
pub mod linalg;
pub mod resistance;
pub mod verify;

pub use graph::{parse_graph, random_graph, validate, with_random_weights, Edge, GraphError, GraphModel, MatrixWeightedGraph};
pub use laplacian::{build_incidence, build_laplacian, chi, BlockMatrix};
pub use linalg::{DenseMatrix, Inertia, LinalgError, LogDet};
pub use resistance::{EngineError, InterlacingRow, ResistanceWorkspace};
pub use verify::{run_check, run_corpus, run_suite, CheckId, CheckResult, Selection, SuiteReport};
