//! Named numerical checks for every identity the resistance engine relies on,
//! run against one graph or a seeded corpus.

mod checks;
mod corpus;
mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::MatrixWeightedGraph;
use crate::resistance::EngineError;

pub use checks::{cofactor_equality_defect, pinv_submatrix_samples, SubmatrixSample, Verifier, SUBMATRIX_RANK_TOL};
pub use corpus::{run_corpus, standard_corpus, standard_random_specs, CorpusEntry, CorpusSpec, NamedGraph};
pub use oracle::{scalar_resistance_oracle, tree_distance_oracle, tree_determinant};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown check id '{0}'")]
    UnknownCheck(String),
    #[error("oracle needs s = 1, graph has s = {0}")]
    NotScalar(usize),
    #[error("oracle needs a tree")]
    NotTree,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<crate::linalg::LinalgError> for VerifyError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        VerifyError::Engine(EngineError::Linalg(e))
    }
}

macro_rules! check_ids {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// Registry of checks. Declaration order is report order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CheckId {
            $($variant),+
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name),+
                }
            }
        }

        impl FromStr for CheckId {
            type Err = VerifyError;

            fn from_str(text: &str) -> Result<Self, VerifyError> {
                match text {
                    $($name => Ok(CheckId::$variant),)+
                    _ => Err(VerifyError::UnknownCheck(text.to_string())),
                }
            }
        }
    };
}

check_ids! {
    LapKernel => "LAP_KERNEL",
    LEqQqt => "L_EQ_QQT",
    ShiftNonsing => "SHIFT_NONSING",
    Lplus => "LPLUS",
    Commute => "COMMUTE",
    TauDef => "TAUDEF",
    TauSum => "TAU_SUM",
    Rwiden => "RWIDEN",
    Lrl => "LRL",
    Qrq => "QRQ",
    TauRTauPd => "TAURTAU_PD",
    TauRTauForm => "TAURTAU_FORM",
    DetFormula => "DET_FORMULA",
    InvFormula => "INV_FORMULA",
    Inertia => "INERTIA",
    Interlace => "INTERLACE",
    CofactorEq => "COFACTOR_EQ",
    PinvSubmatrix => "PINV_SUBMATRIX",
    ScalarReduction => "SCALAR_REDUCTION",
    TreeDistance => "TREE_DISTANCE",
    TreeDet => "TREE_DET",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CheckId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Outcome of one check. `passed` is exactly `residual <= tolerance`;
/// skipped checks carry zero residual and count as passed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: CheckId,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub skipped: bool,
    pub details: String,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CheckResult {
    pub fn measured(id: CheckId, residual: f64, tolerance: f64, details: String) -> Self {
        Self {
            id,
            residual,
            tolerance,
            passed: residual <= tolerance,
            skipped: false,
            details,
            wall_time: Duration::ZERO,
        }
    }

    pub fn skipped(id: CheckId, reason: &str) -> Self {
        Self {
            id,
            residual: 0.0,
            tolerance: 0.0,
            passed: true,
            skipped: true,
            details: format!("not applicable: {reason}"),
            wall_time: Duration::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDescriptor {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub model: Option<String>,
    pub seed: Option<u64>,
}

impl GraphDescriptor {
    pub fn of(g: &MatrixWeightedGraph) -> Self {
        Self {
            n: g.n(),
            s: g.s(),
            m: g.m(),
            model: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub graph: GraphDescriptor,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn check(&self, id: CheckId) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn applicable(&self) -> usize {
        self.checks.iter().filter(|c| !c.skipped).count()
    }
}

/// Which checks `run_suite` runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    All,
    Only(Vec<CheckId>),
}

/// Runs a single check on `g`.
pub fn run_check(g: &MatrixWeightedGraph, id: CheckId) -> Result<CheckResult, VerifyError> {
    Ok(Verifier::new(g)?.run(id))
}

/// Looks a check up by its registry name, then runs it.
pub fn run_check_named(g: &MatrixWeightedGraph, name: &str) -> Result<CheckResult, VerifyError> {
    run_check(g, name.parse()?)
}

/// Runs the selected checks in parallel; results come back in registry order.
pub fn run_suite(g: &MatrixWeightedGraph, selection: &Selection) -> Result<SuiteReport, VerifyError> {
    let verifier = Verifier::new(g)?;
    let mut ids: Vec<CheckId> = match selection {
        Selection::All => CheckId::ALL.to_vec(),
        Selection::Only(ids) => ids.clone(),
    };
    ids.sort();
    ids.dedup();
    let checks: Vec<CheckResult> = ids
        .par_iter()
        .map(|&id| {
            let started = Instant::now();
            let mut result = verifier.run(id);
            result.wall_time = started.elapsed();
            result
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        graph: GraphDescriptor::of(g),
        checks,
        passed,
    })
}
