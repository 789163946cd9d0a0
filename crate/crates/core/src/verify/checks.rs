use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::MatrixWeightedGraph;
use crate::laplacian::{build_incidence, BlockMatrix};
use crate::linalg::{
    block_cofactor_log, default_rank_tol, inverse, log_det_lu, pseudo_inverse, sym_eigen, DenseMatrix, LinalgError,
};
use crate::resistance::{ones_kron_identity, stacked_identity, ResistanceWorkspace, INTERLACING_SLACK};

use super::oracle::{scalar_resistance_oracle, tree_distance_oracle, tree_determinant};
use super::{CheckId, CheckResult, VerifyError};

// Tolerances. Identity residuals are compared against tol · (1 + scale)
// where scale bounds the magnitude of the terms involved.
const KERNEL_TOL: f64 = 1e-12;
const FACTOR_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-8;
const PRODUCT_TOL: f64 = 1e-9;
const SUM_TOL: f64 = 1e-10;
const DET_TOL: f64 = 1e-8;
const INVERSE_TOL: f64 = 1e-8;
const COFACTOR_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-10;
const TREE_DET_TOL: f64 = 1e-10;

/// Principal submatrices A[S,S] with reciprocal condition above this are
/// treated as nonsingular when sampling for PINV_SUBMATRIX.
const SUBMATRIX_SCREEN_RCOND: f64 = 1e-8;
/// A†[S,S] with reciprocal condition at or below this counts as singular.
const SUBMATRIX_SINGULAR_RCOND: f64 = 1e-10;
const SUBMATRIX_SAMPLES: usize = 5;
const SUBMATRIX_DRAWS: usize = 200;
const SUBMATRIX_SEED: u64 = 0x5eed_5eed;
/// Relative rank tolerance for the sampled instances. They are computed
/// matrices whose null directions carry round-off well above order · ε.
pub const SUBMATRIX_RANK_TOL: f64 = 1e-10;

/// Precomputed state shared by every check on one graph.
pub struct Verifier {
    ws: ResistanceWorkspace,
    incidence: BlockMatrix,
    lap_norm: f64,
    mag: f64,
}

impl Verifier {
    pub fn new(g: &MatrixWeightedGraph) -> Result<Self, VerifyError> {
        let ws = ResistanceWorkspace::new(g)?;
        let incidence = build_incidence(g)?;
        let lap_norm = ws.laplacian().body().max_abs();
        let mag = 1.0 + lap_norm * ws.x().body().max_abs().max(ws.resistance().body().max_abs());
        Ok(Self {
            ws,
            incidence,
            lap_norm,
            mag,
        })
    }

    pub fn workspace(&self) -> &ResistanceWorkspace {
        &self.ws
    }

    pub fn run(&self, id: CheckId) -> CheckResult {
        match self.evaluate(id) {
            Ok(result) => result,
            Err(e) => CheckResult {
                residual: f64::MAX,
                tolerance: 0.0,
                passed: false,
                skipped: false,
                details: format!("computation failed: {e}"),
                ..CheckResult::skipped(id, "")
            },
        }
    }

    fn graph(&self) -> &MatrixWeightedGraph {
        self.ws.graph()
    }

    fn lap(&self) -> &DenseMatrix {
        self.ws.laplacian().body()
    }

    fn r(&self) -> &DenseMatrix {
        self.ws.resistance().body()
    }

    fn ones(&self) -> DenseMatrix {
        stacked_identity(self.ws.n(), self.ws.s())
    }

    fn evaluate(&self, id: CheckId) -> Result<CheckResult, VerifyError> {
        let (n, s) = (self.ws.n(), self.ws.s());
        let g = self.graph();
        let result = match id {
            CheckId::LapKernel => {
                let residual = (self.lap() * &self.ones()).max_abs();
                CheckResult::measured(id, residual, KERNEL_TOL * (1.0 + self.lap_norm), "‖L(1⊗I)‖_max".into())
            }
            CheckId::LEqQqt => {
                let q = self.incidence.body();
                let residual = (q * &q.transpose()).max_abs_diff(self.lap());
                CheckResult::measured(id, residual, FACTOR_TOL * (1.0 + self.lap_norm), "‖QQ′ − L‖_max".into())
            }
            CheckId::ShiftNonsing => {
                let shifted = self.lap() + &ones_kron_identity(n, s).scale(1.0 / n as f64);
                let spectrum = sym_eigen(&shifted)?;
                let sigma_min = spectrum.eigenvalues.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
                let band = default_rank_tol(n * s) * spectrum.spectral_radius();
                let mut details = format!(
                    "smallest singular value {sigma_min:e}, zero band {band:e}, condition {:e}",
                    self.ws.shift_condition()
                );
                if self.ws.low_confidence() {
                    details.push_str(" (LOW-CONFIDENCE)");
                }
                CheckResult::measured(id, (band - sigma_min).max(0.0), 0.0, details)
            }
            CheckId::Lplus => {
                let spectral = pseudo_inverse(self.lap(), None)?;
                let engine = self.ws.laplacian_pinv().body();
                let residual = engine.max_abs_diff(&spectral);
                CheckResult::measured(
                    id,
                    residual,
                    IDENTITY_TOL * (1.0 + engine.max_abs()),
                    "‖(X − J⊗I/n) − spectral L†‖_max".into(),
                )
            }
            CheckId::Commute => {
                let x = self.ws.x().body();
                let residual = (self.lap() * x).max_abs_diff(&(x * self.lap()));
                CheckResult::measured(id, residual, PRODUCT_TOL * self.mag, "‖LX − XL‖_max".into())
            }
            CheckId::TauDef => {
                let lhs = &(self.lap() * self.ws.xbar_ones()) + &self.ones().scale(2.0 / n as f64);
                let residual = lhs.max_abs_diff(self.ws.tau());
                CheckResult::measured(id, residual, PRODUCT_TOL * self.mag, "‖LX̄(1⊗I) + (2/n)(1⊗I) − τ‖_max".into())
            }
            CheckId::TauSum => {
                let sum = &self.ws.tau().transpose() * &self.ones();
                let residual = sum.max_abs_diff(&DenseMatrix::identity(s).scale(2.0));
                CheckResult::measured(id, residual, SUM_TOL * self.mag, "‖τ′(1⊗I) − 2I‖_max".into())
            }
            CheckId::Rwiden => {
                let mut total = DenseMatrix::zeros(s, s);
                let r = self.ws.resistance();
                for e in g.edges() {
                    let w_inv = inverse(&e.weight)?;
                    total = &total + &(&w_inv * &r.block(e.v, e.u));
                    total = &total + &(&w_inv * &r.block(e.u, e.v));
                }
                let target = DenseMatrix::identity(s).scale(2.0 * (n as f64 - 1.0));
                let residual = total.max_abs_diff(&target);
                CheckResult::measured(
                    id,
                    residual,
                    PRODUCT_TOL * n as f64 * self.mag,
                    "‖Σ_i Σ_{j∼i} W⁻¹R_ji − 2(n−1)I‖_max".into(),
                )
            }
            CheckId::Lrl => {
                let lrl = &(self.lap() * self.r()) * self.lap();
                let residual = lrl.max_abs_diff(&self.lap().scale(-2.0));
                CheckResult::measured(
                    id,
                    residual,
                    IDENTITY_TOL * (1.0 + self.lap_norm * self.mag),
                    "‖LRL + 2L‖_max".into(),
                )
            }
            CheckId::Qrq => {
                let q = self.incidence.body();
                let qrq = &(&q.transpose() * self.r()) * q;
                let q_mag = 1.0 + q.max_abs() * q.max_abs() * self.r().max_abs();
                if g.is_tree() {
                    let residual = qrq.max_abs_diff(&DenseMatrix::identity(q.cols()).scale(-2.0));
                    CheckResult::measured(id, residual, IDENTITY_TOL * q_mag, "‖Q′RQ + 2I_{(n−1)s}‖_max".into())
                } else {
                    // Q is not of full column rank off trees; check QQ′RQ = −2Q instead.
                    let lhs = q * &qrq;
                    let residual = lhs.max_abs_diff(&q.scale(-2.0));
                    CheckResult::measured(
                        id,
                        residual,
                        IDENTITY_TOL * (1.0 + q.max_abs() * q_mag),
                        "‖QQ′RQ + 2Q‖_max (graph is not a tree)".into(),
                    )
                }
            }
            CheckId::TauRTauPd => {
                let trt = self.ws.tau_r_tau_direct();
                let spectrum = sym_eigen(trt)?;
                let band = default_rank_tol(s) * spectrum.spectral_radius();
                CheckResult::measured(
                    id,
                    (band - spectrum.min()).max(0.0),
                    0.0,
                    format!("smallest eigenvalue {:e}, zero band {band:e}", spectrum.min()),
                )
            }
            CheckId::TauRTauForm => {
                let direct = self.ws.tau_r_tau_direct();
                let residual = direct.max_abs_diff(&self.ws.tau_r_tau_closed_form());
                CheckResult::measured(
                    id,
                    residual,
                    PRODUCT_TOL * (1.0 + direct.max_abs()),
                    "‖τ′Rτ − (2x̄′Lx̄ + (8/n)(ΣX_ii − I))‖_max".into(),
                )
            }
            CheckId::DetFormula => {
                let closed = self.ws.det_resistance()?;
                let direct = log_det_lu(self.r())?;
                CheckResult::measured(
                    id,
                    closed.relative_error(direct),
                    DET_TOL,
                    format!("closed form {:e}, LU {:e}", closed.value(), direct.value()),
                )
            }
            CheckId::InvFormula => {
                let f = self.ws.inverse_resistance()?;
                let order = n * s;
                let residual = (&f * self.r()).max_abs_diff(&DenseMatrix::identity(order));
                let lu = inverse(self.r())?;
                let agreement = f.max_abs_diff(&lu) / f.max_abs().max(f64::MIN_POSITIVE);
                CheckResult::measured(
                    id,
                    residual,
                    INVERSE_TOL,
                    format!("‖FR − I‖_max; relative distance to LU inverse {agreement:e}"),
                )
            }
            CheckId::Inertia => {
                let inertia = self.ws.resistance_inertia()?;
                let expected = (s, n * s - s, 0);
                let mismatch = inertia.positive.abs_diff(expected.0)
                    + inertia.negative.abs_diff(expected.1)
                    + inertia.zero.abs_diff(expected.2);
                CheckResult::measured(
                    id,
                    mismatch as f64,
                    0.0,
                    format!(
                        "inertia ({}, {}, {}), expected {:?}",
                        inertia.positive, inertia.negative, inertia.zero, expected
                    ),
                )
            }
            CheckId::Interlace => {
                let rows = self.ws.interlacing_report()?;
                let worst = rows.iter().map(|r| r.violation()).fold(0.0, f64::max);
                let offenders: Vec<usize> = rows.iter().filter(|r| !r.holds).map(|r| r.i).collect();
                let details = if offenders.is_empty() {
                    format!("{} inequalities hold", rows.len())
                } else {
                    format!("violated at i = {offenders:?}")
                };
                CheckResult::measured(id, worst, INTERLACING_SLACK, details)
            }
            CheckId::CofactorEq => {
                let (defect, chi) = cofactor_equality_defect(self.lap(), s)?;
                let sign = if chi > 0.0 { "positive" } else if chi < 0.0 { "negative" } else { "zero" };
                CheckResult::measured(
                    id,
                    defect,
                    COFACTOR_TOL,
                    format!("chi = {chi:e} ({sign}); max |c_ij − chi| / (1 + |chi|) over {n}x{n} blocks"),
                )
            }
            CheckId::PinvSubmatrix => {
                let mut rng = ChaCha8Rng::seed_from_u64(SUBMATRIX_SEED ^ ((n as u64) << 32) ^ ((s as u64) << 16) ^ g.m() as u64);
                let shifted = self.lap() + &ones_kron_identity(n, s).scale(1.0 / n as f64);
                let mut violations = 0;
                let mut accepted = 0;
                let mut worst = f64::INFINITY;
                for a in [self.lap(), &shifted, self.ws.laplacian_pinv().body()] {
                    let samples = pinv_submatrix_samples(a, &mut rng, n * s - s, SUBMATRIX_RANK_TOL)?;
                    accepted += samples.len();
                    for sample in samples {
                        worst = worst.min(sample.pinv_rcond);
                        if sample.pinv_rcond <= SUBMATRIX_SINGULAR_RCOND {
                            violations += 1;
                        }
                    }
                }
                CheckResult::measured(
                    id,
                    violations as f64,
                    0.0,
                    format!("{accepted} index sets over L, L + J⊗I/n, L†; smallest rcond of A†[S,S] {worst:e}"),
                )
            }
            CheckId::ScalarReduction => {
                if s != 1 {
                    return Ok(CheckResult::skipped(id, "block size is not 1"));
                }
                let oracle = scalar_resistance_oracle(g)?;
                let residual = self.r().max_abs_diff(&oracle);
                CheckResult::measured(id, residual, ORACLE_TOL, "‖R − scalar oracle‖_max".into())
            }
            CheckId::TreeDistance => {
                if s != 1 || !g.is_tree() {
                    return Ok(CheckResult::skipped(id, "needs a tree with s = 1"));
                }
                let dist = tree_distance_oracle(g)?;
                let residual = self.r().max_abs_diff(&dist);
                CheckResult::measured(id, residual, ORACLE_TOL, "‖R − path distance‖_max".into())
            }
            CheckId::TreeDet => {
                if !g.is_tree() || !g.is_unit_scalar() {
                    return Ok(CheckResult::skipped(id, "needs an unweighted tree with s = 1"));
                }
                let expected = tree_determinant(n);
                let direct = log_det_lu(self.r())?;
                let residual = direct.relative_error(crate::linalg::LogDet::from_value(expected));
                CheckResult::measured(
                    id,
                    residual,
                    TREE_DET_TOL,
                    format!("det R = {:e}, expected {expected}", direct.value()),
                )
            }
        };
        Ok(result)
    }
}

/// Max over all block pairs (i, j) of |cofactor_ij − cofactor_11| / (1 + |cofactor_11|),
/// together with cofactor_11.
pub fn cofactor_equality_defect(a: &DenseMatrix, s: usize) -> Result<(f64, f64), LinalgError> {
    let blocks = a.rows() / s;
    let reference = block_cofactor_log(a, 1, 1, s)?.value();
    let mut worst = 0.0_f64;
    for i in 1..=blocks {
        for j in 1..=blocks {
            let c = block_cofactor_log(a, i, j, s)?.value();
            worst = worst.max((c - reference).abs() / (1.0 + reference.abs()));
        }
    }
    Ok((worst, reference))
}

/// One accepted index set for the principal-submatrix property.
#[derive(Debug, Clone)]
pub struct SubmatrixSample {
    /// Zero-based indices.
    pub indices: Vec<usize>,
    pub rcond: f64,
    pub pinv_rcond: f64,
}

/// Draws up to five index sets S with |S| ≤ `max_size` and A[S,S]
/// well-conditioned, and reports the conditioning of A†[S,S] for each.
/// A must be symmetric positive semidefinite; `rank_tol` sets the relative
/// zero band for its pseudoinverse.
pub fn pinv_submatrix_samples(
    a: &DenseMatrix,
    rng: &mut impl Rng,
    max_size: usize,
    rank_tol: f64,
) -> Result<Vec<SubmatrixSample>, LinalgError> {
    let order = a.rows();
    let pinv = pseudo_inverse(a, Some(rank_tol))?;
    let max_size = max_size.clamp(1, order);
    let mut out = Vec::new();
    for _ in 0..SUBMATRIX_DRAWS {
        if out.len() == SUBMATRIX_SAMPLES {
            break;
        }
        let size = rng.gen_range(1..=max_size);
        let mut indices = sample(rng, order, size).into_vec();
        indices.sort_unstable();
        let rcond = reciprocal_condition(&a.select(&indices, &indices))?;
        if rcond <= SUBMATRIX_SCREEN_RCOND {
            continue;
        }
        let pinv_rcond = reciprocal_condition(&pinv.select(&indices, &indices))?;
        out.push(SubmatrixSample {
            indices,
            rcond,
            pinv_rcond,
        });
    }
    Ok(out)
}

/// min|λ| / max|λ| of a symmetric matrix (0 for the zero matrix).
fn reciprocal_condition(a: &DenseMatrix) -> Result<f64, LinalgError> {
    let spectrum = sym_eigen(a)?;
    let largest = spectrum.spectral_radius();
    if largest == 0.0 {
        return Ok(0.0);
    }
    let smallest = spectrum.eigenvalues.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    Ok(smallest / largest)
}
