//! Resistance matrix of a matrix-weighted graph and its closed forms.
//!
//! Everything is derived from X = (L + (1/n)J⊗I_s)⁻¹:
//!
//! ```text
//! L†   = X − (1/n) J⊗I_s
//! R    = X̄(J⊗I_s) + (J⊗I_s)X̄ − 2X          (R_ij = X_ii + X_jj − 2X_ij)
//! τ_i  = 2I_s − Σ_{j∼i} W_ij⁻¹ R_ji
//! det R = (−1)^{(n−1)s} 2^{(n−3)s} det(τ′Rτ) / χ(G)
//! R⁻¹  = −½L + τ(τ′Rτ)⁻¹τ′
//! ```

use serde::Serialize;
use thiserror::Error;

use crate::graph::MatrixWeightedGraph;
use crate::laplacian::{build_laplacian, BlockMatrix};
use crate::linalg::{
    block_cofactor_log, default_rank_tol, inertia_of, kron, log_det_lu, sym_eigen, DenseMatrix, Inertia, LinalgError,
    LogDet, LuDecomposition,
};

/// Condition number of the shifted Laplacian above which results are flagged.
pub const LOW_CONFIDENCE_CONDITION: f64 = 1e12;

/// Relative slack applied to both interlacing inequalities.
pub const INTERLACING_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("L + (1/n)J⊗I is numerically singular (smallest eigenvalue {smallest:e}); is the graph connected?")]
    SingularShift { smallest: f64 },
    #[error("τ′Rτ is not positive definite (smallest eigenvalue {smallest:e}, zero band {band:e})")]
    TauRTauNotPositiveDefinite { smallest: f64, band: f64 },
    #[error("χ(G) vanishes; cannot evaluate the determinant formula")]
    ChiVanishes,
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// J_n ⊗ I_s.
pub fn ones_kron_identity(n: usize, s: usize) -> DenseMatrix {
    kron(&DenseMatrix::ones(n, n), &DenseMatrix::identity(s))
}

/// 1_n ⊗ I_s, an ns × s matrix.
pub fn stacked_identity(n: usize, s: usize) -> DenseMatrix {
    kron(&DenseMatrix::ones(n, 1), &DenseMatrix::identity(s))
}

/// X = (L + (1/n)J⊗I_s)⁻¹ by LU, with the shifted matrix's condition number.
pub fn compute_x(lap: &BlockMatrix) -> Result<(BlockMatrix, f64), EngineError> {
    let (n, s) = (lap.row_blocks(), lap.block_size());
    let shifted = lap.body() + &ones_kron_identity(n, s).scale(1.0 / n as f64);
    let spectrum = sym_eigen(&shifted)?;
    let band = default_rank_tol(n * s) * spectrum.spectral_radius();
    if spectrum.min() <= band {
        return Err(EngineError::SingularShift {
            smallest: spectrum.min(),
        });
    }
    let condition = spectrum.max() / spectrum.min();
    let lu = LuDecomposition::new(&shifted)?;
    let x = lu.inverse()?.symmetrized();
    Ok((BlockMatrix::new(x, s)?, condition))
}

/// L† = X − (1/n)J⊗I_s.
pub fn laplacian_pinv(x: &BlockMatrix) -> BlockMatrix {
    let (n, s) = (x.row_blocks(), x.block_size());
    let body = x.body() - &ones_kron_identity(n, s).scale(1.0 / n as f64);
    BlockMatrix::new(body, s).expect("same shape as X")
}

/// R_ij = K_ii + K_jj − 2K_ij for any matrix K partitioned into s×s blocks.
///
/// With K = X this is the X̄(J⊗I) + (J⊗I)X̄ − 2X assembly; with K = L† it is
/// the defining formula. Diagonal blocks come out exactly zero.
pub fn resistance_from_blocks(k: &BlockMatrix) -> BlockMatrix {
    let (n, s) = (k.row_blocks(), k.block_size());
    let diagonal: Vec<DenseMatrix> = (0..n).map(|i| k.block(i, i)).collect();
    let mut r = BlockMatrix::zeros(n, n, s);
    for i in 0..n {
        for j in 0..n {
            let sum = &diagonal[i] + &diagonal[j];
            r.set_block(i, j, &(&sum - &k.block(i, j).scale(2.0)));
        }
    }
    r
}

/// One row of the interlacing table: μ_{s+i} ≤ −2/λ_i ≤ μ_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterlacingRow {
    pub i: usize,
    pub mu_lower: f64,
    pub bound: f64,
    pub mu_upper: f64,
    pub holds: bool,
}

impl InterlacingRow {
    /// Largest violation of either inequality, scaled by 1 + |bound|.
    pub fn violation(&self) -> f64 {
        let excess = (self.mu_lower - self.bound).max(self.bound - self.mu_upper).max(0.0);
        excess / (1.0 + self.bound.abs())
    }
}

/// All derived matrices for one graph. Built once, read-only afterwards.
#[derive(Debug, Clone)]
pub struct ResistanceWorkspace {
    graph: MatrixWeightedGraph,
    laplacian: BlockMatrix,
    x: BlockMatrix,
    lpinv: BlockMatrix,
    xbar: BlockMatrix,
    xbar_ones: DenseMatrix,
    resistance: BlockMatrix,
    tau: DenseMatrix,
    tau_r_tau: DenseMatrix,
    shift_condition: f64,
}

impl ResistanceWorkspace {
    pub fn new(graph: &MatrixWeightedGraph) -> Result<Self, EngineError> {
        let (n, s) = (graph.n(), graph.s());
        let laplacian = build_laplacian(graph)?;
        let (x, shift_condition) = compute_x(&laplacian)?;
        let lpinv = laplacian_pinv(&x);
        let xbar = x.block_diagonal();
        let xbar_ones = xbar.body() * &stacked_identity(n, s);
        let resistance = resistance_from_blocks(&x);
        let tau = compute_tau(graph, &laplacian, &resistance);
        let tau_r_tau = &(&tau.transpose() * resistance.body()) * &tau;
        Ok(Self {
            graph: graph.clone(),
            laplacian,
            x,
            lpinv,
            xbar,
            xbar_ones,
            resistance,
            tau,
            tau_r_tau,
            shift_condition,
        })
    }

    pub fn graph(&self) -> &MatrixWeightedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn s(&self) -> usize {
        self.graph.s()
    }

    pub fn laplacian(&self) -> &BlockMatrix {
        &self.laplacian
    }

    pub fn x(&self) -> &BlockMatrix {
        &self.x
    }

    /// L†, whose s×s blocks are K_ij.
    pub fn laplacian_pinv(&self) -> &BlockMatrix {
        &self.lpinv
    }

    /// X̄: block-diagonal part of X.
    pub fn xbar(&self) -> &BlockMatrix {
        &self.xbar
    }

    /// x̄ = X̄(1⊗I_s).
    pub fn xbar_ones(&self) -> &DenseMatrix {
        &self.xbar_ones
    }

    pub fn resistance(&self) -> &BlockMatrix {
        &self.resistance
    }

    /// Block R_ij for 1-based vertices.
    pub fn resistance_pair(&self, i: usize, j: usize) -> Result<DenseMatrix, EngineError> {
        let n = self.n();
        for vertex in [i, j] {
            if vertex == 0 || vertex > n {
                return Err(EngineError::VertexOutOfRange { vertex, n });
            }
        }
        Ok(self.resistance.block(i - 1, j - 1))
    }

    /// τ stacked as an ns × s matrix.
    pub fn tau(&self) -> &DenseMatrix {
        &self.tau
    }

    /// τ′Rτ by direct multiplication.
    pub fn tau_r_tau_direct(&self) -> &DenseMatrix {
        &self.tau_r_tau
    }

    /// κ(L + (1/n)J⊗I_s) in the 2-norm.
    pub fn shift_condition(&self) -> f64 {
        self.shift_condition
    }

    pub fn low_confidence(&self) -> bool {
        self.shift_condition > LOW_CONFIDENCE_CONDITION
    }

    /// τ′Rτ = 2x̄′Lx̄ + (8/n)(Σ X_ii − I_s).
    pub fn tau_r_tau_closed_form(&self) -> DenseMatrix {
        let (n, s) = (self.n(), self.s());
        let quadratic = &(&self.xbar_ones.transpose() * self.laplacian.body()) * &self.xbar_ones;
        let mut diag_sum = DenseMatrix::zeros(s, s);
        for i in 0..n {
            diag_sum = &diag_sum + &self.x.block(i, i);
        }
        let trace_part = (&diag_sum - &DenseMatrix::identity(s)).scale(8.0 / n as f64);
        &quadratic.scale(2.0) + &trace_part
    }

    /// τ′Rτ after confirming it is positive definite: its smallest eigenvalue
    /// must clear the zero band s·ε·λ_max.
    pub fn tau_r_tau(&self) -> Result<DenseMatrix, EngineError> {
        let spectrum = sym_eigen(&self.tau_r_tau)?;
        let band = default_rank_tol(self.s()) * spectrum.spectral_radius();
        if spectrum.min() <= band {
            return Err(EngineError::TauRTauNotPositiveDefinite {
                smallest: spectrum.min(),
                band,
            });
        }
        Ok(self.tau_r_tau.symmetrized())
    }

    /// χ(G): cofactor of block (1, 1) of L.
    pub fn chi(&self) -> Result<LogDet, EngineError> {
        Ok(block_cofactor_log(self.laplacian.body(), 1, 1, self.s())?)
    }

    /// det R from the closed form.
    pub fn det_resistance(&self) -> Result<LogDet, EngineError> {
        let (n, s) = (self.n() as i64, self.s() as i64);
        let chi = self.chi()?;
        if chi.sign == 0.0 || !chi.log_abs.is_finite() {
            return Err(EngineError::ChiVanishes);
        }
        let det_trt = log_det_lu(&self.tau_r_tau()?)?;
        let sign = if ((n - 1) * s) % 2 == 0 { 1.0 } else { -1.0 };
        let power = LogDet {
            sign,
            log_abs: ((n - 3) * s) as f64 * std::f64::consts::LN_2,
        };
        Ok(power.mul(det_trt).div(chi)?)
    }

    /// R⁻¹ from the closed form −½L + τ(τ′Rτ)⁻¹τ′.
    pub fn inverse_resistance(&self) -> Result<DenseMatrix, EngineError> {
        let trt_inv = LuDecomposition::new(&self.tau_r_tau()?)?.inverse()?.symmetrized();
        let correction = &(&self.tau * &trt_inv) * &self.tau.transpose();
        Ok(&self.laplacian.body().scale(-0.5) + &correction)
    }

    /// Inertia of R with the default zero band ns·ε·max|μ|.
    pub fn resistance_inertia(&self) -> Result<Inertia, EngineError> {
        let order = self.n() * self.s();
        Ok(inertia_of(self.resistance.body(), default_rank_tol(order))?)
    }

    /// One row per i = 1..ns−s pairing the descending spectra of R and L.
    pub fn interlacing_report(&self) -> Result<Vec<InterlacingRow>, EngineError> {
        let s = self.s();
        let order = self.n() * s;
        let mu = sym_eigen(self.resistance.body())?.eigenvalues;
        let lambda = sym_eigen(self.laplacian.body())?.eigenvalues;
        Ok((1..=order - s)
            .map(|i| {
                let bound = -2.0 / lambda[i - 1];
                let mut row = InterlacingRow {
                    i,
                    mu_lower: mu[s + i - 1],
                    bound,
                    mu_upper: mu[i - 1],
                    holds: false,
                };
                row.holds = row.violation() <= INTERLACING_SLACK;
                row
            })
            .collect())
    }
}

/// τ_i = 2I_s − Σ_{j∼i} W_ij⁻¹ R_ji, using W_ij⁻¹ = −L_ij.
pub fn compute_tau(graph: &MatrixWeightedGraph, lap: &BlockMatrix, r: &BlockMatrix) -> DenseMatrix {
    let (n, s) = (graph.n(), graph.s());
    let mut tau = DenseMatrix::zeros(n * s, s);
    for (i, neighbors) in graph.adjacency().iter().enumerate() {
        let mut block = DenseMatrix::identity(s).scale(2.0);
        for &(j, _) in neighbors {
            let w_inv = -&lap.block(i, j);
            block = &block - &(&w_inv * &r.block(j, i));
        }
        tau.set_window(i * s, 0, &block);
    }
    tau
}
