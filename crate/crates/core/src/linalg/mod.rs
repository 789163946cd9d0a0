//! Dense real linear algebra: the numeric kernel every other module builds on.

mod eigen;
mod lu;
mod matrix;
mod ops;

pub use eigen::{sym_eigen, sym_eigenvalues, SpectralDecomposition, CONVERGENCE_RATIO, MAX_SWEEPS};
pub use lu::{det_lu, inverse, log_det_lu, schur_det, schur_log_det, LogDet, LuDecomposition};
pub use matrix::DenseMatrix;
pub use ops::{
    block_cofactor, block_cofactor_log, block_index_set, inertia_of, kron, pd_inverse_sqrt,
    pseudo_inverse, IndexSet, Inertia,
};

use thiserror::Error;

/// Inputs declared symmetric may deviate by at most this much, relative to
/// 1 + ‖A‖_max, before being rejected instead of silently repaired.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric (max |a_ij - a_ji| = {defect:e})")]
    Asymmetric { defect: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NotConverged { sweeps: usize, off_diagonal: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {smallest:e})")]
    NotPd { smallest: f64 },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}

/// Default relative rank tolerance: order · machine epsilon. Multiply by
/// λ_max to get the absolute zero band.
pub fn default_rank_tol(order: usize) -> f64 {
    order as f64 * f64::EPSILON
}

/// Checks squareness and the symmetry band, then returns (A + A′)/2.
pub(crate) fn symmetric_input(a: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    let defect = a.asymmetry().ok_or_else(|| {
        LinalgError::Dimension(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        ))
    })?;
    if defect > SYMMETRY_TOLERANCE * (1.0 + a.max_abs()) {
        return Err(LinalgError::Asymmetric { defect });
    }
    Ok(a.symmetrized())
}
