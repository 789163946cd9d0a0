use serde::Serialize;

use super::{default_rank_tol, log_det_lu, sym_eigen, DenseMatrix, LinalgError, LogDet};

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn order(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

/// Ordered, distinct, 1-based indices into a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self, LinalgError> {
        if indices.first() == Some(&0) {
            return Err(LinalgError::IndexOutOfRange("index sets are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LinalgError::IndexOutOfRange(format!(
                "indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    /// From zero-based positions (sorted and deduplicated).
    pub fn from_zero_based(mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        Self(positions.into_iter().map(|p| p + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn check_within(&self, order: usize) -> Result<(), LinalgError> {
        match self.0.last() {
            Some(&last) if last > order => Err(LinalgError::IndexOutOfRange(format!(
                "index {last} exceeds order {order}"
            ))),
            _ => Ok(()),
        }
    }

    /// A[S, K].
    pub fn submatrix(a: &DenseMatrix, rows: &IndexSet, cols: &IndexSet) -> Result<DenseMatrix, LinalgError> {
        rows.check_within(a.rows())?;
        cols.check_within(a.cols())?;
        if rows.is_empty() || cols.is_empty() {
            return Err(LinalgError::Dimension("empty index set".into()));
        }
        Ok(a.select(&rows.zero_based(), &cols.zero_based()))
    }
}

/// The contiguous indices {(i−1)s+1, …, is} of block `i` (1-based).
pub fn block_index_set(block: usize, s: usize) -> IndexSet {
    assert!(block >= 1 && s >= 1);
    IndexSet(((block - 1) * s + 1..=block * s).collect())
}

/// Moore–Penrose inverse of a symmetric positive semidefinite matrix via its
/// spectral decomposition. `rank_tol` is relative to λ_max and defaults to
/// order · ε; eigenvalues inside the band are treated as zero.
pub fn pseudo_inverse(a: &DenseMatrix, rank_tol: Option<f64>) -> Result<DenseMatrix, LinalgError> {
    let decomposition = sym_eigen(a)?;
    let band = rank_tol.unwrap_or_else(|| default_rank_tol(a.rows())) * decomposition.spectral_radius();
    if decomposition.min() < -band {
        return Err(LinalgError::NotPsd {
            eigenvalue: decomposition.min(),
        });
    }
    Ok(decomposition.apply(|lambda| if lambda > band { 1.0 / lambda } else { 0.0 }))
}

/// W^{-1/2}: inverse of the positive definite square root of W.
pub fn pd_inverse_sqrt(w: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    let decomposition = sym_eigen(w)?;
    let band = default_rank_tol(w.rows()) * decomposition.spectral_radius();
    let smallest = decomposition.min();
    if smallest <= band {
        return Err(LinalgError::NotPd { smallest });
    }
    Ok(decomposition.apply(|lambda| 1.0 / lambda.sqrt()))
}

/// Kronecker product: block (i, j) of the result is a_ij · B.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (br, bc) = b.shape();
    DenseMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Cofactor of block (i, j) (1-based) of a matrix partitioned into s×s blocks.
///
/// Sign is (−1)^(ΣS + ΣK) over the absolute 1-based row indices S of block
/// row i and column indices K of block column j; the determinant is of A with
/// those rows and columns removed. Removing everything leaves det = 1.
pub fn block_cofactor(a: &DenseMatrix, i: usize, j: usize, s: usize) -> Result<f64, LinalgError> {
    Ok(block_cofactor_log(a, i, j, s)?.value())
}

pub fn block_cofactor_log(a: &DenseMatrix, i: usize, j: usize, s: usize) -> Result<LogDet, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(format!(
            "cofactor needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if s == 0 || a.rows() % s != 0 {
        return Err(LinalgError::Dimension(format!(
            "order {} is not a multiple of block size {s}",
            a.rows()
        )));
    }
    let blocks = a.rows() / s;
    for (name, b) in [("row", i), ("column", j)] {
        if b == 0 || b > blocks {
            return Err(LinalgError::IndexOutOfRange(format!(
                "block {name} {b} outside 1..={blocks}"
            )));
        }
    }
    let rows = block_index_set(i, s);
    let cols = block_index_set(j, s);
    let sign = if (rows.sum() + cols.sum()) % 2 == 0 { 1.0 } else { -1.0 };
    let minor = match a.delete(&rows.zero_based(), &cols.zero_based()) {
        Some(rest) => log_det_lu(&rest)?,
        None => LogDet::ONE,
    };
    Ok(if sign < 0.0 { minor.negate() } else { minor })
}

/// Inertia with a relative zero band: eigenvalues with |λ| ≤ zero_tol · max|λ| count as zero.
pub fn inertia_of(a: &DenseMatrix, zero_tol: f64) -> Result<Inertia, LinalgError> {
    let decomposition = sym_eigen(a)?;
    let band = zero_tol * decomposition.spectral_radius();
    let mut inertia = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for &lambda in &decomposition.eigenvalues {
        if lambda > band {
            inertia.positive += 1;
        } else if lambda < -band {
            inertia.negative += 1;
        } else {
            inertia.zero += 1;
        }
    }
    Ok(inertia)
}
