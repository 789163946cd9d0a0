//! LU factorization with partial pivoting: determinants, solves, inverses.

use serde::Serialize;

use super::{DenseMatrix, LinalgError};

/// Determinant carried as sign and log-magnitude so that large products do
/// not overflow. `sign` is 0 for a singular matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogDet {
    pub sign: f64,
    pub log_abs: f64,
}

impl LogDet {
    pub const ONE: LogDet = LogDet {
        sign: 1.0,
        log_abs: 0.0,
    };

    pub const ZERO: LogDet = LogDet {
        sign: 0.0,
        log_abs: f64::NEG_INFINITY,
    };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogDet {
                sign: x.signum(),
                log_abs: x.abs().ln(),
            }
        }
    }

    /// Plain value; may overflow to ±∞ or underflow to 0.
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.log_abs.exp()
        }
    }

    pub fn mul(self, other: LogDet) -> LogDet {
        if self.sign == 0.0 || other.sign == 0.0 {
            return Self::ZERO;
        }
        LogDet {
            sign: self.sign * other.sign,
            log_abs: self.log_abs + other.log_abs,
        }
    }

    pub fn div(self, other: LogDet) -> Result<LogDet, LinalgError> {
        if other.sign == 0.0 {
            return Err(LinalgError::Singular("division by a zero determinant".into()));
        }
        if self.sign == 0.0 {
            return Ok(Self::ZERO);
        }
        Ok(LogDet {
            sign: self.sign * other.sign,
            log_abs: self.log_abs - other.log_abs,
        })
    }

    pub fn negate(self) -> LogDet {
        LogDet {
            sign: -self.sign,
            log_abs: self.log_abs,
        }
    }

    /// |a − b| / |b| evaluated in log space.
    pub fn relative_error(self, reference: LogDet) -> f64 {
        match (self.sign == 0.0, reference.sign == 0.0) {
            (true, true) => 0.0,
            (_, true) => f64::INFINITY,
            (true, false) => 1.0,
            _ => (self.sign * (self.log_abs - reference.log_abs).exp() - reference.sign).abs(),
        }
    }
}

/// PA = LU with unit-diagonal L; both factors packed in one matrix.
#[derive(Debug, Clone)]
pub struct LuDecomposition {
    packed: DenseMatrix,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl LuDecomposition {
    pub fn new(a: &DenseMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_abs = lu[(k, k)].abs();
            for i in (k + 1)..n {
                if lu[(i, k)].abs() > pivot_abs {
                    pivot_abs = lu[(i, k)].abs();
                    pivot_row = i;
                }
            }
            if pivot_abs == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == 0.0 {
                    continue;
                }
                for j in (k + 1)..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
        Ok(Self {
            packed: lu,
            perm,
            swaps,
            singular,
        })
    }

    pub fn order(&self) -> usize {
        self.perm.len()
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Pivots (diagonal of U).
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.order()).map(|k| self.packed[(k, k)]).collect()
    }

    pub fn log_det(&self) -> LogDet {
        if self.singular {
            return LogDet::ZERO;
        }
        let mut det = if self.swaps % 2 == 0 { LogDet::ONE } else { LogDet::ONE.negate() };
        for p in self.pivots() {
            det = det.mul(LogDet::from_value(p));
        }
        det
    }

    /// Determinant as a plain number: the pivot product when it is finite,
    /// the exponentiated log form otherwise.
    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let sign = if self.swaps % 2 == 0 { 1.0 } else { -1.0 };
        let product = self.pivots().iter().product::<f64>() * sign;
        if product.is_finite() && product != 0.0 {
            product
        } else {
            self.log_det().value()
        }
    }

    /// Solves A X = B.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        let n = self.order();
        if b.rows() != n {
            return Err(LinalgError::Dimension(format!(
                "right-hand side has {} rows, system has order {n}",
                b.rows()
            )));
        }
        if self.singular {
            return Err(LinalgError::Singular("exactly zero pivot in LU".into()));
        }
        let m = b.cols();
        let mut x = DenseMatrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for col in 0..m {
            for i in 0..n {
                let mut acc = x[(i, col)];
                for k in 0..i {
                    acc -= self.packed[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[(i, col)];
                for k in (i + 1)..n {
                    acc -= self.packed[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc / self.packed[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<DenseMatrix, LinalgError> {
        self.solve(&DenseMatrix::identity(self.order()))
    }
}

/// Determinant by LU with partial pivoting. Triangular inputs take the
/// diagonal product directly.
pub fn det_lu(a: &DenseMatrix) -> Result<f64, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(format!(
            "determinant needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.is_upper_triangular() || a.is_lower_triangular() {
        let product: f64 = (0..a.rows()).map(|i| a[(i, i)]).product();
        if product.is_finite() {
            return Ok(product);
        }
    }
    Ok(LuDecomposition::new(a)?.det())
}

/// Determinant in (sign, log|det|) form.
pub fn log_det_lu(a: &DenseMatrix) -> Result<LogDet, LinalgError> {
    Ok(LuDecomposition::new(a)?.log_det())
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    LuDecomposition::new(a)?.inverse()
}

/// Determinant through the Schur complement of the leading `split × split` block:
/// det A = det(A₁₁) · det(A₂₂ − A₂₁ A₁₁⁻¹ A₁₂).
pub fn schur_det(a: &DenseMatrix, split: usize) -> Result<f64, LinalgError> {
    Ok(schur_log_det(a, split)?.value())
}

pub fn schur_log_det(a: &DenseMatrix, split: usize) -> Result<LogDet, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Dimension(format!(
            "determinant needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if split == 0 || split > n {
        return Err(LinalgError::Dimension(format!(
            "split {split} outside 1..={n}"
        )));
    }
    let a11 = a.window(0, 0, split, split);
    let lu11 = LuDecomposition::new(&a11)?;
    let scale = a11.max_abs().max(f64::MIN_POSITIVE);
    let tiny = split as f64 * f64::EPSILON * scale;
    if lu11.is_singular() || lu11.pivots().iter().any(|p| p.abs() <= tiny) {
        return Err(LinalgError::Singular(format!(
            "leading {split}x{split} block is numerically singular"
        )));
    }
    let det11 = lu11.log_det();
    if split == n {
        return Ok(det11);
    }
    let rest = n - split;
    let a12 = a.window(0, split, split, rest);
    let a21 = a.window(split, 0, rest, split);
    let a22 = a.window(split, split, rest, rest);
    let complement = &a22 - &(&a21 * &lu11.solve(&a12)?);
    Ok(det11.mul(log_det_lu(&complement)?))
}
