//! Symmetric eigendecomposition by cyclic Jacobi rotations.

use super::{symmetric_input, DenseMatrix, LinalgError};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on ‖offdiag(A)‖_F relative to ‖A‖_F.
pub const CONVERGENCE_RATIO: f64 = 1e-14;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V Λ V′.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.apply(|lambda| lambda)
    }

    /// V f(Λ) V′ for a scalar function applied to each eigenvalue.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.order();
        let v = &self.eigenvectors;
        let mut out = DenseMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = fk * v[(i, k)];
                if vik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)];
                }
            }
        }
        out.symmetrized()
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// The input is symmetrized as (A + A′)/2 after checking that its asymmetry
/// is within the repair band. Eigenvalues come back sorted descending; ties
/// keep the order in which Jacobi left them.
pub fn sym_eigen(a: &DenseMatrix) -> Result<SpectralDecomposition, LinalgError> {
    let mut work = symmetric_input(a)?;
    let n = work.rows();
    let mut v = DenseMatrix::identity(n);

    let total = work.frobenius_norm();
    let target = CONVERGENCE_RATIO * total;
    let mut converged = off_diagonal_norm(&work) <= target;
    let mut sweep = 0;
    while !converged && sweep < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = work[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = work[(p, p)];
                let aqq = work[(q, q)];
                // Entry already below the diagonal's resolution: drop it.
                if sweep > 3 && (app.abs() + 100.0 * apq.abs() == app.abs())
                    && (aqq.abs() + 100.0 * apq.abs() == aqq.abs())
                {
                    work[(p, q)] = 0.0;
                    work[(q, p)] = 0.0;
                    continue;
                }
                rotate(&mut work, &mut v, p, q);
            }
        }
        sweep += 1;
        converged = off_diagonal_norm(&work) <= target;
    }
    if !converged {
        return Err(LinalgError::NotConverged {
            sweeps: sweep,
            off_diagonal: off_diagonal_norm(&work),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(j, j)].total_cmp(&work[(i, i)]));
    let eigenvalues = order.iter().map(|&k| work[(k, k)]).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, descending.
pub fn sym_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>, LinalgError> {
    sym_eigen(a).map(|d| d.eigenvalues)
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation annihilating a[p][q]; accumulates into `v`.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let app = a[(p, p)];
    let aqq = a[(q, q)];
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthogonality_defect(v: &DenseMatrix) -> f64 {
        let vtv = &v.transpose() * v;
        vtv.max_abs_diff(&DenseMatrix::identity(v.rows()))
    }

    #[test]
    fn diagonal_input() {
        let d = sym_eigen(&DenseMatrix::diag(&[3.0, 1.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(d.eigenvectors, DenseMatrix::identity(2));
    }

    #[test]
    fn two_by_two_examples() {
        // λ² − 4λ + 3 = (λ − 3)(λ − 1)
        let d = sym_eigen(&DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        assert!((d.eigenvalues[0] - 3.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
        // λ² − 2λ = λ(λ − 2)
        let d = sym_eigen(&DenseMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap()).unwrap();
        assert!((d.eigenvalues[0] - 2.0).abs() < 1e-15);
        assert!(d.eigenvalues[1].abs() < 1e-15);
        assert!(orthogonality_defect(&d.eigenvectors) < 1e-15);
    }

    #[test]
    fn rejects_non_square_and_asymmetric() {
        let rect = DenseMatrix::zeros(2, 3);
        assert!(matches!(sym_eigen(&rect), Err(LinalgError::Dimension(_))));
        let skew = DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eigen(&skew), Err(LinalgError::Asymmetric { .. })));
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let d = sym_eigen(&DenseMatrix::zeros(3, 3)).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn invariants_on_structured_matrix() {
        let n = 12;
        let a = DenseMatrix::from_fn(n, n, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { 2.0 } else { 0.0 });
        let d = sym_eigen(&a).unwrap();
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(orthogonality_defect(&d.eigenvectors) <= 64.0 * f64::EPSILON * n as f64);
        assert!(d.reconstruct().max_abs_diff(&a) <= 1e-12 * (1.0 + a.max_abs()));
    }
}
