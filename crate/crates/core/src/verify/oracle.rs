//! Scalar (s = 1) reference computations, built straight from the edge list
//! so they share no code path with the resistance engine.

use std::collections::VecDeque;

use crate::graph::MatrixWeightedGraph;
use crate::linalg::{pseudo_inverse, DenseMatrix};

use super::VerifyError;

/// r(i, j) = h_ii + h_jj − h_ij − h_ji with H the spectral pseudoinverse of
/// the scalar Laplacian (off-diagonal −1/w per edge).
pub fn scalar_resistance_oracle(g: &MatrixWeightedGraph) -> Result<DenseMatrix, VerifyError> {
    if g.s() != 1 {
        return Err(VerifyError::NotScalar(g.s()));
    }
    let n = g.n();
    let mut lap = DenseMatrix::zeros(n, n);
    for e in g.edges() {
        let conductance = 1.0 / e.weight[(0, 0)];
        lap[(e.u, e.v)] -= conductance;
        lap[(e.v, e.u)] -= conductance;
        lap[(e.u, e.u)] += conductance;
        lap[(e.v, e.v)] += conductance;
    }
    let h = pseudo_inverse(&lap, None)?;
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            h[(i, i)] + h[(j, j)] - h[(i, j)] - h[(j, i)]
        }
    }))
}

/// Weighted path-distance matrix of a scalar tree.
pub fn tree_distance_oracle(g: &MatrixWeightedGraph) -> Result<DenseMatrix, VerifyError> {
    if g.s() != 1 {
        return Err(VerifyError::NotScalar(g.s()));
    }
    if !g.is_tree() {
        return Err(VerifyError::NotTree);
    }
    let n = g.n();
    let adj = g.adjacency();
    let mut dist = DenseMatrix::zeros(n, n);
    for source in 0..n {
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &(y, k) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    dist[(source, y)] = dist[(source, x)] + g.edges()[k].weight[(0, 0)];
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(dist)
}

/// Determinant of the distance matrix of any unweighted tree on n vertices:
/// (−1)^{n−1}(n−1)2^{n−2}.
pub fn tree_determinant(n: usize) -> f64 {
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign * (n - 1) as f64 * 2f64.powi(n as i32 - 2)
}
