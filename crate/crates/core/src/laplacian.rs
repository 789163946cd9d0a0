//! Block Laplacian, weighted incidence matrix and the common block cofactor χ(G).

use crate::graph::{EdgeOrientation, MatrixWeightedGraph};
use crate::linalg::{block_cofactor_log, inverse, pd_inverse_sqrt, DenseMatrix, LinalgError, LogDet};

/// A matrix partitioned into s×s blocks, `row_blocks × col_blocks` of them.
/// Block indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    row_blocks: usize,
    col_blocks: usize,
    s: usize,
    body: DenseMatrix,
}

impl BlockMatrix {
    pub fn new(body: DenseMatrix, s: usize) -> Result<Self, LinalgError> {
        if s == 0 || body.rows() % s != 0 || body.cols() % s != 0 {
            return Err(LinalgError::Dimension(format!(
                "{}x{} matrix cannot be split into {s}x{s} blocks",
                body.rows(),
                body.cols()
            )));
        }
        Ok(Self {
            row_blocks: body.rows() / s,
            col_blocks: body.cols() / s,
            s,
            body,
        })
    }

    pub fn zeros(row_blocks: usize, col_blocks: usize, s: usize) -> Self {
        Self {
            row_blocks,
            col_blocks,
            s,
            body: DenseMatrix::zeros(row_blocks * s, col_blocks * s),
        }
    }

    pub fn block_size(&self) -> usize {
        self.s
    }

    pub fn row_blocks(&self) -> usize {
        self.row_blocks
    }

    pub fn col_blocks(&self) -> usize {
        self.col_blocks
    }

    pub fn body(&self) -> &DenseMatrix {
        &self.body
    }

    pub fn into_body(self) -> DenseMatrix {
        self.body
    }

    pub fn block(&self, i: usize, j: usize) -> DenseMatrix {
        assert!(i < self.row_blocks && j < self.col_blocks, "block ({i}, {j}) out of range");
        self.body.window(i * self.s, j * self.s, self.s, self.s)
    }

    pub fn set_block(&mut self, i: usize, j: usize, value: &DenseMatrix) {
        assert!(i < self.row_blocks && j < self.col_blocks, "block ({i}, {j}) out of range");
        assert_eq!(value.shape(), (self.s, self.s));
        self.body.set_window(i * self.s, j * self.s, value);
    }

    /// Block-diagonal matrix holding only the diagonal blocks of `self`.
    pub fn block_diagonal(&self) -> Self {
        let mut out = Self::zeros(self.row_blocks, self.col_blocks, self.s);
        for i in 0..self.row_blocks.min(self.col_blocks) {
            out.set_block(i, i, &self.block(i, i));
        }
        out
    }
}

/// Block Laplacian L: off-diagonal block (u, v) is −W⁻¹ for each edge and
/// the diagonal blocks are the negated sums of their row's off-diagonal
/// blocks, so every block row sums to zero exactly.
pub fn build_laplacian(g: &MatrixWeightedGraph) -> Result<BlockMatrix, LinalgError> {
    let (n, s) = (g.n(), g.s());
    let mut lap = BlockMatrix::zeros(n, n, s);
    let mut diagonal = vec![DenseMatrix::zeros(s, s); n];
    for e in g.edges() {
        let w_inv = inverse(&e.weight)?.symmetrized();
        let off = -&w_inv;
        lap.set_block(e.u, e.v, &off);
        lap.set_block(e.v, e.u, &off);
    }
    for (i, d) in diagonal.iter_mut().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            *d = &*d - &lap.block(i, j);
        }
    }
    for (i, d) in diagonal.iter().enumerate() {
        lap.set_block(i, i, d);
    }
    Ok(lap)
}

/// Incidence matrix Q (ns × ms) in the canonical orientation, with L = QQ′.
pub fn build_incidence(g: &MatrixWeightedGraph) -> Result<BlockMatrix, LinalgError> {
    build_incidence_oriented(g, &g.orientation())
}

/// Incidence matrix for an arbitrary orientation: block (i, k) is +W_k^{-1/2}
/// when vertex i is the origin of edge k and −W_k^{-1/2} when it is the terminus.
pub fn build_incidence_oriented(
    g: &MatrixWeightedGraph,
    orientation: &EdgeOrientation,
) -> Result<BlockMatrix, LinalgError> {
    if orientation.len() != g.m() {
        return Err(LinalgError::Dimension(format!(
            "orientation covers {} edges, graph has {}",
            orientation.len(),
            g.m()
        )));
    }
    let mut q = BlockMatrix::zeros(g.n(), g.m(), g.s());
    for (k, e) in g.edges().iter().enumerate() {
        let root = pd_inverse_sqrt(&e.weight)?;
        let (origin, terminus) = orientation.endpoints(e, k);
        q.set_block(origin, k, &root);
        q.set_block(terminus, k, &-&root);
    }
    Ok(q)
}

/// χ(G) in (sign, log|value|) form: the cofactor of block (1, 1) of L.
pub fn chi_log(g: &MatrixWeightedGraph) -> Result<LogDet, LinalgError> {
    let lap = build_laplacian(g)?;
    block_cofactor_log(lap.body(), 1, 1, g.s())
}

/// χ(G) as a plain number.
pub fn chi(g: &MatrixWeightedGraph) -> Result<f64, LinalgError> {
    Ok(chi_log(g)?.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn graph(n: usize, s: usize, edges: &[(usize, usize, DenseMatrix)]) -> MatrixWeightedGraph {
        MatrixWeightedGraph::new(
            n,
            s,
            edges
                .iter()
                .map(|(u, v, w)| Edge {
                    u: *u,
                    v: *v,
                    weight: w.clone(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn scalar(x: f64) -> DenseMatrix {
        DenseMatrix::filled(1, 1, x)
    }

    fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
        m.to_rows()
    }

    #[test]
    fn laplacian_examples() {
        let p2 = graph(2, 1, &[(0, 1, scalar(1.0))]);
        assert_eq!(rows(build_laplacian(&p2).unwrap().body()), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);

        let edge = graph(2, 2, &[(0, 1, DenseMatrix::identity(2).scale(2.0))]);
        let lap = build_laplacian(&edge).unwrap();
        assert_eq!(lap.block(0, 0), DenseMatrix::identity(2).scale(0.5));
        assert_eq!(lap.block(0, 1), DenseMatrix::identity(2).scale(-0.5));

        let k3 = graph(3, 1, &[(0, 1, scalar(1.0)), (0, 2, scalar(1.0)), (1, 2, scalar(1.0))]);
        let lap = build_laplacian(&k3).unwrap();
        assert_eq!(
            rows(lap.body()),
            vec![vec![2.0, -1.0, -1.0], vec![-1.0, 2.0, -1.0], vec![-1.0, -1.0, 2.0]]
        );
    }

    #[test]
    fn incidence_examples() {
        let p2 = graph(2, 1, &[(0, 1, scalar(1.0))]);
        assert_eq!(rows(build_incidence(&p2).unwrap().body()), vec![vec![1.0], vec![-1.0]]);

        let p2w = graph(2, 1, &[(0, 1, scalar(4.0))]);
        let q = build_incidence(&p2w).unwrap();
        assert_eq!(rows(q.body()), vec![vec![0.5], vec![-0.5]]);
        let qqt = q.body() * &q.body().transpose();
        assert_eq!(&qqt, build_laplacian(&p2w).unwrap().body());

        let p3 = graph(3, 1, &[(0, 1, scalar(1.0)), (1, 2, scalar(1.0))]);
        assert_eq!(
            rows(build_incidence(&p3).unwrap().body()),
            vec![vec![1.0, 0.0], vec![-1.0, 1.0], vec![0.0, -1.0]]
        );
    }

    #[test]
    fn orientation_length_is_checked() {
        let p2 = graph(2, 1, &[(0, 1, scalar(1.0))]);
        assert!(build_incidence_oriented(&p2, &EdgeOrientation::canonical(3)).is_err());
    }

    #[test]
    fn chi_examples() {
        let p2 = graph(2, 1, &[(0, 1, scalar(1.0))]);
        assert_eq!(chi(&p2).unwrap(), 1.0);
        let k3 = graph(3, 1, &[(0, 1, scalar(1.0)), (0, 2, scalar(1.0)), (1, 2, scalar(1.0))]);
        assert!((chi(&k3).unwrap() - 3.0).abs() < 1e-14);
        let p3 = graph(3, 1, &[(0, 1, scalar(1.0)), (1, 2, scalar(1.0))]);
        assert!((chi(&p3).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn block_accessors() {
        let b = BlockMatrix::new(DenseMatrix::from_fn(4, 6, |i, j| (10 * i + j) as f64), 2).unwrap();
        assert_eq!((b.row_blocks(), b.col_blocks()), (2, 3));
        assert_eq!(rows(&b.block(1, 2)), vec![vec![24.0, 25.0], vec![34.0, 35.0]]);
        assert!(BlockMatrix::new(DenseMatrix::zeros(3, 3), 2).is_err());
    }
}
