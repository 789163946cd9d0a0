use blockres::graph::EdgeOrientation;
use blockres::laplacian::build_incidence_oriented;
use blockres::linalg::{
    det_lu, inertia_of, kron, pseudo_inverse, schur_det, sym_eigen, DenseMatrix,
};
use blockres::verify::{cofactor_equality_defect, pinv_submatrix_samples, SUBMATRIX_RANK_TOL};
use blockres::{build_incidence, parse_graph, random_graph, GraphModel, ResistanceWorkspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn square(max_order: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_order).prop_flat_map(|n| {
        prop::collection::vec(-2.0f64..2.0, n * n)
            .prop_map(move |data| DenseMatrix::new(n, n, data).unwrap())
    })
}

fn symmetric(max_order: usize) -> impl Strategy<Value = DenseMatrix> {
    square(max_order).prop_map(|a| a.symmetrized())
}

/// B·B′ with B of order × rank: PSD with rank at most `rank`.
fn psd(max_order: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_order)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, r)| {
            prop::collection::vec(-1.0f64..1.0, n * r)
                .prop_map(move |data| {
                    let b = DenseMatrix::new(n, r, data).unwrap();
                    b.matmul(&b.transpose())
                })
        })
}

fn model() -> impl Strategy<Value = GraphModel> {
    prop_oneof![
        Just(GraphModel::Tree),
        Just(GraphModel::Cycle),
        Just(GraphModel::Complete),
        Just(GraphModel::Gnp { p: 0.7 }),
    ]
}

fn graph_params() -> impl Strategy<Value = (usize, usize, GraphModel, u64)> {
    (3usize..=6, 1usize..=3, model(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstructs(a in symmetric(20)) {
        let d = sym_eigen(&a).unwrap();
        let scale = 1.0 + a.max_abs();
        prop_assert!(d.reconstruct().max_abs_diff(&a) <= 1e-9 * scale);
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn pseudo_inverse_penrose(a in psd(8)) {
        let p = pseudo_inverse(&a, Some(1e-10)).unwrap();
        let scale = 1.0 + a.max_abs() * p.max_abs();
        let apa = a.matmul(&p).matmul(&a);
        let pap = p.matmul(&a).matmul(&p);
        prop_assert!(apa.max_abs_diff(&a) <= 1e-8 * scale * (1.0 + a.max_abs()));
        prop_assert!(pap.max_abs_diff(&p) <= 1e-8 * scale * (1.0 + p.max_abs()));
        let ap = a.matmul(&p);
        prop_assert!(ap.max_abs_diff(&ap.transpose()) <= 1e-8 * scale);
    }

    #[test]
    fn kron_mixed_product(a in square(3), b in square(3)) {
        let c = a.transpose();
        let d = b.transpose();
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        let scale = 1.0 + a.max_abs().powi(2) * b.max_abs().powi(2);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale * 9.0);
    }

    #[test]
    fn schur_matches_lu(a in square(6), shift in 3.0f64..6.0) {
        let n = a.rows();
        let shifted = &a + &DenseMatrix::identity(n).scale(shift * n as f64);
        let split = n / 2;
        let direct = det_lu(&shifted).unwrap();
        if split > 0 && split < n {
            let schur = schur_det(&shifted, split).unwrap();
            prop_assert!((schur - direct).abs() <= 1e-9 * direct.abs());
        }
    }

    #[test]
    fn inertia_flips_under_negation(a in symmetric(10)) {
        let tol = 1e-9;
        let i = inertia_of(&a, tol).unwrap();
        let j = inertia_of(&(-&a), tol).unwrap();
        prop_assert_eq!(i.positive, j.negative);
        prop_assert_eq!(i.negative, j.positive);
        prop_assert_eq!(i.zero, j.zero);
    }

    #[test]
    fn graph_json_round_trip((n, s, m, seed) in graph_params()) {
        let g = random_graph(n, s, m, seed).unwrap();
        let back = parse_graph(g.to_json().as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn incidence_product_ignores_orientation((n, s, m, seed) in graph_params(), flips in any::<u64>()) {
        let g = random_graph(n, s, m, seed).unwrap();
        let q = build_incidence(&g).unwrap();
        let flipped = EdgeOrientation::with_flips((0..g.m()).map(|k| flips >> (k % 64) & 1 == 1).collect());
        let q2 = build_incidence_oriented(&g, &flipped).unwrap();
        let a = q.body().matmul(&q.body().transpose());
        let b = q2.body().matmul(&q2.body().transpose());
        prop_assert!(a.max_abs_diff(&b) <= 1e-12 * (1.0 + a.max_abs()));
    }

    #[test]
    fn resistance_structure((n, s, m, seed) in graph_params()) {
        let g = random_graph(n, s, m, seed).unwrap();
        let ws = ResistanceWorkspace::new(&g).unwrap();
        let r = ws.resistance().body();
        prop_assert_eq!(r.max_abs_diff(&r.transpose()), 0.0);
        for i in 0..n {
            prop_assert_eq!(ws.resistance().block(i, i).max_abs(), 0.0);
        }
        let inertia = ws.resistance_inertia().unwrap();
        prop_assert_eq!((inertia.positive, inertia.negative, inertia.zero), (s, n * s - s, 0));
        prop_assert!(ws.interlacing_report().unwrap().iter().all(|row| row.holds));
    }

    #[test]
    fn principal_submatrices_of_pseudoinverse(a in psd(10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = pinv_submatrix_samples(&a, &mut rng, a.rows(), SUBMATRIX_RANK_TOL).unwrap();
        for sample in samples {
            prop_assert!(sample.pinv_rcond > 1e-10, "{:?}", sample);
        }
    }

    #[test]
    fn cofactors_agree_on_zero_block_sums(b in psd(6), s in 1usize..=2) {
        // D·M·D′ with D = [I; −(1′⊗I)] has every block row and column summing to zero.
        let k = b.rows();
        let m = kron(&b, &DenseMatrix::identity(s));
        let blocks = k + 1;
        let d = DenseMatrix::from_fn(blocks * s, k * s, |r, c| {
            if r < k * s {
                if r == c { 1.0 } else { 0.0 }
            } else if r % s == c % s {
                -1.0
            } else {
                0.0
            }
        });
        let a = d.matmul(&m).matmul(&d.transpose());
        let (defect, _) = cofactor_equality_defect(&a, s).unwrap();
        prop_assert!(defect <= 1e-8, "defect {defect:e}");
    }
}
