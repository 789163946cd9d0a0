use blockres::linalg::DenseMatrix;
use blockres::verify::{run_check_named, standard_corpus, CorpusSpec, VerifyError};
use blockres::{
    random_graph, run_check, run_corpus, run_suite, CheckId, Edge, GraphModel, MatrixWeightedGraph,
    ResistanceWorkspace, Selection,
};

fn unit(n: usize, pairs: &[(usize, usize)]) -> MatrixWeightedGraph {
    MatrixWeightedGraph::new(
        n,
        1,
        pairs
            .iter()
            .map(|&(u, v)| Edge {
                u,
                v,
                weight: DenseMatrix::identity(1),
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn full_suite_on_single_edge() {
    let report = run_suite(&unit(2, &[(0, 1)]), &Selection::All).unwrap();
    assert!(report.passed, "{}", report.to_json());
    assert_eq!(report.checks.len(), CheckId::ALL.len());
    assert_eq!(report.applicable(), CheckId::ALL.len());
    assert!(!report.check(CheckId::TreeDet).unwrap().skipped);
}

#[test]
fn single_check_selection() {
    let k3 = unit(3, &[(0, 1), (0, 2), (1, 2)]);
    let report = run_suite(&k3, &Selection::Only(vec![CheckId::DetFormula])).unwrap();
    assert_eq!(report.checks.len(), 1);
    let det = &report.checks[0];
    assert!(det.passed && det.residual <= 1e-8);
}

#[test]
fn tree_det_skips_on_cycle() {
    let result = run_check(&unit(3, &[(0, 1), (0, 2), (1, 2)]), CheckId::TreeDet).unwrap();
    assert!(result.skipped && result.passed);
}

#[test]
fn unknown_check_is_rejected() {
    let err = run_check_named(&unit(2, &[(0, 1)]), "NOPE").unwrap_err();
    assert_eq!(err, VerifyError::UnknownCheck("NOPE".into()));
}

#[test]
fn seeded_block_trees_pass() {
    let g = random_graph(5, 2, GraphModel::Tree, 11).unwrap();
    assert!(run_suite(&g, &Selection::All).unwrap().passed);
    for seed in 0..10 {
        let g = random_graph(6, 2, GraphModel::Tree, seed).unwrap();
        let qrq = run_check(&g, CheckId::Qrq).unwrap();
        assert!(qrq.residual <= 1e-8, "seed {seed}: {qrq:?}");
    }
}

#[test]
fn interlacing_rows_on_block_tree() {
    let g = random_graph(6, 2, GraphModel::Tree, 3).unwrap();
    let rows = ResistanceWorkspace::new(&g).unwrap().interlacing_report().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.holds));
}

#[test]
fn corpus_runs() {
    assert!(run_corpus(&[]).is_empty());

    let specs = [
        CorpusSpec {
            model: GraphModel::Cycle,
            n: 5,
            s: 2,
            seed: 4,
        },
        CorpusSpec {
            model: GraphModel::Gnp { p: 0.0 },
            n: 4,
            s: 1,
            seed: 1,
        },
    ];
    let entries = run_corpus(&specs);
    assert!(entries[0].passed());
    assert_eq!(entries[0].report.as_ref().unwrap().graph.seed, Some(4));
    assert!(!entries[1].passed());
    assert!(entries[1].error.as_ref().unwrap().contains("attempts"));
}

#[test]
fn reports_are_deterministic() {
    let g = random_graph(5, 3, GraphModel::Complete, 21).unwrap();
    let a = run_suite(&g, &Selection::All).unwrap().to_json();
    let b = run_suite(&g, &Selection::All).unwrap().to_json();
    assert_eq!(a, b);
    assert!(!a.contains("wall"));
}

#[test]
fn standard_corpus_passes() {
    let corpus = standard_corpus().unwrap();
    assert!(corpus.len() >= 40);
    for entry in &corpus {
        let report = run_suite(&entry.graph, &Selection::All).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.id.as_str()).collect();
        assert!(failed.is_empty(), "{:?}: {failed:?}", entry.descriptor);
    }
}

#[test]
fn corpus_spec_json_shape() {
    let specs: Vec<CorpusSpec> =
        serde_json::from_str(r#"[{"model":"tree","n":4,"s":2,"seed":9},{"model":"gnp","p":0.5,"n":5,"s":1,"seed":2}]"#)
            .unwrap();
    assert_eq!(specs[0].model, GraphModel::Tree);
    assert_eq!(specs[1].model, GraphModel::Gnp { p: 0.5 });
}
