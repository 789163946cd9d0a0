use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const P2: &str = r#"{"n":2,"s":1,"edges":[{"u":1,"v":2,"w":[[1]]}]}"#;
const P3: &str = r#"{"n":3,"s":1,"edges":[{"u":1,"v":2,"w":[[1]]},{"u":2,"v":3,"w":[[1]]}]}"#;
const K3: &str = r#"{"n":3,"s":1,"edges":[{"u":1,"v":2,"w":[[1]]},{"u":1,"v":3,"w":[[1]]},{"u":2,"v":3,"w":[[1]]}]}"#;

fn blockres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn arg(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn numbers(text: &str) -> Vec<f64> {
    text.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

#[test]
fn resistance_of_single_edge() {
    let dir = TempDir::new().unwrap();
    let p2 = write(&dir, "p2.json", P2);
    let out = blockres(&["compute", arg(&p2), "--what", "resistance"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(numbers(&stdout(&out)), vec![0.0, 1.0, 1.0, 0.0]);
    assert_eq!(stdout(&out), "0.00000000000e0 1.00000000000e0\n\n1.00000000000e0 0.00000000000e0\n");
}

#[test]
fn block_boundaries_in_text_output() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "g.json", "");
    let gen = blockres(&["gen", "--n", "3", "--s", "2", "--model", "tree", "--seed", "5", "-o", arg(&path)]);
    assert_eq!(gen.status.code(), Some(0));
    let text = stdout(&blockres(&["compute", arg(&path), "--what", "laplacian"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[2].is_empty() && lines[5].is_empty());
    assert!(lines[0].split(' ').all(|cell| cell.contains('e')));
    let csv = stdout(&blockres(&["compute", arg(&path), "--what", "laplacian", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 6);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 6);
}

#[test]
fn determinant_of_path() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.json", P3);
    let out = blockres(&["compute", arg(&p3), "--what", "det"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((numbers(&stdout(&out))[0] - 4.0).abs() < 1e-12);
    let json: serde_json::Value =
        serde_json::from_slice(&blockres(&["compute", arg(&p3), "--what", "det", "--format", "json"]).stdout).unwrap();
    assert!((json["value"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn inertia_of_triangle() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.json", K3);
    let out = blockres(&["compute", arg(&k3), "--what", "inertia", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json, serde_json::json!({"positive": 1, "negative": 2, "zero": 0}));
}

#[test]
fn pair_restricts_resistance() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.json", P3);
    let out = blockres(&["compute", arg(&p3), "--what", "resistance", "--pair", "1", "3"]);
    assert_eq!(numbers(&stdout(&out)), vec![2.0]);
    let out = blockres(&["compute", arg(&p3), "--what", "resistance", "--pair", "1", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let out = blockres(&["compute", arg(&p3), "--what", "tau", "--pair", "1", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compute_error_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"n":3,"s":1,"edges":[{"u":1,"v":2,"w":[[1]]}]}"#);
    let out = blockres(&["compute", arg(&bad), "--what", "resistance"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let missing = dir.path().join("missing.json");
    assert_eq!(blockres(&["compute", arg(&missing), "--what", "det"]).status.code(), Some(1));
    let k3 = write(&dir, "k3.json", K3);
    assert_eq!(blockres(&["compute", arg(&k3), "--what", "det", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(blockres(&["compute", arg(&k3), "--what", "nothing"]).status.code(), Some(1));
}

#[test]
fn interlace_csv_has_header() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.json", K3);
    let csv = stdout(&blockres(&["compute", arg(&k3), "--what", "interlace", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("i,mu_lower,bound,mu_upper,holds"));
    assert_eq!(lines.filter(|l| l.ends_with("true")).count(), 2);
}

#[test]
fn verify_all_on_single_edge() {
    let dir = TempDir::new().unwrap();
    let p2 = write(&dir, "p2.json", P2);
    let out = blockres(&["verify", arg(&p2), "--all"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 21);
}

#[test]
fn verify_skips_inapplicable_check() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.json", K3);
    let out = blockres(&["verify", arg(&k3), "--check", "TREE_DET"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks"][0]["skipped"], true);
    assert_eq!(blockres(&["verify", arg(&k3), "--check", "BOGUS"]).status.code(), Some(1));
}

#[test]
fn verify_qrq_on_generated_tree() {
    let dir = TempDir::new().unwrap();
    let tree = dir.path().join("tree.json");
    blockres(&["gen", "--n", "6", "--s", "2", "--model", "tree", "--seed", "42", "-o", arg(&tree)]);
    let out = blockres(&["verify", arg(&tree), "--check", "QRQ", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"][0]["residual"].as_f64().unwrap() <= 1e-8);
    let text = stdout(&blockres(&["verify", arg(&tree), "--check", "QRQ", "--format", "text"]));
    assert!(text.contains("QRQ") && text.contains("PASS"));
}

#[test]
fn verify_corpus_file() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "corpus.json",
        r#"[{"model":"tree","n":4,"s":2,"seed":3},{"model":"gnp","p":0.6,"n":5,"s":1,"seed":8}]"#,
    );
    let out = blockres(&["verify", "--corpus", arg(&spec)]);
    assert_eq!(out.status.code(), Some(0));
    let entries: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(entries.as_array().unwrap().len(), 2);

    let failing = write(&dir, "bad.json", r#"[{"model":"gnp","p":0.0,"n":4,"s":1,"seed":1}]"#);
    assert_eq!(blockres(&["verify", "--corpus", arg(&failing)]).status.code(), Some(3));
    let malformed = write(&dir, "worse.json", "[{}]");
    assert_eq!(blockres(&["verify", "--corpus", arg(&malformed)]).status.code(), Some(1));
}

#[test]
fn gen_cycle_is_connected_with_four_edges() {
    let out = blockres(&["gen", "--n", "4", "--s", "1", "--model", "cycle", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let graph: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(graph["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = blockres(&["gen", "--n", "3", "--s", "2", "--model", "tree", "--seed", "5", "-o", arg(path)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    for what in ["laplacian", "pinv", "resistance", "tau", "det", "inverse", "inertia", "chi", "interlace"] {
        assert_eq!(blockres(&["compute", arg(&a), "--what", what]).status.code(), Some(0), "{what}");
    }
}

#[test]
fn gen_error_codes() {
    let out = blockres(&["gen", "--n", "4", "--s", "1", "--model", "gnp", "--p", "0.0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = blockres(&["gen", "--n", "1", "--s", "1", "--model", "tree", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = blockres(&["gen", "--n", "4", "--s", "1", "--model", "gnp", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = blockres(&["gen", "--n", "4", "--s", "1", "--model", "tree"]);
    assert_eq!(out.status.code(), Some(1));
}
