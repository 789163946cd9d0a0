use std::fmt::Write;

use blockres::linalg::DenseMatrix;
use blockres::{Inertia, InterlacingRow, LogDet, SuiteReport};
use serde::Serialize;
use serde_json::json;

/// One matrix row per line in 12-significant-digit scientific notation,
/// with a blank line after every `block` rows.
pub fn matrix_text(a: &DenseMatrix, block: usize) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        if i > 0 && i % block == 0 {
            out.push('\n');
        }
        let cells: Vec<String> = a.row(i).iter().map(|x| format!("{x:.11e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn matrix_csv(a: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        let cells: Vec<String> = a.row(i).iter().map(|x| format!("{x:.11e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_json(a: &DenseMatrix) -> String {
    pretty(a)
}

pub fn determinant_text(d: LogDet) -> String {
    format!("{:.11e}\n", d.value())
}

pub fn determinant_json(d: LogDet) -> String {
    let value = d.value();
    pretty(&json!({
        "value": if value.is_finite() { json!(value) } else { serde_json::Value::Null },
        "sign": d.sign,
        "log_abs": if d.log_abs.is_finite() { json!(d.log_abs) } else { serde_json::Value::Null },
    }))
}

pub fn inertia_text(i: &Inertia) -> String {
    format!("positive {} negative {} zero {}\n", i.positive, i.negative, i.zero)
}

pub fn inertia_json(i: &Inertia) -> String {
    pretty(i)
}

pub fn interlace_text(rows: &[InterlacingRow]) -> String {
    let mut out = String::from("i mu_lower bound mu_upper holds\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{} {:.11e} {:.11e} {:.11e} {}",
            r.i, r.mu_lower, r.bound, r.mu_upper, r.holds
        );
    }
    out
}

pub fn interlace_csv(rows: &[InterlacingRow]) -> String {
    let mut out = String::from("i,mu_lower,bound,mu_upper,holds\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.11e},{:.11e},{:.11e},{}",
            r.i, r.mu_lower, r.bound, r.mu_upper, r.holds
        );
    }
    out
}

pub fn interlace_json(rows: &[InterlacingRow]) -> String {
    pretty(rows)
}

pub fn report_text(report: &SuiteReport) -> String {
    let mut out = format!(
        "graph n={} s={} m={}\n",
        report.graph.n, report.graph.s, report.graph.m
    );
    for c in &report.checks {
        let status = if c.skipped {
            "SKIP"
        } else if c.passed {
            "PASS"
        } else {
            "FAIL"
        };
        let _ = writeln!(
            out,
            "{:<16} {status} residual={:.3e} tolerance={:.3e} {}",
            c.id.as_str(),
            c.residual,
            c.tolerance,
            c.details
        );
    }
    let _ = writeln!(out, "overall {}", if report.passed { "PASS" } else { "FAIL" });
    out
}

pub fn pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}
