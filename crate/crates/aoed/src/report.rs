//! Result files written by the command-line front end.

use std::path::Path;

use aoed_core::{Certificate, ComparisonReport, IndexClass, RelaxedSolution, Violation};
use serde_json::{json, Value};

use crate::error::Result;
use crate::files::{fmt_f64, write_atomic};

pub const DESIGNS_FILE: &str = "designs.csv";
pub const OBJECTIVES_FILE: &str = "objectives.csv";
pub const COMPARISON_CSV: &str = "comparison.csv";
pub const COMPARISON_JSON: &str = "comparison.json";
pub const CERTIFICATE_FILE: &str = "certificate.json";

/// `m0,w_1,...,w_m` header and one row per budget.
pub fn designs_csv(rows: &[(usize, &[f64])]) -> String {
    let m = rows.first().map_or(0, |(_, w)| w.len());
    let mut out = String::from("m0");
    for k in 1..=m {
        out.push_str(&format!(",w_{k}"));
    }
    out.push('\n');
    for (m0, w) in rows {
        out.push_str(&m0.to_string());
        for &v in *w {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

pub fn objectives_csv(rows: &[(usize, f64)]) -> String {
    let mut out = String::from("m0,J\n");
    for (m0, j) in rows {
        out.push_str(&format!("{m0},{}\n", fmt_f64(*j)));
    }
    out
}

pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::from("m0,J_greedy,J_informed,J_relaxed,rel_improvement\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.m0,
            fmt_f64(row.j_greedy),
            fmt_f64(row.j_informed),
            row.j_relaxed.map(fmt_f64).unwrap_or_default(),
            fmt_f64(row.rel_improvement),
        ));
    }
    out
}

pub fn comparison_json(report: &ComparisonReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "m0": r.m0,
                "J_greedy": r.j_greedy,
                "J_informed": r.j_informed,
                "J_relaxed": r.j_relaxed,
                "rel_improvement": r.rel_improvement,
            })
        })
        .collect();
    let s = &report.summary;
    json!({
        "rows": rows,
        "summary": {
            "mean_improvement": s.mean_improvement,
            "best_improvement": s.best_improvement,
            "fraction_not_worse": s.fraction_not_worse,
            "count": report.rows.len(),
        },
        "timing": {
            "greedy_seconds": s.greedy_seconds,
            "informed_relaxed_seconds": s.informed_relaxed_seconds,
            "informed_total_seconds": s.informed_total_seconds,
        },
    })
}

fn class_name(class: IndexClass) -> &'static str {
    match class {
        IndexClass::Dominant => "dominant",
        IndexClass::Redundant => "redundant",
        IndexClass::Intermediate => "intermediate",
    }
}

fn violation_json(v: &Violation) -> Value {
    match *v {
        Violation::DominantNotOne { index, weight } => {
            json!({"condition": "dominant_not_one", "index": index, "weight": weight})
        }
        Violation::RedundantNotZero { index, weight } => {
            json!({"condition": "redundant_not_zero", "index": index, "weight": weight})
        }
        Violation::BudgetSlack { sum, budget } => {
            json!({"condition": "budget_slack", "sum": sum, "budget": budget})
        }
    }
}

pub fn certificate_json(m0: usize, cert: &Certificate, solution: Option<&RelaxedSolution>) -> Value {
    let mut value = json!({
        "m0": m0,
        "threshold_low": cert.threshold_low,
        "threshold_high": cert.threshold_high,
        "tol_grad": cert.tol_grad,
        "is_optimal": cert.is_optimal,
        "projected_gradient_norm": cert.projected_gradient_norm,
        "gradient": cert.gradient,
        "permutation": cert.permutation,
        "classification": cert.classification.iter().map(|&c| class_name(c)).collect::<Vec<_>>(),
        "violations": cert.violations.iter().map(violation_json).collect::<Vec<_>>(),
    });
    if let Some(sol) = solution {
        value["objective"] = json!(sol.objective_value);
        value["converged"] = json!(sol.converged);
        value["iterations"] = json!(sol.iterations);
    }
    value
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    write_atomic(&dir.join(name), text.as_bytes())
}

pub fn write_json(dir: &Path, name: &str, value: &Value) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("json serializes");
    bytes.push(b'\n');
    write_atomic(&dir.join(name), &bytes)
}
