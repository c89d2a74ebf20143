//! Run reports: JSON by default, aligned text on request.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::combinatorics::DimensionDistribution;
use crate::heuristics::OrderingRow;

/// Bumped whenever the report layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub label: String,
    pub counts: Vec<u64>,
    pub proportions: Vec<f64>,
}

impl Histogram {
    pub fn new(label: impl Into<String>, d: &DimensionDistribution) -> Self {
        Histogram { label: label.into(), counts: d.counts().to_vec(), proportions: d.proportions_f64() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// The command line, program name excluded.
    pub command: Vec<String>,
    pub seed: Option<u64>,
    /// Command-specific results.
    pub result: Value,
    pub rows: Vec<OrderingRow>,
    pub histograms: Vec<Histogram>,
    pub warnings: Vec<String>,
    pub wall_seconds: f64,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            seed: None,
            result: Value::Object(Default::default()),
            rows: Vec::new(),
            histograms: Vec::new(),
            warnings: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut pairs = Vec::new();
        let mut lists = Vec::new();
        if let Value::Object(map) = &self.result {
            flatten("", map, &mut pairs, &mut lists);
        }
        let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &pairs {
            let _ = writeln!(out, "{k:<w$}  {v}");
        }
        for (k, items) in &lists {
            let _ = writeln!(out, "\n{k}:");
            for i in items {
                let _ = writeln!(out, "  {i}");
            }
        }
        if !self.rows.is_empty() {
            out.push('\n');
            out.push_str(&table(
                &["Order", "1-LCAD", "Prediction", "CAD", "Stacks", "1-LCAD s", "CAD s", "Error"],
                self.rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.ordering.clone(),
                            opt(r.fulldim),
                            r.prediction.map_or("-".into(), |p| p.rounded.to_string()),
                            opt(r.complete),
                            opt(r.stacks),
                            format!("{:.3}", r.one_layered_seconds),
                            r.complete_seconds.map_or("-".into(), |s| format!("{s:.3}")),
                            r.error.clone().unwrap_or_default(),
                        ]
                    })
                    .collect(),
            ));
        }
        for h in &self.histograms {
            let _ = writeln!(out, "\n{}:", h.label);
            out.push_str(&table(
                &["Dimension", "Count", "Proportion"],
                h.counts
                    .iter()
                    .zip(&h.proportions)
                    .enumerate()
                    .map(|(d, (c, p))| vec![d.to_string(), c.to_string(), format!("{p:.4}")])
                    .collect(),
            ));
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(out, "\nwarnings:");
            for w in &self.warnings {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }
}

fn opt(x: Option<u64>) -> String {
    x.map_or("-".into(), |v| v.to_string())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_))) => {
            Some(a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn flatten(
    prefix: &str,
    map: &serde_json::Map<String, Value>,
    pairs: &mut Vec<(String, String)>,
    lists: &mut Vec<(String, Vec<String>)>,
) {
    for (k, v) in map {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        if let Some(s) = scalar(v) {
            pairs.push((key, s));
            continue;
        }
        match v {
            Value::Object(inner) => flatten(&key, inner, pairs, lists),
            Value::Array(items) => {
                let lines = items
                    .iter()
                    .map(|i| scalar(i).unwrap_or_else(|| compact(i)))
                    .collect();
                lists.push((key, lines));
            }
            _ => unreachable!("scalars handled above"),
        }
    }
}

/// One-line rendering of an object: `key=value` pairs.
fn compact(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v).unwrap_or_else(|| compact(v))))
            .collect::<Vec<_>>()
            .join("  "),
        Value::Array(a) => a.iter().map(|x| scalar(x).unwrap_or_else(|| compact(x))).collect::<Vec<_>>().join(", "),
        other => scalar(other).unwrap_or_default(),
    }
}

/// Left-aligned first column, right-aligned numbers.
pub fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            let pad = w - c.chars().count();
            if i > 0 {
                s.push_str("  ");
            }
            if i == 0 || i == cells.len() - 1 {
                s.push_str(c);
                if i < cells.len() - 1 {
                    s.push_str(&" ".repeat(pad));
                }
            } else {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        out.push_str(&line(r));
    }
    out
}
