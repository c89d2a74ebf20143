//! JSON problem files.
//!
//! ```json
//! {"variables": ["x", "y"],
//!  "polynomials": ["x - y^2", "x^2 + y^2 - 1"],
//!  "admissible_orderings": "all",
//!  "options": {"fraction_table": {"2": 0.334}, "seed": 7}}
//! ```
//!
//! `admissible_orderings` is `"all"`, a list of orderings (each a list of
//! names, first projected first), or `{"blocks": [[...], ...]}`.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::heuristics::AdmissibleOrderings;
use crate::order::{OrderError, VariableOrder};
use crate::poly::{parse_polynomial, ParseError, ParseErrorKind, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: polynomial {index}: {message}")]
    PolynomialSyntax { index: usize, line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown variable '{name}'")]
    UnknownVariable { name: String, line: usize, column: usize },
    #[error("ordering {0:?} is not a permutation of the variables")]
    NotPermutation(Vec<String>),
    #[error("variable '{0}' declared twice")]
    DuplicateVariable(String),
    #[error("'{0}' is not a valid variable name")]
    InvalidVariableName(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
}

impl ProblemError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ProblemError::Json { .. } => "json-syntax",
            ProblemError::PolynomialSyntax { .. } => "polynomial-syntax",
            ProblemError::UnknownVariable { .. } => "unknown-variable",
            ProblemError::NotPermutation(_) => "not-permutation",
            ProblemError::DuplicateVariable(_) => "duplicate-variable",
            ProblemError::InvalidVariableName(_) => "invalid-variable-name",
            ProblemError::InvalidOption(_) => "invalid-option",
        }
    }

    /// 1-based position in the problem text, when known.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            ProblemError::Json { line, column, .. }
            | ProblemError::PolynomialSyntax { line, column, .. }
            | ProblemError::UnknownVariable { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub sources: Vec<String>,
    pub polynomials: Vec<Polynomial>,
    pub admissible: AdmissibleOrderings,
    pub fraction_overrides: BTreeMap<usize, f64>,
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    variables: Vec<String>,
    polynomials: Vec<String>,
    #[serde(default)]
    admissible_orderings: Option<RawOrderings>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawOrderings {
    Keyword(String),
    Explicit(Vec<Vec<String>>),
    Blocks { blocks: Vec<Vec<String>> },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default)]
    fraction_table: BTreeMap<String, f64>,
    #[serde(default)]
    seed: Option<u64>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Line and column (1-based) of byte offset `at` in `text`.
fn line_col(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Where the `column`-th character of polynomial `src` sits in the file.
fn locate(text: &str, src: &str, column: usize) -> (usize, usize) {
    let literal = serde_json::to_string(src).expect("strings serialize");
    match text.find(&literal) {
        Some(at) => {
            let (line, col) = line_col(text, at);
            (line, col + column)
        }
        None => (0, column),
    }
}

fn ordering(names: &[String], list: &[String]) -> Result<VariableOrder, ProblemError> {
    VariableOrder::from_names(list, names).map_err(|e| match e {
        OrderError::UnknownVariable(name) => ProblemError::UnknownVariable { name, line: 0, column: 0 },
        OrderError::NotPermutation(v) => ProblemError::NotPermutation(v),
    })
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| ProblemError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut seen = std::collections::BTreeSet::new();
    for v in &raw.variables {
        if !valid_name(v) {
            return Err(ProblemError::InvalidVariableName(v.clone()));
        }
        if !seen.insert(v.as_str()) {
            return Err(ProblemError::DuplicateVariable(v.clone()));
        }
    }
    let mut polynomials = Vec::with_capacity(raw.polynomials.len());
    for (index, src) in raw.polynomials.iter().enumerate() {
        let p = parse_polynomial(src, &raw.variables).map_err(|e: ParseError| {
            let (line, column) = locate(text, src, e.column);
            match e.kind {
                ParseErrorKind::UnknownVariable => {
                    let name = e.message.split('\'').nth(1).unwrap_or_default().to_string();
                    ProblemError::UnknownVariable { name, line, column }
                }
                _ => ProblemError::PolynomialSyntax { index, line, column, message: e.message },
            }
        })?;
        polynomials.push(p);
    }
    let admissible = match raw.admissible_orderings {
        None => AdmissibleOrderings::All,
        Some(RawOrderings::Keyword(k)) if k == "all" => AdmissibleOrderings::All,
        Some(RawOrderings::Keyword(k)) => {
            return Err(ProblemError::InvalidOption(format!("admissible_orderings: unknown keyword '{k}'")))
        }
        Some(RawOrderings::Explicit(list)) => AdmissibleOrderings::Explicit(
            list.iter().map(|o| ordering(&raw.variables, o)).collect::<Result<_, _>>()?,
        ),
        Some(RawOrderings::Blocks { blocks }) => {
            let flat: Vec<String> = blocks.iter().flatten().cloned().collect();
            let order = ordering(&raw.variables, &flat)?;
            let mut at = 0;
            let blocks = blocks
                .iter()
                .map(|b| {
                    let ids = order.top_first()[at..at + b.len()].to_vec();
                    at += b.len();
                    ids
                })
                .collect();
            AdmissibleOrderings::Blocks(blocks)
        }
    };
    let mut fraction_overrides = BTreeMap::new();
    for (k, v) in raw.options.fraction_table {
        let n: usize =
            k.trim().parse().map_err(|_| ProblemError::InvalidOption(format!("fraction_table key '{k}'")))?;
        if !(v > 0.0 && v <= 1.0) {
            return Err(ProblemError::InvalidOption(format!("fraction for n = {n} must lie in (0, 1], got {v}")));
        }
        fraction_overrides.insert(n, v);
    }
    Ok(ProblemFile {
        variables: raw.variables,
        sources: raw.polynomials,
        polynomials,
        admissible,
        fraction_overrides,
        seed: raw.options.seed,
    })
}
