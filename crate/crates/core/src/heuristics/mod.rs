//! Choosing a variable ordering from 1-layered sub-decompositions.
//!
//! The number of full-dimensional cells is cheap to compute (no algebraic
//! numbers are needed) and, divided by the typical fraction of
//! full-dimensional cells, predicts the size of the complete decomposition.

mod parallel;

pub use parallel::{parallel_layered_heuristic, ParallelOutcome, Scheduler, TaskRegistry};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cad::{build_cad, complete, one_layered, Cad, CadError};
use crate::order::{OrderError, VariableOrder};
use crate::poly::Polynomial;

/// Environment variable naming a JSON fraction table (`{"2": 0.334, ...}`).
pub const FRACTION_TABLE_ENV: &str = "LCAD_FRACTION_TABLE";

/// Success probability of the binomial model used where the table has no entry.
pub const FALLBACK_P: f64 = 0.7;

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error("predictions need at least 2 variables (got {0})")]
    UnsupportedDimension(usize),
    #[error("fraction for n = {n} must lie in (0, 1], got {value}")]
    InvalidFraction { n: usize, value: f64 },
    #[error("cannot read fraction table {path}: {source}")]
    TableIo { path: PathBuf, source: std::io::Error },
    #[error("malformed fraction table: {0}")]
    TableFormat(String),
    #[error("no admissible orderings")]
    NoOrderings,
    #[error("blocks must partition the {0} variables")]
    BadBlocks(usize),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("every ordering failed: {}", .0.iter().map(|(o, e)| format!("{o}: {e}")).collect::<Vec<_>>().join("; "))]
    AllOrderingsFailed(Vec<(String, CadError)>),
}

/// Average fraction of full-dimensional cells, by number of variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionTable(BTreeMap<usize, f64>);

impl Default for FractionTable {
    fn default() -> Self {
        FractionTable(BTreeMap::from([(2, 0.334), (3, 0.192), (4, 0.161), (5, 0.181)]))
    }
}

impl FractionTable {
    pub fn new(entries: BTreeMap<usize, f64>) -> Result<Self, HeuristicError> {
        for (&n, &value) in &entries {
            if !(value > 0.0 && value <= 1.0) {
                return Err(HeuristicError::InvalidFraction { n, value });
            }
        }
        Ok(FractionTable(entries))
    }

    /// Parses `{"n": fraction, ...}`; listed entries replace the defaults.
    pub fn from_json(text: &str) -> Result<Self, HeuristicError> {
        let raw: BTreeMap<String, f64> =
            serde_json::from_str(text).map_err(|e| HeuristicError::TableFormat(e.to_string()))?;
        let mut entries = FractionTable::default().0;
        for (k, v) in raw {
            let n = k.trim().parse().map_err(|_| HeuristicError::TableFormat(format!("bad key '{k}'")))?;
            entries.insert(n, v);
        }
        FractionTable::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, HeuristicError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HeuristicError::TableIo { path: path.to_path_buf(), source })?;
        FractionTable::from_json(&text)
    }

    /// Defaults, or the table named by [`FRACTION_TABLE_ENV`].
    pub fn from_env() -> Result<Self, HeuristicError> {
        match std::env::var_os(FRACTION_TABLE_ENV) {
            Some(p) if !p.is_empty() => FractionTable::load(Path::new(&p)),
            _ => Ok(FractionTable::default()),
        }
    }

    pub fn entries(&self) -> &BTreeMap<usize, f64> {
        &self.0
    }

    /// Table entry, or `FALLBACK_P^n` beyond the table.
    pub fn fraction(&self, n: usize) -> f64 {
        self.0.get(&n).copied().unwrap_or_else(|| FALLBACK_P.powi(n as i32))
    }

    /// Every entry multiplied by `c` (entries may leave (0, 1]).
    pub fn scaled(&self, c: f64) -> Self {
        FractionTable(self.0.iter().map(|(&n, &f)| (n, f * c)).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub value: f64,
    /// Nearest integer, halves away from zero.
    pub rounded: u64,
}

/// Predicted size of the complete decomposition from its full-dimensional cells.
pub fn predict_total(fulldim: u64, n: usize, table: &FractionTable) -> Result<Prediction, HeuristicError> {
    if n < 2 {
        return Err(HeuristicError::UnsupportedDimension(n));
    }
    let value = fulldim as f64 / table.fraction(n);
    Ok(Prediction { value, rounded: value.round() as u64 })
}

/// Orderings the heuristic may choose from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdmissibleOrderings {
    All,
    Explicit(Vec<VariableOrder>),
    /// Groups of variables, projected group by group (first group first);
    /// any order is allowed within a group.
    Blocks(Vec<Vec<usize>>),
}

impl AdmissibleOrderings {
    /// The admissible orderings in lexicographic order, without duplicates.
    pub fn expand(&self, nvars: usize) -> Result<Vec<VariableOrder>, HeuristicError> {
        let mut out = match self {
            AdmissibleOrderings::All => VariableOrder::all(nvars),
            AdmissibleOrderings::Explicit(list) => {
                for o in list {
                    if o.len() != nvars {
                        let vars = o.top_first().iter().map(|v| format!("#{v}")).collect();
                        return Err(OrderError::NotPermutation(vars).into());
                    }
                    VariableOrder::new(o.top_first().to_vec())?;
                }
                list.clone()
            }
            AdmissibleOrderings::Blocks(blocks) => {
                let mut seen: Vec<usize> = blocks.iter().flatten().copied().collect();
                seen.sort_unstable();
                if seen != (0..nvars).collect::<Vec<_>>() {
                    return Err(HeuristicError::BadBlocks(nvars));
                }
                let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
                for block in blocks {
                    let perms = VariableOrder::all(block.len());
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            perms.iter().map(move |p| {
                                let mut v = prefix.clone();
                                v.extend(p.top_first().iter().map(|&i| block[i]));
                                v
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(|v| VariableOrder::new(v).expect("blocks partition the variables")).collect()
            }
        };
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(HeuristicError::NoOrderings);
        }
        Ok(out)
    }
}

/// One ordering's line in a comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingRow {
    pub ordering: String,
    pub fulldim: Option<u64>,
    pub prediction: Option<Prediction>,
    pub complete: Option<u64>,
    /// Stacks lifted by the 1-layered computation.
    pub stacks: Option<u64>,
    pub one_layered_seconds: f64,
    pub complete_seconds: Option<f64>,
    pub error: Option<String>,
}

impl OrderingRow {
    fn failed(ordering: String, seconds: f64, e: &CadError) -> Self {
        OrderingRow {
            ordering,
            fulldim: None,
            prediction: None,
            complete: None,
            stacks: None,
            one_layered_seconds: seconds,
            complete_seconds: None,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub rows: Vec<OrderingRow>,
    pub selected: Option<String>,
    /// Another ordering had the same minimal count; the first one won.
    pub tie_break_applied: bool,
}

fn elapsed(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

fn prediction_for(fulldim: u64, n: usize, table: &FractionTable) -> Option<Prediction> {
    predict_total(fulldim, n, table).ok()
}

/// Sequential selection: the ordering with the fewest full-dimensional cells
/// (first one on ties), completed by extending its 1-layered sub-decomposition.
pub fn layered_heuristic(
    ps: &[Polynomial],
    names: &[String],
    orderings: &AdmissibleOrderings,
    table: &FractionTable,
) -> Result<(VariableOrder, Cad, OrderingReport), HeuristicError> {
    let candidates = orderings.expand(names.len())?;
    let n = names.len();
    let mut rows = Vec::new();
    let mut layered: Vec<Option<Cad>> = Vec::new();
    let mut failures = Vec::new();
    for v in &candidates {
        let t = Instant::now();
        match one_layered(ps, v) {
            Ok(cad) => {
                let fulldim = cad.cells.len() as u64;
                rows.push(OrderingRow {
                    ordering: v.display(names),
                    fulldim: Some(fulldim),
                    prediction: prediction_for(fulldim, n, table),
                    complete: None,
                    stacks: Some(cad.stacks_lifted as u64),
                    one_layered_seconds: elapsed(t),
                    complete_seconds: None,
                    error: None,
                });
                layered.push(Some(cad));
            }
            Err(e) => {
                rows.push(OrderingRow::failed(v.display(names), elapsed(t), &e));
                failures.push((v.display(names), e));
                layered.push(None);
            }
        }
    }
    // same winner as a strict-less scan; the rest are fallbacks should the
    // winner fail to complete
    let mut ranked: Vec<usize> = (0..candidates.len()).filter(|&i| layered[i].is_some()).collect();
    ranked.sort_by_key(|&i| (rows[i].fulldim, i));
    let tie = ranked.len() > 1 && rows[ranked[0]].fulldim == rows[ranked[1]].fulldim;
    for &i in &ranked {
        let mut cad = layered[i].take().expect("ranked orderings have a sub-decomposition");
        let t = Instant::now();
        match complete(&mut cad) {
            Ok(()) => {
                rows[i].complete = Some(cad.cells.len() as u64);
                rows[i].complete_seconds = Some(elapsed(t));
                let report = OrderingReport { rows, selected: Some(candidates[i].display(names)), tie_break_applied: tie };
                return Ok((candidates[i].clone(), cad, report));
            }
            Err(e) => {
                rows[i].error = Some(e.to_string());
                failures.push((candidates[i].display(names), e));
            }
        }
    }
    Err(HeuristicError::AllOrderingsFailed(failures))
}

/// Every ordering's 1-layered count, prediction and complete count.
pub fn compare_orderings(
    ps: &[Polynomial],
    names: &[String],
    orderings: &AdmissibleOrderings,
    table: &FractionTable,
) -> Result<OrderingReport, HeuristicError> {
    let candidates = orderings.expand(names.len())?;
    let n = names.len();
    let mut rows = Vec::new();
    for v in &candidates {
        let t = Instant::now();
        let layered = match one_layered(ps, v) {
            Ok(c) => c,
            Err(e) => {
                rows.push(OrderingRow::failed(v.display(names), elapsed(t), &e));
                continue;
            }
        };
        let one_layered_seconds = elapsed(t);
        let fulldim = layered.cells.len() as u64;
        let t = Instant::now();
        let full = build_cad(ps, v);
        let complete_seconds = elapsed(t);
        rows.push(OrderingRow {
            ordering: v.display(names),
            fulldim: Some(fulldim),
            prediction: prediction_for(fulldim, n, table),
            complete: full.as_ref().ok().map(|c| c.cells.len() as u64),
            stacks: Some(layered.stacks_lifted as u64),
            one_layered_seconds,
            complete_seconds: Some(complete_seconds),
            error: full.err().map(|e| e.to_string()),
        });
    }
    let mut best: Option<(u64, usize)> = None;
    let mut tie = false;
    for (i, r) in rows.iter().enumerate() {
        let Some(f) = r.fulldim else { continue };
        match best {
            Some((b, _)) if f == b => tie = true,
            Some((b, _)) if f > b => {}
            _ => {
                best = Some((f, i));
                tie = false;
            }
        }
    }
    Ok(OrderingReport { selected: best.map(|(_, i)| rows[i].ordering.clone()), rows, tie_break_applied: tie })
}
