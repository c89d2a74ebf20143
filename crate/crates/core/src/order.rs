//! Variable orderings.
//!
//! An ordering lists problem variables from the first projected (top) to the
//! last (base); `x ≻ y ≻ z` projects `x` first and lifts over `z` first.
//! Inside a decomposition the base variable becomes position 0.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("ordering {0:?} is not a permutation of the problem variables")]
    NotPermutation(Vec<String>),
    #[error("unknown variable '{0}' in ordering")]
    UnknownVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariableOrder(Vec<usize>);

impl VariableOrder {
    /// `top_first[k]` is the problem variable projected `k`-th.
    pub fn new(top_first: Vec<usize>) -> Result<Self, OrderError> {
        let mut seen = vec![false; top_first.len()];
        for &v in &top_first {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(OrderError::NotPermutation(top_first.iter().map(|v| format!("#{v}")).collect()));
            }
        }
        Ok(VariableOrder(top_first))
    }

    pub fn from_names(order: &[impl AsRef<str>], names: &[impl AsRef<str>]) -> Result<Self, OrderError> {
        let mut idx = Vec::with_capacity(order.len());
        for o in order {
            let o = o.as_ref();
            let i = names
                .iter()
                .position(|n| n.as_ref() == o)
                .ok_or_else(|| OrderError::UnknownVariable(o.to_string()))?;
            idx.push(i);
        }
        if idx.len() != names.len() {
            return Err(OrderError::NotPermutation(order.iter().map(|s| s.as_ref().to_string()).collect()));
        }
        VariableOrder::new(idx).map_err(|_| {
            OrderError::NotPermutation(order.iter().map(|s| s.as_ref().to_string()).collect())
        })
    }

    /// The ordering that projects variables in their declared order.
    pub fn identity(n: usize) -> Self {
        VariableOrder((0..n).collect())
    }

    /// All `n!` orderings, lexicographic in the declared variable order.
    pub fn all(n: usize) -> Vec<VariableOrder> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<VariableOrder>) {
            if cur.len() == n {
                out.push(VariableOrder(cur.clone()));
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top_first(&self) -> &[usize] {
        &self.0
    }

    /// `perm[problem_var]` is the position of that variable inside the
    /// decomposition (0 = base).
    pub fn to_internal(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut perm = vec![0; n];
        for (k, &v) in self.0.iter().enumerate() {
            perm[v] = n - 1 - k;
        }
        perm
    }

    /// Inverse of [`to_internal`](Self::to_internal).
    pub fn to_problem(&self) -> Vec<usize> {
        self.0.iter().rev().copied().collect()
    }

    /// Variable names in internal positions (base first).
    pub fn internal_names<'a>(&self, names: &'a [String]) -> Vec<&'a str> {
        self.to_problem().iter().map(|&v| names[v].as_str()).collect()
    }

    pub fn display(&self, names: &[impl AsRef<str>]) -> String {
        self.0.iter().map(|&v| names[v].as_ref()).collect::<Vec<_>>().join("≻")
    }
}

impl fmt::Display for VariableOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| format!("x{v}")).collect();
        f.write_str(&parts.join("≻"))
    }
}
