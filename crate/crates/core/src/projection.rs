//! McCallum projection.
//!
//! Coefficients are added from the leading one downwards and stop at the
//! first nonzero constant: once a coefficient cannot vanish, the lower ones
//! can no longer make the polynomial vanish identically.

use std::fmt;

use serde::Serialize;

use crate::order::VariableOrder;
use crate::poly::{discriminant, resultant, squarefree_basis, Polynomial};

/// A projection factor whose coefficients may vanish together on a
/// positive-dimensional region; the decomposition may then fail to be
/// sign-invariant there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellOrientednessWarning {
    /// 1-based level of the factor.
    pub level: usize,
    pub factor: String,
    pub reason: String,
}

impl fmt::Display for WellOrientednessWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {} ({})", self.level, self.factor, self.reason)
    }
}

/// Projection of `ps` with respect to `var`, which must be the highest
/// variable occurring in `ps`. Inputs free of `var` pass through.
pub fn mccallum_project(ps: &[Polynomial], var: usize) -> (Vec<Polynomial>, Vec<WellOrientednessWarning>) {
    let basis = squarefree_basis(ps);
    let (top, mut out): (Vec<_>, Vec<_>) = basis.into_iter().partition(|p| p.involves(var));
    let mut warnings = Vec::new();
    for p in &top {
        debug_assert_eq!(p.main_var(), Some(var));
        let coeffs = p.coeffs_in(var);
        for c in coeffs.iter().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_constant() {
                break;
            }
            out.push(c.clone());
        }
        if let Some(w) = nullification_suspicion(p, var, &coeffs) {
            warnings.push(w);
        }
        if p.degree(var) >= 2 {
            out.push(discriminant(p, var).expect("degree checked"));
        }
    }
    for (i, p) in top.iter().enumerate() {
        for q in &top[i + 1..] {
            out.push(resultant(p, q, var).expect("both involve the main variable"));
        }
    }
    (squarefree_basis(&out), warnings)
}

/// Heuristic: `c` nonconstant coefficients in `k` base variables have a
/// common zero set of dimension at least `k - c` whenever it is nonempty.
fn nullification_suspicion(p: &Polynomial, var: usize, coeffs: &[Polynomial]) -> Option<WellOrientednessWarning> {
    let k = var;
    if k < 2 || coeffs.iter().any(|c| !c.is_zero() && c.is_constant()) {
        return None;
    }
    let mut distinct: Vec<&Polynomial> = Vec::new();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        let c_norm = c;
        if !distinct.iter().any(|d| d.normalized() == c_norm.normalized()) {
            distinct.push(c);
        }
    }
    (distinct.len() < k).then(|| WellOrientednessWarning {
        level: var + 1,
        factor: format!("{p}"),
        reason: format!(
            "{} distinct coefficients in {} base variables may vanish together on a curve",
            distinct.len(),
            k
        ),
    })
}

/// Projection factors per level, in internal variable positions: level `j`
/// (index `j - 1`) holds factors whose main variable is position `j - 1`.
#[derive(Clone, Debug)]
pub struct ProjectionFactorSet {
    pub order: VariableOrder,
    pub levels: Vec<Vec<Polynomial>>,
    pub warnings: Vec<WellOrientednessWarning>,
}

impl ProjectionFactorSet {
    pub fn nvars(&self) -> usize {
        self.levels.len()
    }

    pub fn total_factors(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Factors of each level as canonical text in problem variable names.
    pub fn to_text(&self, names: &[String]) -> Vec<Vec<String>> {
        let internal = self.order.internal_names(names);
        self.levels.iter().map(|l| l.iter().map(|p| p.to_text(&internal)).collect()).collect()
    }
}

/// Maps problem polynomials into internal positions for `order`.
pub fn to_internal(ps: &[Polynomial], order: &VariableOrder) -> Vec<Polynomial> {
    let perm = order.to_internal();
    ps.iter().map(|p| p.remap(&perm, order.len())).collect()
}

/// Full projection: repeated McCallum projection from the top variable down.
pub fn build_projection(ps: &[Polynomial], order: &VariableOrder) -> ProjectionFactorSet {
    let n = order.len();
    let mut pool = squarefree_basis(&to_internal(ps, order));
    let mut levels = vec![Vec::new(); n];
    let mut warnings = Vec::new();
    for j in (0..n).rev() {
        let (here, rest): (Vec<_>, Vec<_>) = pool.into_iter().partition(|p| p.main_var() == Some(j));
        if j > 0 {
            let (proj, w) = mccallum_project(&here, j);
            warnings.extend(w);
            let mut next = rest;
            next.extend(proj);
            pool = squarefree_basis(&next);
        } else {
            pool = rest;
        }
        levels[j] = here;
    }
    debug_assert!(pool.is_empty());
    ProjectionFactorSet { order: order.clone(), levels, warnings }
}
