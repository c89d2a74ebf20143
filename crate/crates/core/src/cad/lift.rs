//! Stack construction over a single base cell.

use std::sync::Arc;

use crate::poly::{Polynomial, Rational};
use crate::roots::{isolate_upoly, simplest_between, simplest_between_enclosures, AlgebraicNumber, Enclosure, IsolatingInterval, UPoly};

use super::point::{
    count_roots, fiber_gcd, isolate_over, sign_at, sturm_sequence, substitute_rationals, truncate, Coordinate,
    FiberIsolated, FiberRoot,
};
use super::CadError;

/// A section boundary found while lifting. Turning it into a sample
/// coordinate is deferred, so sector-only lifting never builds one.
#[derive(Clone, Debug)]
pub enum SectionRoot {
    /// Root of a square-free integer polynomial (base fully rational).
    Univariate { poly: UPoly, iv: IsolatingInterval },
    /// Root over a base with irrational coordinates.
    Fiber { var: usize, poly: Polynomial, sturm: Arc<Vec<Polynomial>>, iv: IsolatingInterval },
}

impl SectionRoot {
    fn iv(&self) -> &IsolatingInterval {
        match self {
            SectionRoot::Univariate { iv, .. } | SectionRoot::Fiber { iv, .. } => iv,
        }
    }

    fn tighten(&mut self, base: &[Coordinate]) {
        match self {
            SectionRoot::Univariate { poly, iv } => *iv = iv.bisected(poly),
            SectionRoot::Fiber { var, poly, sturm, iv } => {
                if iv.exact {
                    return;
                }
                // rational roots must become exact, or sector samples next to
                // them would never stabilise
                let simple = simplest_between(Some(&iv.lo), Some(&iv.hi));
                if sign_at(&poly.substitute(*var, &simple), base) == 0 {
                    *iv = IsolatingInterval::point(simple);
                    return;
                }
                let mid = iv.midpoint();
                if sign_at(&poly.substitute(*var, &mid), base) == 0 {
                    *iv = IsolatingInterval::point(mid);
                } else if count_roots(sturm, *var, &iv.lo, &mid, base) > 0 {
                    *iv = IsolatingInterval::open(iv.lo.clone(), mid);
                } else {
                    *iv = IsolatingInterval::open(mid, iv.hi.clone());
                }
            }
        }
    }

    /// Exact equality of two overlapping roots over the same base.
    fn same_root(&self, other: &SectionRoot, base: &[Coordinate]) -> bool {
        let (a, b) = (self.iv(), other.iv());
        if !a.overlaps(b) {
            return false;
        }
        if a.exact && b.exact {
            return true;
        }
        if a.exact || b.exact {
            let (point, open) = if a.exact { (a, other) } else { (b, self) };
            return open.vanishes_at(&point.lo, base);
        }
        let lo = std::cmp::max(&a.lo, &b.lo).clone();
        let hi = std::cmp::min(&a.hi, &b.hi).clone();
        match (self, other) {
            (SectionRoot::Univariate { poly: p, .. }, SectionRoot::Univariate { poly: q, .. }) => {
                let g = p.gcd(q);
                g.degree() > 0 && g.sign_at(&lo) * g.sign_at(&hi) < 0
            }
            (SectionRoot::Fiber { var, poly: p, .. }, SectionRoot::Fiber { poly: q, .. }) => {
                let g = fiber_gcd(p, q, *var, base);
                if g.degree(*var) == 0 {
                    return false;
                }
                let seq = sturm_sequence(&g, *var, base);
                count_roots(&seq, *var, &lo, &hi, base) > 0
            }
            _ => unreachable!("roots over one base share a representation"),
        }
    }

    fn vanishes_at(&self, x: &Rational, base: &[Coordinate]) -> bool {
        match self {
            SectionRoot::Univariate { poly, .. } => poly.sign_at(x) == 0,
            SectionRoot::Fiber { var, poly, .. } => sign_at(&poly.substitute(*var, x), base) == 0,
        }
    }

    /// Builds the sample coordinate for the section.
    pub fn to_coordinate(&self) -> Coordinate {
        match self {
            SectionRoot::Univariate { iv, .. } | SectionRoot::Fiber { iv, .. } if iv.exact => {
                Coordinate::Rational(iv.lo.clone())
            }
            SectionRoot::Univariate { poly, iv } => {
                Coordinate::Algebraic(AlgebraicNumber::new(poly.clone(), iv.clone()))
            }
            SectionRoot::Fiber { var, poly, sturm, iv } => Coordinate::Fiber(FiberRoot::new(
                *var,
                poly.clone(),
                sturm.clone(),
                iv.lo.clone(),
                iv.hi.clone(),
            )),
        }
    }
}

struct RootEnclosure<'a> {
    root: &'a mut SectionRoot,
    base: &'a [Coordinate],
}

impl Enclosure for RootEnclosure<'_> {
    fn bounds(&self) -> (Rational, Rational) {
        let iv = self.root.iv();
        (iv.lo.clone(), iv.hi.clone())
    }

    fn tighten(&mut self) {
        self.root.tighten(self.base);
    }
}

/// The cylinder over one base cell: `k` sections and `k + 1` sector samples.
#[derive(Clone, Debug)]
pub struct Stack {
    pub sections: Vec<SectionRoot>,
    /// For each section, the factors vanishing on it.
    pub owners: Vec<Vec<usize>>,
    pub sector_samples: Vec<Rational>,
    /// Factors whose leading coefficient vanished over the base.
    pub degree_drops: Vec<usize>,
    /// Factors vanishing identically over a point base (harmless there).
    pub nullified: Vec<usize>,
}

impl Stack {
    pub fn cell_count(&self) -> usize {
        2 * self.sections.len() + 1
    }
}

/// Lifts over `base` (coordinates of variables `0..base.len()`) using the
/// factors of the next level. A factor vanishing identically is an error
/// unless the base cell is a point (`base_dimension == 0`), where it simply
/// contributes no sections.
pub fn lift_stack(base: &[Coordinate], factors: &[Polynomial], base_dimension: usize) -> Result<Stack, CadError> {
    let t = base.len();
    let rational_base = base.iter().all(Coordinate::is_rational);
    let mut roots: Vec<SectionRoot> = Vec::new();
    let mut owners: Vec<Vec<usize>> = Vec::new();
    let mut degree_drops = Vec::new();
    let mut nullified = Vec::new();
    for (fi, f) in factors.iter().enumerate() {
        let g = substitute_rationals(f, base);
        let full_degree = f.degree(t);
        let found: Vec<SectionRoot> = if rational_base {
            let u = UPoly::from_polynomial(&g).expect("univariate after substituting a rational base");
            if u.is_zero() {
                if base_dimension > 0 {
                    return Err(nullification(t, f));
                }
                nullified.push(fi);
                continue;
            }
            if u.degree() < full_degree as usize {
                degree_drops.push(fi);
            }
            let sq = u.squarefree();
            isolate_upoly(&sq)
                .into_iter()
                .map(|iv| SectionRoot::Univariate { poly: sq.clone(), iv })
                .collect()
        } else {
            let g = truncate(&g, t, base);
            if g.is_zero() {
                if base_dimension > 0 {
                    return Err(nullification(t, f));
                }
                nullified.push(fi);
                continue;
            }
            if g.degree(t) < full_degree {
                degree_drops.push(fi);
            }
            if g.degree(t) == 0 {
                Vec::new()
            } else {
                let (sturm, iso) = isolate_over(&g, t, base);
                iso.into_iter()
                    .map(|r| {
                        let iv = match r {
                            FiberIsolated::Exact(x) => IsolatingInterval::point(x),
                            FiberIsolated::Open(lo, hi) => IsolatingInterval::open(lo, hi),
                        };
                        SectionRoot::Fiber { var: t, poly: g.clone(), sturm: sturm.clone(), iv }
                    })
                    .collect()
            }
        };
        for r in found {
            insert_root(&mut roots, &mut owners, r, fi, base);
        }
    }
    let mut paired: Vec<(SectionRoot, Vec<usize>)> = roots.into_iter().zip(owners).collect();
    paired.sort_by(|(a, _), (b, _)| (&a.iv().lo, &a.iv().hi).cmp(&(&b.iv().lo, &b.iv().hi)));
    let (mut roots, owners): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
    let mut sector_samples = Vec::with_capacity(roots.len() + 1);
    for i in 0..=roots.len() {
        let (below, above) = roots.split_at_mut(i);
        let mut lo = below.last_mut().map(|r| RootEnclosure { root: r, base });
        let mut hi = above.first_mut().map(|r| RootEnclosure { root: r, base });
        sector_samples.push(simplest_between_enclosures(
            lo.as_mut().map(|e| e as &mut dyn Enclosure),
            hi.as_mut().map(|e| e as &mut dyn Enclosure),
        ));
    }
    Ok(Stack { sections: roots, owners, sector_samples, degree_drops, nullified })
}

fn nullification(t: usize, f: &Polynomial) -> CadError {
    CadError::Nullification { level: t + 1, factor: format!("{f:?}") }
}

/// Adds `r` unless it equals a root already present; distinct roots are
/// refined until their intervals are disjoint.
fn insert_root(
    roots: &mut Vec<SectionRoot>,
    owners: &mut Vec<Vec<usize>>,
    mut r: SectionRoot,
    owner: usize,
    base: &[Coordinate],
) {
    for (e, who) in roots.iter_mut().zip(owners.iter_mut()) {
        if !e.iv().overlaps(r.iv()) {
            continue;
        }
        if e.same_root(&r, base) {
            if !who.contains(&owner) {
                who.push(owner);
            }
            return;
        }
        while e.iv().overlaps(r.iv()) {
            e.tighten(base);
            r.tighten(base);
        }
    }
    roots.push(r);
    owners.push(vec![owner]);
}
