//! Sample-point coordinates and exact sign determination.
//!
//! A coordinate over a base whose coordinates are all rational is an
//! ordinary [`AlgebraicNumber`]. Over a base with irrational coordinates it
//! is a [`FiberRoot`]: a root of a polynomial in the base variables and its
//! own, located by an open rational interval and counted with a Sturm
//! sequence computed over the base point. Zero tests reduce to a gcd over
//! the base point (remainder sequences whose leading coefficients are
//! checked recursively), so no primitive element or iterated resultant is
//! ever formed.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::poly::{content_primitive, Polynomial, Rational};
use crate::roots::{nonzero_sign_at_upoly, sign_at_upoly, AlgebraicNumber, Real, UPoly};

#[derive(Clone, Debug)]
pub enum Coordinate {
    Rational(Rational),
    Algebraic(AlgebraicNumber),
    Fiber(FiberRoot),
}

impl Coordinate {
    pub fn is_rational(&self) -> bool {
        matches!(self, Coordinate::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coordinate::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            Coordinate::Rational(r) => (r.clone(), r.clone()),
            Coordinate::Algebraic(a) => (a.interval().lo.clone(), a.interval().hi.clone()),
            Coordinate::Fiber(f) => (f.lo.clone(), f.hi.clone()),
        }
    }

    fn enclosure(&self) -> Interval {
        let (lo, hi) = self.bounds();
        Interval::new(lo, hi)
    }

    /// One refinement step; `base` are the coordinates below this one.
    pub(crate) fn tighten(&mut self, base: &[Coordinate]) {
        match self {
            Coordinate::Rational(_) => {}
            Coordinate::Algebraic(a) => {
                a.bisect_once();
                if let Some(r) = a.as_rational() {
                    *self = Coordinate::Rational(r.clone());
                }
            }
            Coordinate::Fiber(f) => {
                if let Some(r) = f.tighten(base) {
                    *self = Coordinate::Rational(r);
                }
            }
        }
    }

    /// `f64` approximation; `base` are the coordinates below this one.
    pub fn approx(&self, base: &[Coordinate]) -> f64 {
        use num_traits::ToPrimitive;
        let mut c = self.clone();
        let eps = Rational::new(1.into(), num_bigint::BigInt::one() << 40);
        loop {
            let (lo, hi) = c.bounds();
            if &hi - &lo <= eps {
                return ((lo + hi) / Rational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
            }
            c.tighten(base);
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Rational(r) => write!(f, "{r}"),
            Coordinate::Algebraic(a) => write!(f, "{a}"),
            Coordinate::Fiber(r) => write!(f, "fiber({:?}, ({}, {}))", r.poly, r.lo, r.hi),
        }
    }
}

/// Root of `poly(base, x_var)` in the open interval `(lo, hi)`; the
/// endpoints are not roots.
#[derive(Clone, Debug)]
pub struct FiberRoot {
    var: usize,
    poly: Polynomial,
    sturm: Arc<Vec<Polynomial>>,
    lo: Rational,
    hi: Rational,
}

impl FiberRoot {
    pub(crate) fn new(var: usize, poly: Polynomial, sturm: Arc<Vec<Polynomial>>, lo: Rational, hi: Rational) -> Self {
        crate::roots::note_algebraic_allocation();
        FiberRoot { var, poly, sturm, lo, hi }
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Bisects once; returns the root if the midpoint hits it.
    fn tighten(&mut self, base: &[Coordinate]) -> Option<Rational> {
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        if sign_at(&self.poly.substitute(self.var, &mid), base) == 0 {
            return Some(mid);
        }
        if count_roots(&self.sturm, self.var, &self.lo, &mid, base) > 0 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
        None
    }
}

/// Substitutes every rational coordinate of `coords` into `p`.
pub(crate) fn substitute_rationals(p: &Polynomial, coords: &[Coordinate]) -> Polynomial {
    let point: Vec<(usize, Rational)> = coords
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.as_rational().map(|r| (i, r.clone())))
        .filter(|(i, _)| p.involves(*i))
        .collect();
    if point.is_empty() {
        p.clone()
    } else {
        p.evaluate(&point)
    }
}

fn boxes(coords: &[Coordinate], n: usize) -> Vec<Interval> {
    let mut b: Vec<Interval> = coords.iter().map(Coordinate::enclosure).collect();
    b.resize(n, Interval::point(Rational::zero()));
    b
}

/// Exact sign of `p` at the point `coords` (which must cover every variable
/// of `p`).
pub fn sign_at(p: &Polynomial, coords: &[Coordinate]) -> i32 {
    point_sign(p, coords, true)
}

/// Sign of `p` at `coords` when `p` is known not to vanish there.
pub(crate) fn nonzero_sign_at(p: &Polynomial, coords: &[Coordinate]) -> i32 {
    point_sign(p, coords, false)
}

fn point_sign(p: &Polynomial, coords: &[Coordinate], may_vanish: bool) -> i32 {
    let q = substitute_rationals(p, coords);
    if let Some(c) = q.constant_value() {
        return sign_of(&c);
    }
    let t = q.main_var().unwrap();
    assert!(t < coords.len(), "point does not cover variable {t}");
    if let Coordinate::Algebraic(a) = &coords[t] {
        // all lower coordinates are rational, so q is univariate
        let u = UPoly::from_polynomial(&q).expect("univariate after substitution");
        let a = Real::Algebraic(a.clone());
        return if may_vanish { sign_at_upoly(&u, &a) } else { nonzero_sign_at_upoly(&u, &a) };
    }
    if let Some(s) = Interval::eval_poly(&q, &boxes(coords, q.nvars())).sign() {
        return s;
    }
    // refine a little before paying for the exact zero test
    let mut local = coords[..=t].to_vec();
    for round in 0.. {
        if may_vanish && round == 4 && is_zero_at(&q, t, coords) {
            return 0;
        }
        for i in 0..=t {
            let (lower, rest) = local.split_at_mut(i);
            rest[0].tighten(lower);
        }
        if let Some(s) = Interval::eval_poly(&q, &boxes(&local, q.nvars())).sign() {
            return s;
        }
    }
    unreachable!()
}

fn sign_of(c: &Rational) -> i32 {
    if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

/// Does `q` (main variable `t`, rational coordinates substituted) vanish at
/// `coords`, where `coords[t]` is a fiber root?
fn is_zero_at(q: &Polynomial, t: usize, coords: &[Coordinate]) -> bool {
    let Coordinate::Fiber(fr) = &coords[t] else {
        unreachable!("rational and univariate coordinates are handled by the caller")
    };
    let base = &coords[..t];
    let g = fiber_gcd(&fr.poly, q, t, base);
    if g.degree(t) == 0 {
        return false;
    }
    let seq = sturm_sequence(&g, t, base);
    count_roots(&seq, t, &fr.lo, &fr.hi, base) > 0
}

/// Drops leading terms in `x_t` whose coefficients vanish at `base`.
pub(crate) fn truncate(p: &Polynomial, t: usize, base: &[Coordinate]) -> Polynomial {
    let mut coeffs = p.coeffs_in(t);
    while let Some(c) = coeffs.last() {
        if !c.is_zero() && sign_at(c, base) != 0 {
            break;
        }
        coeffs.pop();
    }
    Polynomial::from_coeffs(p.nvars(), t, &coeffs)
}

fn prem(a: &Polynomial, b: &Polynomial, t: usize) -> Polynomial {
    let db = b.degree(t);
    let lcb = b.lc_in(t);
    let mut r = a.clone();
    if r.degree(t) < db {
        return r;
    }
    // exactly lc(b)^(deg a - deg b + 1) * a - q * b, so callers can rely on
    // the sign of the multiplier
    let mut steps = r.degree(t) - db + 1;
    while !r.is_zero() && r.degree(t) >= db {
        steps -= 1;
        let dr = r.degree(t);
        let lr = r.lc_in(t);
        let shift = {
            let mut e = vec![0u32; r.nvars()];
            e[t] = dr - db;
            Polynomial::from_terms(r.nvars(), [(e, Rational::one())])
        };
        let next = &(&r * &lcb) - &(&(&lr * &shift) * b);
        debug_assert!(next.is_zero() || next.degree(t) < dr);
        r = next;
    }
    for _ in 0..steps {
        r = &r * &lcb;
    }
    r
}

/// Divides out the content in `x_t`, keeping the sign at `base` (the
/// content cannot vanish there when the leading coefficient does not).
fn primitive_at(p: &Polynomial, t: usize, base: &[Coordinate]) -> Polynomial {
    let (c, pp) = content_primitive(p, t);
    if sign_at(&c, base) < 0 {
        -pp
    } else {
        pp
    }
}

/// Gcd of `a(base, x_t)` and `b(base, x_t)`, up to a factor that does not
/// vanish at `base`.
pub(crate) fn fiber_gcd(a: &Polynomial, b: &Polynomial, t: usize, base: &[Coordinate]) -> Polynomial {
    let mut a = truncate(a, t, base);
    let mut b = truncate(b, t, base);
    if a.degree(t) < b.degree(t) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.degree(t) == 0 {
            return Polynomial::one(a.nvars());
        }
        let r = truncate(&prem(&a, &b, t), t, base);
        a = b;
        b = if r.is_zero() { r } else { primitive_at(&r, t, base) };
    }
    a
}

/// Sturm sequence of `f(base, x_t)` with every member's leading
/// coefficient nonzero at `base` and signs faithful to the true sequence.
pub(crate) fn sturm_sequence(f: &Polynomial, t: usize, base: &[Coordinate]) -> Vec<Polynomial> {
    let f = truncate(f, t, base);
    let mut seq = vec![f.clone()];
    if f.degree(t) == 0 {
        return seq;
    }
    seq.push(truncate(&f.derivative(t), t, base));
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.degree(t) == 0 {
            break;
        }
        // prem = lc(b)^(delta+1) * rem; the next member is -rem.
        let delta = a.degree(t) - b.degree(t);
        let s_lc = sign_at(&b.lc_in(t), base);
        let r = prem(a, b, t);
        let r = if s_lc < 0 && delta % 2 == 0 { r } else { -r };
        let r = truncate(&r, t, base);
        if r.is_zero() {
            break;
        }
        seq.push(primitive_at(&r, t, base));
    }
    seq
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn variations_at(seq: &[Polynomial], t: usize, x: &Rational, base: &[Coordinate]) -> usize {
    variations(seq.iter().map(|p| sign_at(&p.substitute(t, x), base)))
}

fn variations_at_infinity(seq: &[Polynomial], t: usize, positive: bool, base: &[Coordinate]) -> usize {
    variations(seq.iter().map(|p| {
        let s = sign_at(&p.lc_in(t), base);
        if !positive && p.degree(t) % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Distinct roots in `(lo, hi)`; neither endpoint may be a root.
pub(crate) fn count_roots(seq: &[Polynomial], t: usize, lo: &Rational, hi: &Rational, base: &[Coordinate]) -> usize {
    variations_at(seq, t, lo, base) - variations_at(seq, t, hi, base)
}

/// Isolated root of a polynomial over a point with irrational coordinates.
#[derive(Clone, Debug)]
pub(crate) enum FiberIsolated {
    Exact(Rational),
    Open(Rational, Rational),
}

/// Real roots of `f(base, x_t)` where `f` has been truncated (nonzero
/// leading coefficient at `base`) and has positive degree.
pub(crate) fn isolate_over(
    f: &Polynomial,
    t: usize,
    base: &[Coordinate],
) -> (Arc<Vec<Polynomial>>, Vec<FiberIsolated>) {
    let seq = Arc::new(sturm_sequence(f, t, base));
    let total = variations_at_infinity(&seq, t, false, base) - variations_at_infinity(&seq, t, true, base);
    let mut out = Vec::new();
    if total == 0 {
        return (seq, out);
    }
    let is_root = |x: &Rational| sign_at(&f.substitute(t, x), base) == 0;
    let mut b = Rational::one();
    loop {
        let nb = -b.clone();
        if !is_root(&b) && !is_root(&nb) && count_roots(&seq, t, &nb, &b, base) == total {
            break;
        }
        b *= Rational::from_integer(2.into());
    }
    let mut work = vec![(-b.clone(), b, total)];
    while let Some((lo, hi, n)) = work.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(FiberIsolated::Open(lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if !is_root(&mid) {
            let left = count_roots(&seq, t, &lo, &mid, base);
            work.push((mid.clone(), hi, n - left));
            work.push((lo, mid, left));
            continue;
        }
        // Sturm counts are only valid between non-roots: step off the root
        // until the gap around it holds nothing else.
        out.push(FiberIsolated::Exact(mid.clone()));
        let mut eps = (&hi - &lo) / Rational::from_integer(4.into());
        let (a, b) = loop {
            let (a, b) = (&mid - &eps, &mid + &eps);
            if !is_root(&a) && !is_root(&b) && count_roots(&seq, t, &a, &b, base) == 1 {
                break (a, b);
            }
            eps /= Rational::from_integer(2.into());
        };
        let left = count_roots(&seq, t, &lo, &a, base);
        work.push((b, hi, n - 1 - left));
        work.push((lo, a, left));
    }
    let key = |r: &FiberIsolated| match r {
        FiberIsolated::Exact(x) => (x.clone(), x.clone()),
        FiberIsolated::Open(a, b) => (a.clone(), b.clone()),
    };
    out.sort_by_key(key);
    (seq, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat};
    use crate::roots::AlgebraicNumber;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y", "z"]).unwrap()
    }

    fn sqrt2() -> Coordinate {
        Coordinate::Algebraic(AlgebraicNumber::roots_of(&p("x^2 - 2")).unwrap()[1].clone())
    }

    #[test]
    fn signs_over_algebraic_base() {
        let base = [sqrt2()];
        assert_eq!(sign_at(&p("x^2 - 2"), &base), 0);
        assert_eq!(sign_at(&p("x - 1"), &base), 1);
        assert_eq!(sign_at(&p("2 - x^2 - x"), &base), -1);
    }

    #[test]
    fn fiber_roots_and_zero_tests() {
        // over x = sqrt(2): y^2 - x has roots +-2^(1/4)
        let base = [sqrt2()];
        let f = p("y^2 - x");
        let (seq, roots) = isolate_over(&f, 1, &base);
        assert_eq!(roots.len(), 2);
        let FiberIsolated::Open(lo, hi) = roots[1].clone() else { panic!() };
        let y = Coordinate::Fiber(FiberRoot::new(1, f, seq, lo, hi));
        let pt = [base[0].clone(), y];
        assert_eq!(sign_at(&p("y^4 - 2"), &pt), 0);
        assert_eq!(sign_at(&p("y^2 - x"), &pt), 0);
        assert_eq!(sign_at(&p("y - 1"), &pt), 1);
        assert_eq!(sign_at(&p("y^2 - 1 - x"), &pt), -1);
        assert!((pt[1].approx(&pt[..1]) - 2f64.powf(0.25)).abs() < 1e-9);
    }

    #[test]
    fn double_roots_over_fiber_are_found_once() {
        // over x = sqrt(2): (y - x)^2 has the single root y = sqrt(2)
        let base = [sqrt2()];
        let f = p("y^2 - 2*x*y + x^2");
        let (_, roots) = isolate_over(&f, 1, &base);
        assert_eq!(roots.len(), 1);
        let g = p("y^2 + 1");
        let (_, none) = isolate_over(&g, 1, &base);
        assert!(none.is_empty());
        // rational root over an irrational base
        let h = p("x*y - 2*x");
        let (_, r) = isolate_over(&truncate(&h, 1, &base), 1, &base);
        let two = rat(2, 1);
        assert!(matches!(&r[..], [FiberIsolated::Open(lo, hi)] if *lo < two && two < *hi));
    }

    #[test]
    fn sturm_signs_survive_degree_gaps() {
        // over x = sqrt(3) this is 3y^8 - 6y^4 + y^2 + 5 > 0; remainders skip degrees
        let base = [Coordinate::Algebraic(AlgebraicNumber::roots_of(&p("x^2 - 3")).unwrap()[1].clone())];
        let f = p("x^2*y^8 - 2*x^2*y^4 + 2*x^2 + y^2 - 1");
        let (_, roots) = isolate_over(&f, 1, &base);
        assert!(roots.is_empty());
    }
}
