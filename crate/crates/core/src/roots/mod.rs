//! Exact real root isolation and real algebraic numbers.
//!
//! Isolation uses Descartes' rule of signs with dyadic bisection on the
//! square-free part. Every equality decision goes through a polynomial gcd,
//! never a tolerance.

mod upoly;

pub use upoly::UPoly;

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::interval::Interval;
use crate::poly::{Polynomial, Rational};


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("empty interval: lower boundary is not below upper boundary")]
    EmptyInterval,
}

thread_local! {
    static ALGEBRAIC_ALLOCATIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of algebraic sample coordinates constructed on this thread.
pub fn algebraic_allocations() -> usize {
    ALGEBRAIC_ALLOCATIONS.with(Cell::get)
}

pub(crate) fn note_algebraic_allocation() {
    ALGEBRAIC_ALLOCATIONS.with(|c| c.set(c.get() + 1));
}

/// Interval holding exactly one real root of its owning polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    /// `lo == hi` is the root itself.
    pub exact: bool,
}

impl IsolatingInterval {
    pub fn point(r: Rational) -> Self {
        IsolatingInterval { lo: r.clone(), hi: r, exact: true }
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo < hi);
        IsolatingInterval { lo, hi, exact: false }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }
}

/// Real roots of `p` (at most one variable), one interval per distinct root,
/// in increasing order. Rational roots come back exact.
pub fn isolate_roots(p: &Polynomial) -> Result<Vec<IsolatingInterval>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let u = UPoly::from_polynomial(p).ok_or(RootError::NotUnivariate)?;
    Ok(isolate_upoly(&u.squarefree()))
}

/// Root isolation for a square-free integer polynomial.
pub fn isolate_upoly(p: &UPoly) -> Vec<IsolatingInterval> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let orig = p;
    let mut p = p.clone();
    let zero_root = p.0[0].is_zero();
    if zero_root {
        p = UPoly(p.0[1..].to_vec());
    }
    let k = p.root_bound_log2();
    let neg = descartes_positive(&p.reflect(), k)
        .into_iter()
        .rev()
        .map(|iv| if iv.exact { IsolatingInterval::point(-iv.lo) } else { IsolatingInterval::open(-iv.hi, -iv.lo) });
    let zero = zero_root.then(|| IsolatingInterval::point(Rational::zero()));
    let pos = descartes_positive(&p, k);
    neg.chain(zero).chain(pos).map(|iv| detect_rational(orig, clear_endpoints(orig, iv))).collect()
}

/// Shrinks an open interval until neither end is a root of `p`. Descartes
/// intervals may end at a root split off elsewhere (zero, or a midpoint),
/// and bisection by sign needs `p` to change sign across the interval.
fn clear_endpoints(p: &UPoly, iv: IsolatingInterval) -> IsolatingInterval {
    if iv.exact || (p.sign_at(&iv.lo) != 0 && p.sign_at(&iv.hi) != 0) {
        return iv;
    }
    // without the endpoint roots, p changes sign inside
    let mut q = p.clone();
    for e in [&iv.lo, &iv.hi] {
        if p.sign_at(e) == 0 {
            let linear = UPoly::new(vec![-e.numer().clone(), e.denom().clone()]);
            q = q.div_exact(&linear).expect("rational root divides");
        }
    }
    let mut iv = iv;
    while p.sign_at(&iv.lo) == 0 || p.sign_at(&iv.hi) == 0 {
        iv = bisect(&q, iv);
        if iv.exact {
            break;
        }
    }
    iv
}

/// Roots of `p` in `(0, 2^k)`, ascending; `p(0) != 0`.
fn descartes_positive(p: &UPoly, k: u64) -> Vec<IsolatingInterval> {
    let scale = Rational::from_integer(BigInt::one() << k as usize);
    let at = |c: &BigInt, depth: u64| Rational::new(c.clone(), BigInt::one() << depth as usize) * &scale;
    let mut out = Vec::new();
    // (q, c, depth): q on (0, 1) represents p on (c/2^depth, (c+1)/2^depth)
    let mut stack = vec![(p.scale_pow2(k), BigInt::zero(), 0u64)];
    while let Some((q, c, depth)) = stack.pop() {
        if q.degree() == 0 {
            continue;
        }
        match q.descartes_unit() {
            0 => {}
            1 => out.push(IsolatingInterval::open(at(&c, depth), at(&(&c + 1u32), depth))),
            _ => {
                // A root at the midpoint would sit on the children's shared
                // endpoint; split it off so every open interval is root-free
                // at its ends.
                let half = UPoly::from_i64(&[-1, 2]);
                let mut q = q;
                let mid = &c * 2u32 + 1u32;
                if q.sign_at(&Rational::new(BigInt::one(), BigInt::from(2))) == 0 {
                    out.push(IsolatingInterval::point(at(&mid, depth + 1)));
                    q = q.div_exact(&half).expect("midpoint root divides");
                }
                let left = q.halve();
                let right = left.taylor_shift1();
                stack.push((right, mid, depth + 1));
                stack.push((left, c * 2u32, depth + 1));
            }
        }
    }
    out.sort_by(|a, b| (&a.lo, &a.hi).cmp(&(&b.lo, &b.hi)));
    out
}

/// Replaces an open interval by the exact root when that root is rational.
/// Any rational root `a/b` of an integer polynomial has `b | lc`, so once the
/// interval is narrower than `1/|lc|` at most one candidate `m/lc` remains.
fn detect_rational(p: &UPoly, iv: IsolatingInterval) -> IsolatingInterval {
    if iv.exact {
        return iv;
    }
    let lc = Rational::from_integer(p.lc().abs());
    let target = lc.recip();
    let mut iv = iv;
    while iv.width() >= target {
        iv = bisect(p, iv);
        if iv.exact {
            return iv;
        }
    }
    let lo_scaled = (&iv.lo * &lc).floor() + Rational::one();
    if lo_scaled < &iv.hi * &lc {
        let cand = lo_scaled / &lc;
        if p.sign_at(&cand) == 0 {
            return IsolatingInterval::point(cand);
        }
    }
    iv
}

impl IsolatingInterval {
    /// Halves an interval isolating a simple root of `p` (exact intervals
    /// are returned unchanged).
    pub fn bisected(&self, p: &UPoly) -> IsolatingInterval {
        if self.exact {
            self.clone()
        } else {
            bisect(p, self.clone())
        }
    }

    /// Whether the two intervals share a point (open interiors, or an exact
    /// root inside the other).
    pub fn overlaps(&self, other: &IsolatingInterval) -> bool {
        match (self.exact, other.exact) {
            (true, true) => self.lo == other.lo,
            (true, false) => other.lo < self.lo && self.lo < other.hi,
            (false, true) => self.lo < other.lo && other.lo < self.hi,
            (false, false) => std::cmp::max(&self.lo, &other.lo) < std::cmp::min(&self.hi, &other.hi),
        }
    }
}

/// One bisection step on a simple root of `p`.
fn bisect(p: &UPoly, iv: IsolatingInterval) -> IsolatingInterval {
    debug_assert!(p.sign_at(&iv.lo) != 0, "bisection from a root");
    let m = iv.midpoint();
    let sm = p.sign_at(&m);
    if sm == 0 {
        return IsolatingInterval::point(m);
    }
    if p.sign_at(&iv.lo) * sm < 0 {
        IsolatingInterval::open(iv.lo, m)
    } else {
        IsolatingInterval::open(m, iv.hi)
    }
}

/// A real algebraic number: the unique root of a square-free integer
/// polynomial inside an isolating interval.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    defining: UPoly,
    interval: IsolatingInterval,
}

impl AlgebraicNumber {
    /// `defining` must be square-free with exactly one root in `interval`.
    pub fn new(defining: UPoly, interval: IsolatingInterval) -> Self {
        note_algebraic_allocation();
        debug_assert!(interval.exact || changes_sign(&defining, &interval.lo, &interval.hi), "interval does not isolate a root");
        AlgebraicNumber { defining: defining.primitive(), interval }
    }

    /// All real roots of `p` as algebraic numbers, ascending.
    pub fn roots_of(p: &Polynomial) -> Result<Vec<AlgebraicNumber>, RootError> {
        if p.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        let u = UPoly::from_polynomial(p).ok_or(RootError::NotUnivariate)?.squarefree();
        Ok(isolate_upoly(&u).into_iter().map(|iv| AlgebraicNumber::new(u.clone(), iv)).collect())
    }

    pub fn defining(&self) -> &UPoly {
        &self.defining
    }

    pub fn interval(&self) -> &IsolatingInterval {
        &self.interval
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.interval.exact.then_some(&self.interval.lo)
    }

    /// Halves the interval once (in place).
    pub(crate) fn bisect_once(&mut self) {
        if !self.interval.exact {
            self.interval = bisect(&self.defining, self.interval.clone());
        }
    }

    /// Same root, interval no wider than `width`.
    pub fn refine(&self, width: &Rational) -> AlgebraicNumber {
        assert!(width.is_positive(), "refinement width must be positive");
        let mut out = self.clone();
        while !out.interval.exact && &out.interval.width() > width {
            out.bisect_once();
        }
        out
    }

    /// Closed enclosure of the value.
    pub fn enclosure(&self) -> Interval {
        Interval::new(self.interval.lo.clone(), self.interval.hi.clone())
    }

    /// `f64` approximation, for display and numeric oracles.
    pub fn to_f64(&self) -> f64 {
        let r = self.refine(&Rational::new(BigInt::one(), BigInt::one() << 60));
        use num_traits::ToPrimitive;
        r.interval.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.defining.to_polynomial(1, 0);
        if self.interval.exact {
            write!(f, "{}", self.interval.lo)
        } else {
            write!(f, "root({}, ({}, {}))", p.to_text(&["x"]), self.interval.lo, self.interval.hi)
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A real number that is either rational or algebraic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Real {
    Rational(Rational),
    Algebraic(AlgebraicNumber),
}

impl Real {
    pub fn int(n: i64) -> Real {
        Real::Rational(Rational::from_integer(BigInt::from(n)))
    }

    fn normalize(&self) -> Real {
        match self {
            Real::Algebraic(a) if a.interval.exact => Real::Rational(a.interval.lo.clone()),
            other => other.clone(),
        }
    }

    /// Lower and upper bounds of the current enclosure.
    fn bounds(&self) -> (Rational, Rational) {
        match self {
            Real::Rational(r) => (r.clone(), r.clone()),
            Real::Algebraic(a) => (a.interval.lo.clone(), a.interval.hi.clone()),
        }
    }

    fn bisect_once(&mut self) {
        if let Real::Algebraic(a) = self {
            a.bisect_once();
            if a.interval.exact {
                *self = self.normalize();
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            Real::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Algebraic(a) => a.to_f64(),
        }
    }
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Self {
        Real::Rational(r)
    }
}

impl From<AlgebraicNumber> for Real {
    fn from(a: AlgebraicNumber) -> Self {
        Real::Algebraic(a).normalize()
    }
}

/// `sign(p(lo)) != sign(p(hi))` for a square-free `p` with no root at the
/// endpoints, i.e. `p` has a root strictly inside.
fn changes_sign(p: &UPoly, lo: &Rational, hi: &Rational) -> bool {
    p.sign_at(lo) * p.sign_at(hi) < 0
}

/// Exact comparison of two real numbers.
pub fn compare(a: &Real, b: &Real) -> Ordering {
    let (mut a, mut b) = (a.normalize(), b.normalize());
    match (&a, &b) {
        (Real::Rational(x), Real::Rational(y)) => return x.cmp(y),
        (Real::Algebraic(x), Real::Rational(r)) => return compare_alg_rat(x, r),
        (Real::Rational(r), Real::Algebraic(y)) => return compare_alg_rat(y, r).reverse(),
        _ => {}
    }
    let (Real::Algebraic(x), Real::Algebraic(y)) = (&a, &b) else { unreachable!() };
    let g = x.defining.gcd(&y.defining);
    if g.degree() > 0 {
        let lo = std::cmp::max(&x.interval.lo, &y.interval.lo).clone();
        let hi = std::cmp::min(&x.interval.hi, &y.interval.hi).clone();
        if lo < hi && changes_sign(&g, &lo, &hi) {
            return Ordering::Equal;
        }
    }
    loop {
        let ((alo, ahi), (blo, bhi)) = (a.bounds(), b.bounds());
        if ahi < blo {
            return Ordering::Less;
        }
        if bhi < alo {
            return Ordering::Greater;
        }
        if let (Real::Rational(_), _) | (_, Real::Rational(_)) = (&a, &b) {
            return compare(&a, &b);
        }
        a.bisect_once();
        b.bisect_once();
    }
}

fn compare_alg_rat(a: &AlgebraicNumber, r: &Rational) -> Ordering {
    if let Some(x) = a.as_rational() {
        return x.cmp(r);
    }
    let iv = &a.interval;
    if r <= &iv.lo {
        return Ordering::Greater;
    }
    if r >= &iv.hi {
        return Ordering::Less;
    }
    let sr = a.defining.sign_at(r);
    if sr == 0 {
        return Ordering::Equal;
    }
    if a.defining.sign_at(&iv.lo) * sr < 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Exact sign of a univariate polynomial at a real number.
pub fn sign_at(p: &Polynomial, a: &Real) -> i32 {
    let Some(u) = UPoly::from_polynomial(p) else {
        panic!("sign_at expects a univariate polynomial");
    };
    sign_at_upoly(&u, a)
}

pub fn sign_at_upoly(p: &UPoly, a: &Real) -> i32 {
    upoly_sign(p, a, true)
}

/// Sign of `p` at `a` when `p(a) != 0` is known; skips the exact zero test.
pub(crate) fn nonzero_sign_at_upoly(p: &UPoly, a: &Real) -> i32 {
    upoly_sign(p, a, false)
}

fn upoly_sign(p: &UPoly, a: &Real, may_vanish: bool) -> i32 {
    if p.is_zero() {
        return 0;
    }
    match a.normalize() {
        Real::Rational(r) => p.sign_at(&r),
        Real::Algebraic(mut x) => {
            // a few cheap refinements settle most nonzero signs; the exact
            // zero test comes only after that
            let mut zero_checked = !may_vanish;
            for round in 0.. {
                if let Some(r) = x.as_rational() {
                    return p.sign_at(r);
                }
                if let Some(s) = x.enclosure().eval_upoly(p).sign() {
                    return s;
                }
                if round >= 8 && !zero_checked {
                    let g = p.gcd(&x.defining);
                    if g.degree() > 0 && changes_sign(&g, &x.interval.lo, &x.interval.hi) {
                        return 0;
                    }
                    zero_checked = true;
                }
                x.bisect_once();
            }
            unreachable!()
        }
    }
}

/// Boundary of a sector: a finite real or one of the infinities.
#[derive(Clone, Debug)]
pub enum Boundary {
    NegInfinity,
    Finite(Real),
    PosInfinity,
}

/// A real number known through shrinking rational enclosures.
pub trait Enclosure {
    /// Closed bounds `(lo, hi)`; `lo == hi` means the value is exact.
    fn bounds(&self) -> (Rational, Rational);
    /// Shrinks the enclosure; repeated calls converge to the value.
    fn tighten(&mut self);
}

impl Enclosure for Real {
    fn bounds(&self) -> (Rational, Rational) {
        Real::bounds(self)
    }

    fn tighten(&mut self) {
        self.bisect_once();
    }
}

/// Simplest rational strictly between two enclosed reals (`None` is an
/// infinite side). The caller guarantees `lo < hi`.
pub fn simplest_between_enclosures(
    mut lo: Option<&mut dyn Enclosure>,
    mut hi: Option<&mut dyn Enclosure>,
) -> Rational {
    loop {
        let (lo_out, lo_in) = lo.as_ref().map(|e| e.bounds()).unzip();
        let (hi_in, hi_out) = hi.as_ref().map(|e| e.bounds()).unzip();
        // the true interval contains (lo_in, hi_in) and lies inside (lo_out, hi_out)
        let inner_ok = match (&lo_in, &hi_in) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        };
        if inner_ok {
            let s_in = simplest_between(lo_in.as_ref(), hi_in.as_ref());
            if s_in == simplest_between(lo_out.as_ref(), hi_out.as_ref()) {
                return s_in;
            }
        }
        if let Some(e) = lo.as_deref_mut() {
            e.tighten();
        }
        if let Some(e) = hi.as_deref_mut() {
            e.tighten();
        }
    }
}

/// The simplest rational strictly between `lo` and `hi`: minimal
/// denominator, then minimal absolute numerator. For a one-sided unbounded
/// range this is the integer of least magnitude beyond the finite bound.
pub fn sample_between(lo: &Boundary, hi: &Boundary) -> Result<Rational, RootError> {
    match (lo, hi) {
        (Boundary::PosInfinity, _) | (_, Boundary::NegInfinity) => return Err(RootError::EmptyInterval),
        (Boundary::Finite(a), Boundary::Finite(b)) if compare(a, b) != Ordering::Less => {
            return Err(RootError::EmptyInterval)
        }
        _ => {}
    }
    let finite = |b: &Boundary| match b {
        Boundary::Finite(r) => Some(r.normalize()),
        _ => None,
    };
    let (mut a, mut b) = (finite(lo), finite(hi));
    Ok(simplest_between_enclosures(
        a.as_mut().map(|r| r as &mut dyn Enclosure),
        b.as_mut().map(|r| r as &mut dyn Enclosure),
    ))
}

/// Simplest rational in the open interval `(a, b)`; `None` is infinite.
pub fn simplest_between(a: Option<&Rational>, b: Option<&Rational>) -> Rational {
    let zero = Rational::zero();
    if let (Some(a), Some(b)) = (a, b) {
        assert!(a < b, "simplest_between needs a < b");
    }
    let below_zero = a.is_none_or(|a| a < &zero);
    let above_zero = b.is_none_or(|b| b > &zero);
    if below_zero && above_zero {
        return zero;
    }
    if !below_zero {
        simplest_positive(a.unwrap().clone(), b.cloned())
    } else {
        -simplest_positive(-b.unwrap().clone(), a.map(|a| -a.clone()))
    }
}

/// Simplest rational in `(a, b)` with `a >= 0`.
fn simplest_positive(a: Rational, b: Option<Rational>) -> Rational {
    let fl = a.floor();
    let next = &fl + Rational::one();
    if b.as_ref().is_none_or(|b| &next < b) {
        return next;
    }
    let b = b.unwrap();
    // a, b in [fl, fl + 1]: write x = fl + 1/y
    let y_lo = (&b - &fl).recip();
    let y_hi = if a == fl { None } else { Some((&a - &fl).recip()) };
    let y = simplest_positive(y_lo, y_hi);
    fl + y.recip()
}
