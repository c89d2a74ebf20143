//! Closed rational intervals, used as sign filters before exact tests.

use num_traits::{One, Signed, Zero};

use crate::poly::{Polynomial, Rational};
use crate::roots::UPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(r: Rational) -> Self {
        Interval { lo: r.clone(), hi: r }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign of every point in the interval, if it is uniform and nonzero.
    /// A degenerate interval at zero reports `Some(0)`.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Interval { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    /// Tight enclosure of `x^n` (even powers are non-negative).
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(Rational::one());
        }
        let a = num_traits::pow(self.lo.clone(), n as usize);
        let b = num_traits::pow(self.hi.clone(), n as usize);
        if n % 2 == 1 {
            Interval { lo: a, hi: b }
        } else if self.contains_zero() {
            Interval { lo: Rational::zero(), hi: a.max(b) }
        } else {
            Interval { lo: a.clone().min(b.clone()), hi: a.max(b) }
        }
    }

    /// Horner evaluation of a univariate integer polynomial.
    pub fn eval_upoly(&self, p: &UPoly) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for c in p.0.iter().rev() {
            acc = acc.mul(self);
            let c = Rational::from_integer(c.clone());
            acc = Interval { lo: &acc.lo + &c, hi: &acc.hi + &c };
        }
        acc
    }

    /// Term-wise enclosure of `p` over a box; `boxes[v]` is the range of
    /// variable `v` (unused variables may hold anything).
    pub fn eval_poly(p: &Polynomial, boxes: &[Interval]) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for (m, c) in p.terms() {
            let mut t = Interval::point(c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&boxes[v].powi(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn enclosures_contain_values() {
        let x = Interval::new(rat(-1, 2), rat(1, 1));
        assert_eq!(x.powi(2), Interval::new(rat(0, 1), rat(1, 1)));
        let p = UPoly::from_i64(&[-1, 1, 1]);
        let e = Interval::new(rat(1, 1), rat(2, 1)).eval_upoly(&p);
        assert_eq!(e.sign(), Some(1));
        assert_eq!(x.eval_upoly(&p).sign(), None);
    }
}
