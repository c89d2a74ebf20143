//! Dense univariate polynomials over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Polynomial, Rational};

/// Coefficients in ascending powers; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(pub Vec<BigInt>);

impl UPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Converts a polynomial depending on at most one variable, clearing
    /// denominators by a positive factor (signs are preserved). Returns
    /// `None` if two or more variables occur.
    pub fn from_polynomial(p: &Polynomial) -> Option<UPoly> {
        let vars = p.variables();
        if vars.len() > 1 {
            return None;
        }
        if p.is_zero() {
            return Some(UPoly(Vec::new()));
        }
        let p = p.scale(&p.integer_content().recip());
        let var = vars.first().copied().unwrap_or(0);
        let mut c = vec![BigInt::zero(); p.degree(var) as usize + 1];
        for (m, v) in p.terms() {
            c[m.0[var] as usize] = v.numer().clone();
        }
        Some(UPoly::new(c))
    }

    pub fn to_polynomial(&self, nvars: usize, var: usize) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            self.0.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; nvars];
                e[var] = i as u32;
                (e, Rational::from_integer(c.clone()))
            }),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("zero polynomial has no leading coefficient")
    }

    /// `sum c_i n^i d^(deg-i)`, i.e. `d^deg * p(n/d)`.
    fn horner_homogeneous(&self, n: &BigInt, d: &BigInt) -> BigInt {
        let deg = self.degree();
        let mut acc = self.0[deg].clone();
        let mut dp = BigInt::one();
        for i in (0..deg).rev() {
            dp *= d;
            acc = acc * n + &self.0[i] * &dp;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let scaled = self.horner_homogeneous(x.numer(), x.denom());
        Rational::new(scaled, num_traits::pow(x.denom().clone(), self.degree()))
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        if self.is_zero() {
            return 0;
        }
        sign(&self.horner_homogeneous(x.numer(), x.denom()))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        UPoly(self.0.iter().map(|c| c / &g).collect())
    }

    fn prem(a: &UPoly, b: &UPoly) -> UPoly {
        let db = b.degree();
        let lcb = b.lc();
        let mut r = a.0.clone();
        while r.len() > db && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let k = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= lcb;
            }
            for (i, bc) in b.0.iter().enumerate() {
                r[i + k] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = UPoly::prem(&a, &b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Exact quotient over `Q`, scaled back to a primitive integer polynomial.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let mut r: Vec<Rational> = self.0.iter().cloned().map(Rational::from_integer).collect();
        let dd = d.degree();
        let lcd = Rational::from_integer(d.lc().clone());
        if r.len() < d.0.len() {
            return if r.is_empty() { Some(UPoly(vec![])) } else { None };
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lcd;
            for (i, dc) in d.0.iter().enumerate() {
                r[k + i] -= &c * Rational::from_integer(dc.clone());
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let l = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Some(UPoly::new(q.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()).primitive())
    }

    /// Square-free part (primitive).
    pub fn squarefree(&self) -> UPoly {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides")
    }

    /// `p(x + 1)`.
    pub fn taylor_shift1(&self) -> UPoly {
        let mut c = self.0.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        UPoly(c)
    }

    /// `2^deg * p(x/2)`.
    pub fn halve(&self) -> UPoly {
        let d = self.degree();
        UPoly(self.0.iter().enumerate().map(|(i, c)| c << (d - i)).collect())
    }

    /// `p(2^k x)`.
    pub fn scale_pow2(&self, k: u64) -> UPoly {
        UPoly(self.0.iter().enumerate().map(|(i, c)| c << (k as usize * i)).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> UPoly {
        UPoly(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn reversed(&self) -> UPoly {
        UPoly::new(self.0.iter().rev().cloned().collect())
    }

    pub fn sign_variations(&self) -> usize {
        let mut last = 0;
        let mut v = 0;
        for c in &self.0 {
            let s = sign(c);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of sign variations of `(x+1)^d p(1/(x+1))`, an upper bound on
    /// (and parity match for) the roots of `p` in `(0, 1)`.
    pub fn descartes_unit(&self) -> usize {
        self.reversed().taylor_shift1().sign_variations()
    }

    /// Smallest `k` with every root of `p` in `(-2^k, 2^k)` (Cauchy bound).
    pub fn root_bound_log2(&self) -> u64 {
        let lc = self.lc().abs();
        let max = self.0[..self.0.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
        // 1 + max|a_i| / |a_n| < 2^k
        let q = max.div_ceil(&lc) + 1u32;
        q.bits()
    }
}

pub(crate) fn sign(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn evaluation_and_sign() {
        let p = UPoly::from_i64(&[-1, 1, 1]); // x^2 + x - 1
        assert_eq!(p.eval(&rat(1, 2)), rat(-1, 4));
        assert_eq!(p.sign_at(&rat(1, 2)), -1);
        assert_eq!(p.sign_at(&rat(1, 1)), 1);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = UPoly::from_i64(&[-1, 0, 1]);
        let b = UPoly::from_i64(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), UPoly::from_i64(&[1, 1]));
        let sq = UPoly::from_i64(&[1, -2, -1, 2, 1]); // (x^2+x-1)^2
        assert_eq!(sq.squarefree(), UPoly::from_i64(&[-1, 1, 1]));
    }

    #[test]
    fn shifts() {
        let p = UPoly::from_i64(&[0, 0, 1]);
        assert_eq!(p.taylor_shift1(), UPoly::from_i64(&[1, 2, 1]));
        assert_eq!(p.halve(), UPoly::from_i64(&[0, 0, 1]));
        assert_eq!(UPoly::from_i64(&[3, 1]).halve(), UPoly::from_i64(&[6, 1]));
    }
}
