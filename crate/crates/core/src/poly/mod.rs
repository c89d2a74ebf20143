//! Exact multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] lives in a fixed number of positional variables. Terms are
//! kept in a sorted map keyed by exponent vectors; the key order is
//! lexicographic with the *highest* variable index most significant, so the
//! last entry of the map is the leading term with respect to the main
//! (highest) variable. Names are attached only when parsing or printing.

mod algebra;
mod parse;

pub use algebra::{
    content_primitive, discriminant, gcd, resultant, squarefree_basis, squarefree_part,
    subresultant_prs,
};
pub use parse::{parse_polynomial, ParseError, ParseErrorKind};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division leaves a nonzero remainder")]
    NotDivisible,
    #[error("neither operand depends on variable {0}")]
    InvalidMainVariable(usize),
    #[error("degree in variable {var} is {degree}, need at least 2")]
    DegreeTooLow { var: usize, degree: u32 },
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// No zero coefficient is ever stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The polynomial `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[var] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial(e), Rational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().0.iter().all(|&e| e == 0),
            _ => false,
        }
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Highest-index variable the polynomial depends on.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.degree(v) > 0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Variables with positive degree, ascending.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }

    /// Coefficient of the lexicographically leading term.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Dense coefficient list in `var`: entry `i` multiplies `var^i`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Polynomial> {
        let d = self.degree(var) as usize;
        let mut out = vec![Polynomial::zero(self.nvars); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.clone();
            e.0[var] = 0;
            out[k].terms.insert(e, c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in); coefficients must be free of `var`.
    pub fn from_coeffs(nvars: usize, var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                debug_assert_eq!(m.0[var], 0);
                let mut e = m.clone();
                e.0[var] = k as u32;
                p.terms.insert(e, v.clone());
            }
        }
        p
    }

    /// Leading coefficient with respect to `var`, as a polynomial free of `var`.
    pub fn lc_in(&self, var: usize) -> Polynomial {
        self.coeffs_in(var).pop().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.clone();
            e.0[var] = k - 1;
            p.terms.insert(e, c * Rational::from_integer(BigInt::from(k)));
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `var := value`.
    pub fn substitute(&self, var: usize, value: &Rational) -> Polynomial {
        if !self.involves(var) {
            return self.clone();
        }
        let mut powers: Vec<Rational> = vec![Rational::one()];
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut e = m.clone();
            e.0[var] = 0;
            out.add_term(e, c * &powers[k]);
        }
        out
    }

    /// Exact substitution of the variables assigned in `point`.
    pub fn evaluate(&self, point: &[(usize, Rational)]) -> Polynomial {
        point.iter().fold(self.clone(), |p, (v, r)| p.substitute(*v, r))
    }

    /// Evaluates at a fully specified rational point.
    pub fn eval_all(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.0.iter().zip(values) {
                if *e > 0 {
                    t *= num_traits::pow(x.clone(), *e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division; fails with [`PolyError::NotDivisible`] on a nonzero remainder.
    pub fn div_exact(&self, d: &Polynomial) -> Result<Polynomial, PolyError> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let (dm, dc) = d.terms.iter().next_back().unwrap();
        let dc_inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            let qm = rm.checked_div(dm).ok_or(PolyError::NotDivisible)?;
            let qc = rc * &dc_inv;
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.terms.insert(qm, qc);
        }
        Ok(quot)
    }

    /// Renames variables: variable `i` becomes `perm[i]` in a space of `nvars` variables.
    pub fn remap(&self, perm: &[usize], nvars: usize) -> Polynomial {
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e[perm[i]] = k;
                }
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Least common multiple of coefficient denominators.
    fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators once denominators are cleared.
    pub fn integer_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let l = self.denominator_lcm();
        let g = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&l / c.denom()))));
        Rational::new(g, l)
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.integer_content();
        if self.leading_coeff().unwrap().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Coefficient magnitudes as `f64`, for numeric oracles only.
    pub fn to_f64_terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.0.clone(), c.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Canonical text: graded-lexicographic term order, earlier names more significant.
    pub fn to_text(&self, names: &[impl AsRef<str>]) -> String {
        assert!(names.len() >= self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            b.total_degree().cmp(&a.total_degree()).then_with(|| b.0.cmp(&a.0))
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let n = names[v].as_ref();
                    if e == 1 {
                        n.to_string()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            if factors.is_empty() {
                out.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    fn default_names(&self) -> Vec<String> {
        (0..self.nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&self.default_names()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&self.default_names()))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable context mismatch");
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable context mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable context mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Builds a rational from a pair of machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn cancellation_and_zero() {
        assert_eq!(p("x - y^2") + p("y^2"), p("x"));
        assert!((p("x^2 + y") * Polynomial::zero(2)).is_zero());
    }

    #[test]
    fn square_and_exact_root() {
        let f = p("x^2 + x - 1");
        let sq = &f * &f;
        assert_eq!(sq, p("x^4 + 2*x^3 - x^2 - 2*x + 1"));
        assert_eq!(sq.div_exact(&f).unwrap(), f);
        assert_eq!(p("x^2 + 1").div_exact(&p("x + 1")), Err(PolyError::NotDivisible));
    }

    #[test]
    fn evaluation() {
        let g = p("x^2 + y^2 - 1");
        assert_eq!(g.evaluate(&[(0, rat(4, 5))]), p("y^2") - Polynomial::constant(2, rat(9, 25)));
        assert_eq!(g.evaluate(&[]), g);
        assert!(p("x - y^2").evaluate(&[(0, rat(0, 1)), (1, rat(0, 1))]).is_zero());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("y^2 - 1 + x^2").to_text(&["x", "y"]), "x^2 + y^2 - 1");
        assert_eq!(p("-3*x*y + 2/4").to_text(&["x", "y"]), "-3*x*y + 1/2");
        assert_eq!(Polynomial::zero(2).to_text(&["x", "y"]), "0");
    }

    #[test]
    fn coefficient_views_round_trip() {
        let f = p("x*y^2 + x^2 - 3*y + 7");
        let cs = f.coeffs_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], p("x"));
        assert_eq!(Polynomial::from_coeffs(2, 1, &cs), f);
        assert_eq!(f.lc_in(1), p("x"));
        assert_eq!(f.derivative(1), p("2*x*y - 3"));
    }

    #[test]
    fn normalization_makes_integer_primitive() {
        // y is the most significant variable, so its term leads
        let f = p("-1/2*x^2 + 3/4*y");
        assert_eq!(f.normalized(), p("3*y - 2*x^2"));
    }
}
