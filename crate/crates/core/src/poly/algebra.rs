//! Resultants, gcds and square-free bases over `Q[x_0, ..., x_{n-1}]`.
//!
//! All routines view a polynomial as univariate in one distinguished
//! variable with coefficients in the remaining ones (`Vec<Polynomial>`,
//! index = power) and run subresultant pseudo-remainder sequences there, so
//! every intermediate division is exact.

use std::cmp::Ordering;

use num_traits::One;

use super::{PolyError, Polynomial};

type Dense = Vec<Polynomial>;

fn trim(v: &mut Dense) {
    while v.last().is_some_and(Polynomial::is_zero) {
        v.pop();
    }
}

fn deg(v: &Dense) -> usize {
    v.len() - 1
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = deg(b);
    if a.len() < b.len() {
        return a.clone();
    }
    let lcb = b.last().unwrap();
    let mut r = a.clone();
    let mut e = deg(a) - db + 1;
    while !r.is_empty() && r.len() > db {
        let lr = r.last().unwrap().clone();
        let k = deg(&r) - db;
        for c in r.iter_mut() {
            *c = lcb * &*c;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = &lr * bc;
            r[i + k] = &r[i + k] - &t;
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &f * &*c;
        }
    }
    r
}

fn div_all(v: &Dense, d: &Polynomial) -> Dense {
    v.iter()
        .map(|c| c.div_exact(d).expect("subresultant division must be exact"))
        .collect()
}

/// Runs the subresultant PRS of `a`, `b` (dense in the main variable,
/// `deg a >= deg b >= 1`), calling `visit` with every new remainder.
/// Returns `(s, g, h, last_a, last_b)` state needed by the resultant.
fn subresultant_loop(
    mut a: Dense,
    mut b: Dense,
    mut visit: impl FnMut(&Dense),
) -> (bool, Dense, Dense, Polynomial, bool) {
    let nvars = a[0].nvars();
    let mut g = Polynomial::one(nvars);
    let mut h = Polynomial::one(nvars);
    let mut flip = false;
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            flip = !flip;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return (flip, a, b, h, true);
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = div_all(&r, &divisor);
        visit(&b);
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).div_exact(&h.pow(delta - 1)).expect("exact h update"),
        };
        if b.len() == 1 {
            return (flip, a, b, h, false);
        }
    }
}

/// Subresultant polynomial remainder sequence of `p` and `q` in `var`,
/// starting with the operand of larger degree.
pub fn subresultant_prs(p: &Polynomial, q: &Polynomial, var: usize) -> Vec<Polynomial> {
    let nvars = p.nvars();
    let (mut a, mut b) = (p.coeffs_in(var), q.coeffs_in(var));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut out = Vec::new();
    if a.is_empty() {
        return out;
    }
    out.push(Polynomial::from_coeffs(nvars, var, &a));
    if b.is_empty() {
        return out;
    }
    out.push(Polynomial::from_coeffs(nvars, var, &b));
    if b.len() == 1 {
        return out;
    }
    subresultant_loop(a, b, |r| out.push(Polynomial::from_coeffs(nvars, var, r)));
    out
}

/// Sylvester resultant of `p` and `q` with respect to `var`.
pub fn resultant(p: &Polynomial, q: &Polynomial, var: usize) -> Result<Polynomial, PolyError> {
    let nvars = p.nvars();
    if p.is_zero() || q.is_zero() {
        return Ok(Polynomial::zero(nvars));
    }
    let (mut a, mut b) = (p.coeffs_in(var), q.coeffs_in(var));
    if a.len() == 1 && b.len() == 1 {
        return Err(PolyError::InvalidMainVariable(var));
    }
    let mut negate = false;
    if a.len() < b.len() {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        let r = b[0].pow(deg(&a) as u32);
        return Ok(if negate { -r } else { r });
    }
    let (flip, a, b, h, vanished) = subresultant_loop(a, b, |_| {});
    if vanished {
        return Ok(Polynomial::zero(nvars));
    }
    let da = deg(&a) as u32;
    let num = b[0].pow(da);
    let r = if da == 1 { num } else { num.div_exact(&h.pow(da - 1)).expect("exact final step") };
    Ok(if negate ^ flip { -r } else { r })
}

/// `(-1)^(d(d-1)/2) * res(p, dp/dvar) / lc(p)`.
pub fn discriminant(p: &Polynomial, var: usize) -> Result<Polynomial, PolyError> {
    let d = p.degree(var);
    if d < 2 {
        return Err(PolyError::DegreeTooLow { var, degree: d });
    }
    let r = resultant(p, &p.derivative(var), var)?;
    let r = r.div_exact(&p.lc_in(var))?;
    Ok(if (d as u64 * (d as u64 - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Gcd over `Q`, normalized to an integer polynomial with content 1 and
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let nvars = a.nvars();
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(nvars);
    }
    let v = a.main_var().max(b.main_var()).unwrap();
    if !a.involves(v) {
        return gcd(a, &coeff_gcd(b, v));
    }
    if !b.involves(v) {
        return gcd(&coeff_gcd(a, v), b);
    }
    let (ca, pa) = content_primitive(a, v);
    let (cb, pb) = content_primitive(b, v);
    let gc = gcd(&ca, &cb);
    let prs = subresultant_prs(&pa, &pb, v);
    let last = prs.last().unwrap();
    let g = if last.degree(v) == 0 { Polynomial::one(nvars) } else { content_primitive(last, v).1 };
    (&gc * &g).normalized()
}

fn coeff_gcd(p: &Polynomial, var: usize) -> Polynomial {
    let mut g = Polynomial::zero(p.nvars());
    for c in p.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Splits `p = content * primitive` with respect to `var`: the content is
/// free of `var`, the primitive part is an integer polynomial whose
/// coefficients in `var` have no common factor and whose leading
/// coefficient is positive.
pub fn content_primitive(p: &Polynomial, var: usize) -> (Polynomial, Polynomial) {
    assert!(!p.is_zero(), "content of the zero polynomial");
    let g = coeff_gcd(p, var);
    let prim = p.div_exact(&g).expect("content divides").normalized();
    let content = p.div_exact(&prim).expect("primitive part divides");
    (content, prim)
}

/// Square-free part, normalized.
pub fn squarefree_part(p: &Polynomial) -> Polynomial {
    let mut pieces = Vec::new();
    squarefree_pieces(p, &mut pieces);
    pieces.iter().fold(Polynomial::one(p.nvars()), |acc, q| &acc * q).normalized()
}

fn squarefree_pieces(p: &Polynomial, out: &mut Vec<Polynomial>) {
    if p.is_constant() {
        return;
    }
    let v = p.main_var().unwrap();
    let (c, pp) = content_primitive(p, v);
    squarefree_pieces(&c, out);
    let g = gcd(&pp, &pp.derivative(v));
    out.push(pp.div_exact(&g).expect("gcd divides").normalized());
}

/// Total order used to list factor sets deterministically.
pub(crate) fn canonical_cmp(a: &Polynomial, b: &Polynomial) -> Ordering {
    a.main_var()
        .cmp(&b.main_var())
        .then_with(|| {
            let v = a.main_var().unwrap_or(0);
            a.degree(v).cmp(&b.degree(v))
        })
        .then_with(|| a.total_degree().cmp(&b.total_degree()))
        .then_with(|| a.num_terms().cmp(&b.num_terms()))
        .then_with(|| {
            let ta = a.terms().rev();
            let tb = b.terms().rev();
            for ((ma, ca), (mb, cb)) in ta.zip(tb) {
                let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
}

/// Pairwise-coprime, square-free, primitive integer polynomials whose
/// product vanishes exactly where the product of the inputs does.
/// Constants are dropped; contents with respect to each main variable are
/// split off and refined along with everything else.
pub fn squarefree_basis(ps: &[Polynomial]) -> Vec<Polynomial> {
    let mut pieces = Vec::new();
    for p in ps {
        if !p.is_zero() {
            squarefree_pieces(p, &mut pieces);
        }
    }
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in pieces {
        insert_coprime(&mut basis, p);
    }
    basis.sort_by(canonical_cmp);
    basis
}

fn insert_coprime(basis: &mut Vec<Polynomial>, p: Polynomial) {
    let mut pending = vec![p];
    while let Some(mut p) = pending.pop() {
        if p.is_constant() {
            continue;
        }
        let mut i = 0;
        while i < basis.len() {
            if basis[i] == p {
                p = Polynomial::one(p.nvars());
                break;
            }
            let g = gcd(&basis[i], &p);
            if !g.is_constant() {
                let b = basis.swap_remove(i);
                pending.push(b.div_exact(&g).unwrap().normalized());
                pending.push(g.clone());
                p = p.div_exact(&g).unwrap().normalized();
                if p.is_constant() {
                    break;
                }
                i = 0;
                continue;
            }
            i += 1;
        }
        if !p.is_constant() {
            basis.push(p);
        }
    }
}

impl Polynomial {
    /// `true` if the coefficient field element is one (used by callers that
    /// divide by leading coefficients).
    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}
