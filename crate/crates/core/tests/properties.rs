use std::cmp::Ordering;

use layered_cad::cad::{build_cad, one_layered};
use layered_cad::cli::report::{Histogram, RunReport};
use layered_cad::combinatorics::{
    enumerate_indices, generating_counts, lemma1_counts, DimensionDistribution, LevelProfile,
};
use layered_cad::heuristics::{predict_total, FractionTable};
use layered_cad::order::VariableOrder;
use layered_cad::poly::{parse_polynomial, resultant, Polynomial, Rational};
use layered_cad::roots::{compare, isolate_roots, simplest_between, AlgebraicNumber, Real};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Univariate polynomial from ascending integer coefficients.
fn upoly(c: &[i64]) -> Polynomial {
    Polynomial::from_terms(1, c.iter().enumerate().map(|(i, &a)| (vec![i as u32], q(a))))
}

/// Ascending coefficients with a nonzero leading one.
fn coeffs(max_degree: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_degree).prop_flat_map(|d| {
        (prop::collection::vec(-6i64..=6, d), prop_oneof![-6i64..=-1, 1i64..=6]).prop_map(|(mut c, lc)| {
            c.push(lc);
            c
        })
    })
}

// ---- oracles ----

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            let pivot_row = m[col].clone();
            for (x, p) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

fn sylvester_resultant(p: &[i64], q_: &[i64]) -> Rational {
    let (m, n) = (p.len() - 1, q_.len() - 1);
    let mut rows = Vec::new();
    for (src, shifts) in [(p, n), (q_, m)] {
        for s in 0..shifts {
            let mut row = vec![Rational::zero(); m + n];
            for (i, &c) in src.iter().rev().enumerate() {
                row[s + i] = q(c);
            }
            rows.push(row);
        }
    }
    determinant(rows)
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Distinct real roots by Sturm's theorem.
fn sturm_count(c: &[i64]) -> usize {
    let p: Vec<Rational> = c.iter().map(|&a| q(a)).collect();
    let dp: Vec<Rational> = p.iter().enumerate().skip(1).map(|(i, a)| a * q(i as i64)).collect();
    let mut seq = vec![p, dp];
    while seq.last().unwrap().len() > 1 {
        let n = seq.len();
        let r: Vec<Rational> = poly_rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|x| -x).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    let variations = |at_plus: bool| {
        let signs: Vec<i32> = seq
            .iter()
            .map(|s| {
                let lc = s.last().unwrap().signum();
                let odd = (s.len() - 1) % 2 == 1;
                let v = if lc.is_positive() { 1 } else { -1 };
                if !at_plus && odd { -v } else { v }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    variations(false) - variations(true)
}

fn eval(c: &[i64], x: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, &a| acc * x + q(a))
}

// ---- polynomials ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn resultant_matches_sylvester_determinant(p in coeffs(4), r in coeffs(4)) {
        let got = resultant(&upoly(&p), &upoly(&r), 0).unwrap();
        prop_assert_eq!(got.constant_value(), Some(sylvester_resultant(&p, &r)));
    }

    #[test]
    fn resultant_is_symmetric_up_to_sign(
        p in prop::collection::vec(-3i64..=3, 6),
        r in prop::collection::vec(-3i64..=3, 6),
    ) {
        let names = ["x", "y"];
        // bivariate polynomials of degree 2 in y with nonzero leading coefficient
        let bi = |c: &[i64]| parse_polynomial(
            &format!("({})*y^2 + ({})*x*y + ({})*y + ({})*x^2 + ({})*x + ({})",
                c[0].abs() + 1, c[1], c[2], c[3], c[4], c[5]),
            &names,
        ).unwrap();
        let (a, b) = (bi(&p), bi(&r));
        let ab = resultant(&a, &b, 1).unwrap();
        let ba = resultant(&b, &a, 1).unwrap();
        // (-1)^(2*2) = 1
        prop_assert_eq!(ab.clone(), ba);
        prop_assert!(!ab.involves(1));
    }

    #[test]
    fn parse_print_round_trip(terms in prop::collection::vec((-9i64..=9, 0u32..4, 0u32..4, 0u32..3), 1..6)) {
        let names = ["x", "y", "z"];
        let p = Polynomial::from_terms(3, terms.iter().map(|&(c, a, b, d)| (vec![a, b, d], q(c))));
        let text = p.to_text(&names);
        let back = parse_polynomial(&text, &names).unwrap();
        prop_assert_eq!(&back, &p, "{}", text);
        prop_assert_eq!(back.to_text(&names), text);
    }
}

// ---- roots ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn isolation_agrees_with_sturm(c in coeffs(7)) {
        let ivs = isolate_roots(&upoly(&c)).unwrap();
        prop_assert_eq!(ivs.len(), sturm_count(&c));
        for w in ivs.windows(2) {
            prop_assert!(w[0].hi <= w[1].lo && !(w[0].hi == w[1].lo && (w[0].exact || w[1].exact)));
        }
        for iv in &ivs {
            if iv.exact {
                prop_assert!(eval(&c, &iv.lo).is_zero());
            } else {
                prop_assert!(iv.lo < iv.hi);
                let (a, b) = (eval(&c, &iv.lo), eval(&c, &iv.hi));
                // square-free part changes sign; p itself may touch zero at a multiple root
                prop_assert!(!a.is_zero() && !b.is_zero());
            }
        }
    }

    #[test]
    fn compare_is_a_total_order(a in coeffs(4), b in coeffs(4), r in -20i64..=20) {
        let mut xs: Vec<Real> = vec![Real::Rational(Rational::new(BigInt::from(r), BigInt::from(7)))];
        for c in [&a, &b] {
            xs.extend(AlgebraicNumber::roots_of(&upoly(c)).unwrap().into_iter().map(Real::from));
        }
        for x in &xs {
            prop_assert_eq!(compare(x, x), Ordering::Equal);
            for y in &xs {
                let xy = compare(x, y);
                prop_assert_eq!(xy, compare(y, x).reverse());
                let (fx, fy) = (x.to_f64(), y.to_f64());
                if (fx - fy).abs() > 1e-9 {
                    prop_assert_eq!(xy, fx.partial_cmp(&fy).unwrap());
                }
                for z in &xs {
                    if xy != Ordering::Greater && compare(y, z) != Ordering::Greater {
                        prop_assert_ne!(compare(x, z), Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn simplest_between_has_least_denominator(a in -40i64..40, da in 1i64..12, w in 1i64..30, dw in 1i64..40) {
        let lo = Rational::new(BigInt::from(a), BigInt::from(da));
        let hi = &lo + Rational::new(BigInt::from(w), BigInt::from(dw));
        let s = simplest_between(Some(&lo), Some(&hi));
        prop_assert!(lo < s && s < hi);
        // no fraction with a smaller denominator fits strictly inside
        for d in 1..s.denom().to_string().parse::<i64>().unwrap() {
            let d = BigInt::from(d);
            let n = (&lo * Rational::from_integer(d.clone())).floor().to_integer() + 1;
            prop_assert!(Rational::new(n, d) >= hi);
        }
        // among least denominators, least absolute numerator
        if s.denom().is_one() && !s.is_zero() {
            let toward_zero = if s.is_positive() { &s - Rational::one() } else { &s + Rational::one() };
            prop_assert!(toward_zero <= lo || toward_zero >= hi);
        }
    }
}

// ---- combinatorics and prediction ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_generating_function_and_enumeration_agree(k in prop::collection::vec(1u32..5, 1..5)) {
        let profile = LevelProfile::new(k).unwrap();
        let closed = lemma1_counts(&profile);
        prop_assert_eq!(&closed, &generating_counts(&profile));
        let mut counts = vec![0u64; profile.n() + 1];
        for idx in enumerate_indices(&profile) {
            counts[idx.iter().filter(|&&i| i % 2 == 1).count()] += 1;
        }
        prop_assert_eq!(closed.counts(), &counts[..]);
        prop_assert_eq!(closed.total(), profile.total_cells());
    }

    #[test]
    fn prediction_is_monotone(a in 0u64..5000, b in 0u64..5000, n in 2usize..9) {
        let t = FractionTable::default();
        let (pa, pb) = (predict_total(a, n, &t).unwrap(), predict_total(b, n, &t).unwrap());
        prop_assert_eq!(a.cmp(&b), pa.value.partial_cmp(&pb.value).unwrap());
        prop_assert!(pa.rounded <= pb.rounded || a > b);
        prop_assert!(pa.value >= a as f64);
    }

    #[test]
    fn report_json_round_trip(
        counts in prop::collection::vec(0u64..100, 1..6),
        seed in proptest::option::of(any::<u64>()),
        warnings in prop::collection::vec("[a-z ]{0,12}", 0..3),
    ) {
        let mut r = RunReport::new(vec!["random".into(), "--seed".into()]);
        r.seed = seed;
        r.warnings = warnings;
        r.result = serde_json::json!({"count": counts.len(), "p": 0.25});
        r.histograms.push(Histogram::new("h", &DimensionDistribution::new(counts)));
        r.wall_seconds = 0.5;
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }
}

// ---- decompositions ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decompositions_are_cylindrical_and_sign_invariant_at_samples(
        terms in prop::collection::vec(prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3), 1..4), 1..3),
        swap in any::<bool>(),
    ) {
        let ps: Vec<Polynomial> = terms
            .iter()
            .map(|t| Polynomial::from_terms(2, t.iter().map(|&(c, a, b)| (vec![a, b], q(c)))))
            .collect();
        let order = if swap { VariableOrder::from_names(&["y", "x"], &["x", "y"]).unwrap() } else { VariableOrder::identity(2) };
        let cad = build_cad(&ps, &order).unwrap();
        prop_assert!(cad.check_cylindrical().is_ok());
        let hist = cad.dimension_histogram();
        prop_assert_eq!(hist.total() as usize, cad.cells.len());
        let one = one_layered(&ps, &order).unwrap();
        let full: Vec<_> = cad.cells.iter().filter(|c| c.dimension() == 2).map(|c| (&c.index, &c.signs)).collect();
        let top: Vec<_> = one.cells.iter().map(|c| (&c.index, &c.signs)).collect();
        prop_assert_eq!(full, top);
    }
}
