// Real root isolation and exact comparison of algebraic numbers.

use std::cmp::Ordering;

use layered_cad::poly::{parse_polynomial, rat};
use layered_cad::roots::{compare, isolate_roots, AlgebraicNumber, Real};

fn main() {
    let names = ["x"];
    let p = parse_polynomial("x^5 - 3*x^3 + x - 1/4", &names).unwrap();
    let roots = isolate_roots(&p).unwrap();
    println!("{}: {} real roots", p.to_text(&names), roots.len());
    for iv in &roots {
        println!("  ({}, {})", iv.lo, iv.hi);
    }

    // x^2 + x - 1 carries the golden-ratio conjugates.
    let q = parse_polynomial("x^2 + x - 1", &names).unwrap();
    let phi = AlgebraicNumber::roots_of(&q).unwrap().pop().unwrap();
    let narrow = phi.refine(&rat(1, 1_000_000));
    println!("(sqrt 5 - 1)/2 in ({}, {})", narrow.interval().lo, narrow.interval().hi);
    assert!((phi.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);

    let half = Real::Rational(rat(1, 2));
    let alg = Real::Algebraic(phi);
    assert_eq!(compare(&half, &alg), Ordering::Less);
    println!("1/2 < {:.6}", alg.to_f64());

    // Rational roots come back exactly.
    let r = parse_polynomial("(3*x - 2) * (x^2 - 2)", &names).unwrap();
    let exact: Vec<_> = isolate_roots(&r).unwrap().into_iter().filter(|iv| iv.exact).collect();
    assert_eq!(exact.len(), 1);
    println!("exact root of {}: {}", r.to_text(&names), exact[0].lo);
}
