// Parsing, arithmetic, resultants and discriminants.

use layered_cad::poly::{discriminant, gcd, parse_polynomial, resultant, squarefree_basis};

fn main() {
    let names = ["x", "y"];
    let f = parse_polynomial("x - y^2", &names).unwrap();
    let g = parse_polynomial("x^2 + y^2 - 1", &names).unwrap();
    println!("f = {}", f.to_text(&names));
    println!("g = {}", g.to_text(&names));
    println!("f*g = {}", (&f * &g).to_text(&names));

    // Eliminating y leaves the curve's shadow on the x-axis.
    let r = resultant(&f, &g, 1).unwrap();
    let expected = parse_polynomial("(x^2 + x - 1)^2", &names).unwrap();
    println!("res_y(f, g) = {}", r.to_text(&names));
    assert_eq!(r.normalized(), expected.normalized());

    let d = discriminant(&g, 1).unwrap();
    println!("disc_y(g) = {}", d.to_text(&names));

    let h = parse_polynomial("(x - 1)^2 * (x + y)", &names).unwrap();
    let k = parse_polynomial("(x - 1) * (x + 2)", &names).unwrap();
    println!("gcd = {}", gcd(&h, &k).to_text(&names));

    let basis = squarefree_basis(&[h, k]);
    println!("square-free basis:");
    for b in &basis {
        println!("  {}", b.to_text(&names));
    }
}
