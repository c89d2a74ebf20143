// A complete decomposition with sample points and a dimension histogram.

use layered_cad::cad::build_cad;
use layered_cad::order::VariableOrder;
use layered_cad::poly::parse_polynomial;

fn main() {
    let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
    let ps: Vec<_> = ["x - y^2", "x^2 + y^2 - 1"].iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
    let order = VariableOrder::from_names(&["y", "x"], &names).unwrap();
    let cad = build_cad(&ps, &order).unwrap();
    cad.check_cylindrical().unwrap();
    println!("{}: {} cells, {} full-dimensional", order.display(&names), cad.cells.len(), cad.full_dimensional_count());
    assert_eq!(cad.cells.len(), 53);
    assert_eq!(cad.full_dimensional_count(), 18);
    for line in cad.dump().iter().take(8) {
        println!("  {line}");
    }
    println!("  ...");
    print!("{}", cad.dimension_histogram().to_csv());
}
