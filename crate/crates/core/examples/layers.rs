// Layered sub-decompositions: full-dimensional cells first, then one
// dimension lower at a time.

use layered_cad::cad::{extend_layer, one_layered};
use layered_cad::order::VariableOrder;
use layered_cad::poly::parse_polynomial;
use layered_cad::roots::algebraic_allocations;

fn main() {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let ps: Vec<_> = ["x^2 + y^2 + z^2 - 1", "x*y - z"].iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
    let order = VariableOrder::identity(3);

    let before = algebraic_allocations();
    let mut cad = one_layered(&ps, &order).unwrap();
    assert_eq!(algebraic_allocations(), before, "full-dimensional cells need only rational samples");
    println!("layer 1: {} cells, {} stacks, {} pending tasks", cad.cells.len(), cad.stacks_lifted, cad.pending.len());

    let mut layer = 1;
    while !cad.is_complete() {
        extend_layer(&mut cad).unwrap();
        layer += 1;
        println!("layer {layer}: {} cells, histogram {:?}", cad.cells.len(), cad.dimension_histogram().counts());
    }
    cad.check_cylindrical().unwrap();
}
