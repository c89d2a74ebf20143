// Choosing a variable ordering from 1-layered decompositions.

use layered_cad::heuristics::{compare_orderings, layered_heuristic, AdmissibleOrderings, FractionTable};
use layered_cad::poly::parse_polynomial;

fn main() {
    let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
    let ps: Vec<_> = ["x - y^2", "x^2 + y^2 - 1"].iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
    let table = FractionTable::default();

    let (best, cad, report) = layered_heuristic(&ps, &names, &AdmissibleOrderings::All, &table).unwrap();
    println!("selected {} with {} cells", best.display(&names), cad.cells.len());
    assert_eq!(best.display(&names), "x≻y");

    let cmp = compare_orderings(&ps, &names, &AdmissibleOrderings::All, &table).unwrap();
    println!("{:<6} {:>6} {:>10} {:>5}", "order", "1-LCAD", "prediction", "CAD");
    for row in &cmp.rows {
        println!(
            "{:<6} {:>6} {:>10} {:>5}",
            row.ordering,
            row.fulldim.unwrap(),
            row.prediction.unwrap().rounded,
            row.complete.unwrap()
        );
    }
    assert_eq!(report.selected, cmp.selected);
}
