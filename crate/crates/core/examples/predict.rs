// Predicting a complete cell count from the full-dimensional count.

use std::collections::BTreeMap;

use layered_cad::heuristics::{predict_total, FractionTable};

fn main() {
    let table = FractionTable::default();
    for (fulldim, n) in [(16, 2), (17, 2), (18, 2), (118, 3), (40, 6)] {
        let p = predict_total(fulldim, n, &table).unwrap();
        println!("{fulldim:>4} full-dimensional cells, n = {n}: {:.3} -> {}", p.value, p.rounded);
    }
    assert_eq!(predict_total(118, 3, &table).unwrap().rounded, 615);

    let custom = FractionTable::new(BTreeMap::from([(2, 0.25)])).unwrap();
    println!("with f(2) = 0.25: {}", predict_total(16, 2, &custom).unwrap().rounded);
    assert!(predict_total(5, 1, &table).is_err());
}
