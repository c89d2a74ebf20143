use super::*;
use crate::poly::parse_polynomial;
use crate::roots::algebraic_allocations;

const XY: &[&str] = &["x", "y"];

fn polys(src: &[&str], names: &[&str]) -> Vec<Polynomial> {
    src.iter().map(|s| parse_polynomial(s, names).unwrap()).collect()
}

fn order(o: &[&str], names: &[&str]) -> VariableOrder {
    VariableOrder::from_names(o, names).unwrap()
}

fn example1() -> Vec<Polynomial> {
    polys(&["x - y^2", "x^2 + y^2 - 1"], XY)
}

#[test]
fn example1_complete_counts() {
    let yx = build_cad(&example1(), &order(&["y", "x"], XY)).unwrap();
    assert_eq!(yx.cells.len(), 53);
    assert_eq!(yx.full_dimensional_count(), 18);
    yx.check_cylindrical().unwrap();
    let xy = build_cad(&example1(), &order(&["x", "y"], XY)).unwrap();
    assert_eq!(xy.cells.len(), 47);
    assert_eq!(xy.full_dimensional_count(), 16);
}

#[test]
fn circle_alone() {
    let c = build_cad(&polys(&["x^2 + y^2 - 1"], XY), &order(&["y", "x"], XY)).unwrap();
    assert_eq!(c.cells.len(), 13);
    assert_eq!(c.dimension_histogram().counts(), &[2, 6, 5]);
}

#[test]
fn stacks_over_example1_base_points() {
    let o = order(&["y", "x"], XY);
    let proj = build_projection(&example1(), &o);
    let level2 = &proj.levels[1];
    let at = |x: Coordinate| lift_stack(&[x], level2, 1).unwrap().cell_count();
    assert_eq!(at(Coordinate::Rational(crate::poly::rat(4, 5))), 9);
    assert_eq!(at(Coordinate::Rational(crate::poly::rat(-2, 1))), 1);
    let phi = crate::roots::AlgebraicNumber::roots_of(&parse_polynomial("x^2 + x - 1", XY).unwrap()).unwrap();
    assert_eq!(at(Coordinate::Algebraic(phi[1].clone())), 5);
}

#[test]
fn rational_roots_over_irrational_base_get_sector_samples() {
    let base = [Coordinate::Algebraic(
        crate::roots::AlgebraicNumber::roots_of(&parse_polynomial("x^2 - 2", XY).unwrap()).unwrap()[1].clone(),
    )];
    let factors = polys(&["x*y - 2*x", "x*y - 3*x"], XY);
    let stack = lift_stack(&base, &factors, 1).unwrap();
    assert_eq!(stack.sections.len(), 2);
    let r = crate::poly::rat;
    assert_eq!(stack.sector_samples, vec![r(0, 1), r(5, 2), r(4, 1)]);
}

#[test]
fn nullification_over_a_point_is_tolerated() {
    // x*z + y vanishes identically over the point x = y = 0
    let names = ["x", "y", "z"];
    let ps = polys(&["x*z + y"], &names);
    let cad = build_cad(&ps, &order(&["z", "y", "x"], &names)).unwrap();
    assert!(cad.warnings.iter().any(|w| w.contains("vanishes identically")));
    cad.check_cylindrical().unwrap();
    let over_origin: Vec<_> = cad.cells.iter().filter(|c| c.index.0[..2] == [2, 2]).collect();
    assert_eq!(over_origin.len(), 1);
    assert_eq!(over_origin[0].signs, vec![0]);
}

#[test]
fn nullification_over_a_curve_is_an_error() {
    let base = [Coordinate::Rational(crate::poly::rat(0, 1))];
    let factors = polys(&["x*y"], XY);
    assert!(matches!(lift_stack(&base, &factors, 1), Err(CadError::Nullification { level: 2, .. })));
    assert_eq!(lift_stack(&base, &factors, 0).unwrap().nullified, vec![0]);
}

#[test]
fn layered_extension_reaches_complete() {
    let o = order(&["y", "x"], XY);
    let before = algebraic_allocations();
    let mut cad = one_layered(&example1(), &o).unwrap();
    assert_eq!(algebraic_allocations(), before);
    assert_eq!(cad.cells.len(), 18);
    assert!(cad.cells.iter().all(|c| c.sample.is_rational() && c.dimension() == 2));
    cad.extend_layer().unwrap();
    let dims: Vec<usize> = cad.dimension_histogram().counts().iter().map(|&c| c as usize).collect();
    assert_eq!(dims[2], 18);
    assert_eq!(dims[0], 0);
    cad.extend_layer().unwrap();
    assert!(cad.is_complete());
    assert_eq!(cad.cells.len(), 53);
    assert_eq!(cad.extend_layer(), Err(CadError::NothingToExtend));
    let full = build_cad(&example1(), &o).unwrap();
    let a: Vec<_> = cad.cells.iter().map(|c| &c.index).collect();
    let b: Vec<_> = full.cells.iter().map(|c| &c.index).collect();
    assert_eq!(a, b);
}

#[test]
fn degenerate_inputs_give_one_cell() {
    let names = ["x", "y", "z"];
    let o = VariableOrder::identity(3);
    for ps in [vec![], polys(&["3"], &names)] {
        let cad = build_cad(&ps, &o).unwrap();
        assert_eq!(cad.cells.len(), 1);
        assert_eq!(cad.cells[0].index, CellIndex(vec![1, 1, 1]));
    }
}

#[test]
fn dimensions_of_indices() {
    assert_eq!(cell_dimension(&CellIndex(vec![1, 1, 1])), 3);
    assert_eq!(cell_dimension(&CellIndex(vec![2, 4, 6])), 0);
    assert_eq!(cell_dimension(&CellIndex(vec![2, 1])), 1);
}

#[test]
fn signs_recorded_per_cell() {
    let cad = build_cad(&example1(), &order(&["y", "x"], XY)).unwrap();
    // sections of the stack over x = 0 lie on the parabola or the circle
    for c in &cad.cells {
        if c.index.0[1] % 2 == 0 {
            assert!(c.signs.contains(&0), "{} {:?}", c.index, c.signs);
        } else {
            assert!(!c.signs.contains(&0), "{} {:?}", c.index, c.signs);
        }
    }
}

#[test]
fn recorded_signs_match_direct_evaluation() {
    let names = ["x", "y", "z"];
    let cases: [(&[&str], &[&str]); 3] = [
        (&["x^2 + y^2 + z^2 - 1", "x*y - z"], &["z", "y", "x"]),
        (&["(x - y)^2*z - x", "x*y", "z^3 - x*y^2 + 1"], &["x", "z", "y"]),
        (&["x^2*y^2 - z", "(x^2 - 2)*(y - z)", "0"], &["y", "x", "z"]),
    ];
    for (src, o) in cases {
        let cad = build_cad(&polys(src, &names), &order(o, &names)).unwrap();
        for c in &cad.cells {
            let direct: Vec<i32> = cad.inputs.iter().map(|q| sign_at(q, &c.sample.0)).collect();
            assert_eq!(c.signs, direct, "cell {:?}", c.index);
        }
    }
}
