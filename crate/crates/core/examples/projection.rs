// Projection factor sets under both orderings of a two-variable system.

use layered_cad::order::VariableOrder;
use layered_cad::poly::parse_polynomial;
use layered_cad::projection::build_projection;

fn main() {
    let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
    let ps: Vec<_> = ["x - y^2", "x^2 + y^2 - 1"].iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
    for order in VariableOrder::all(2) {
        let proj = build_projection(&ps, &order);
        println!("{} ({} factors)", order.display(&names), proj.total_factors());
        let internal = order.internal_names(&names);
        for (level, factors) in proj.to_text(&names).iter().enumerate() {
            println!("  level {} [{}]: {}", level + 1, internal[level], factors.join(", "));
        }
        for w in &proj.warnings {
            println!("  warning: {w}");
        }
    }
}
