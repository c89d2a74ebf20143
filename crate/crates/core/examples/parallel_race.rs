// First-finisher ordering selection under a reproducible simulated
// scheduler and under real threads.

use layered_cad::heuristics::{parallel_layered_heuristic, AdmissibleOrderings, Scheduler};
use layered_cad::poly::parse_polynomial;

fn main() {
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let ps: Vec<_> = ["x^2 + y^2 + z^2 - 1", "x*y - z"].iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();

    let sim = parallel_layered_heuristic(&ps, &names, &AdmissibleOrderings::All, Scheduler::Simulated { seed: 11 }).unwrap();
    println!("simulated winner {} ({} cells)", sim.winner.display(&names), sim.cad.cells.len());
    for (order, stacks) in &sim.stacks {
        println!("  {:<8} {stacks:>4} stacks", order.display(&names));
    }
    assert_eq!(sim.registry.live(), 0);

    let threads = parallel_layered_heuristic(&ps, &names, &AdmissibleOrderings::All, Scheduler::Threads).unwrap();
    println!("threaded winner {} ({} cells)", threads.winner.display(&names), threads.cad.cells.len());
    assert_eq!(threads.registry.live(), 0);
}
