// Cell counts by dimension: closed form, generating function, enumeration,
// and binomial fits on random cylindrical structures.

use layered_cad::combinatorics::{
    enumerate_indices, fit_binomial_proportions, generating_counts, lemma1_counts, mean_proportions,
    random_structures, GenerationMode, LevelProfile, RandomConfig,
};

fn main() {
    let profile = LevelProfile::new(vec![2, 3, 1]).unwrap();
    let closed = lemma1_counts(&profile);
    assert_eq!(closed, generating_counts(&profile));
    assert_eq!(closed.total() as usize, enumerate_indices(&profile).len());
    println!("k = {:?}: {} cells, by dimension {:?}", profile.k(), profile.total_cells(), closed.counts());

    let config = RandomConfig::defaults(GenerationMode::PerCylinder);
    let structures = random_structures(0, 45, &config).unwrap();
    let mut by_n = std::collections::BTreeMap::<usize, Vec<_>>::new();
    for s in &structures {
        assert!(s.is_cylindrical());
        by_n.entry(s.n()).or_default().push(s.histogram());
    }
    println!("{:>2}  {:>10}  {:>6}  {:>6}", "n", "structures", "p", "TV");
    for (n, hs) in &by_n {
        let fit = fit_binomial_proportions(&mean_proportions(hs));
        println!("{n:>2}  {:>10}  {:>6.3}  {:>6.4}", hs.len(), fit.p, fit.distance);
    }
}
