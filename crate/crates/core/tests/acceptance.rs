// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and time limits are the published ones; nothing here
// is tuned to the implementation.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use layered_cad::cad::{build_cad, extend_layer, one_layered, Cad, CadError};
use layered_cad::combinatorics::{
    fit_binomial_proportions, generating_counts, lemma1_counts, mean_proportions, random_structures,
    GenerationMode, LevelProfile, RandomConfig,
};
use layered_cad::heuristics::{
    compare_orderings, layered_heuristic, parallel_layered_heuristic, predict_total, AdmissibleOrderings,
    FractionTable, Scheduler,
};
use layered_cad::order::VariableOrder;
use layered_cad::poly::{parse_polynomial, Polynomial, Rational};
use layered_cad::roots::{algebraic_allocations, isolate_roots};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn polys(src: &[&str], vars: &[String]) -> Vec<Polynomial> {
    src.iter().map(|s| parse_polynomial(s, vars).unwrap()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example1() -> (Vec<Polynomial>, Vec<String>) {
    let xy = names(&["x", "y"]);
    (polys(&["x - y^2", "x^2 + y^2 - 1"], &xy), xy)
}

fn example2() -> (Vec<Polynomial>, Vec<String>) {
    let xyz = names(&["x", "y", "z"]);
    (polys(&["x^2 + y^2 + z^2 - 1", "x*y - y*z + 3", "x + y - y*z^4"], &xyz), xyz)
}

fn example1_y_over_x() -> Check {
    let (ps, xy) = example1();
    let order = VariableOrder::from_names(&["y", "x"], &xy).unwrap();
    let cad = build_cad(&ps, &order).map_err(|e| e.to_string())?;
    ensure(cad.cells.len() == 53, || format!("{} cells, expected 53", cad.cells.len()))?;
    let full = cad.full_dimensional_count();
    ensure(full == 18, || format!("{full} full-dimensional cells, expected 18"))?;
    let p = predict_total(18, 2, &FractionTable::default()).map_err(|e| e.to_string())?;
    ensure((p.value - 53.892).abs() < 5e-4, || format!("prediction {:.4}, expected 53.892", p.value))?;
    ensure(p.rounded == 54, || format!("prediction rounds to {}, expected 54", p.rounded))?;
    Ok(format!("53 cells, 18 full-dimensional, predicted {:.3} -> 54", p.value))
}

fn example1_x_over_y() -> Check {
    let (ps, xy) = example1();
    let order = VariableOrder::from_names(&["x", "y"], &xy).unwrap();
    let cad = build_cad(&ps, &order).map_err(|e| e.to_string())?;
    ensure(cad.cells.len() == 47, || format!("{} cells, expected 47", cad.cells.len()))?;
    let full = cad.full_dimensional_count();
    ensure(full == 16, || format!("{full} full-dimensional cells, expected 16"))?;
    let (chosen, _, _) = layered_heuristic(&ps, &xy, &AdmissibleOrderings::All, &FractionTable::default())
        .map_err(|e| e.to_string())?;
    ensure(chosen == order, || format!("heuristic chose {}", chosen.display(&xy)))?;
    let p = predict_total(16, 2, &FractionTable::default()).map_err(|e| e.to_string())?;
    ensure(p.rounded == 48, || format!("prediction rounds to {}, expected 48", p.rounded))?;
    Ok(format!("47 cells, 16 full-dimensional, heuristic picks x≻y, predicted {:.3} -> 48", p.value))
}

/// Odometer over every index in `prod [1, 2k+1]`, counting odd entries.
fn enumerate_by_dimension(k: &[u32]) -> Vec<u64> {
    let n = k.len();
    let mut counts = vec![0u64; n + 1];
    let mut index = vec![1u32; n];
    loop {
        counts[index.iter().filter(|&&i| i % 2 == 1).count()] += 1;
        let mut level = n;
        loop {
            if level == 0 {
                return counts;
            }
            level -= 1;
            if index[level] < 2 * k[level] + 1 {
                index[level] += 1;
                break;
            }
            index[level] = 1;
        }
    }
}

fn lemma_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e33a);
    let mut cells = 0u64;
    for case in 0..200 {
        let n = rng.gen_range(1..=6);
        let k: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=7)).collect();
        let profile = LevelProfile::new(k.clone()).map_err(|e| e.to_string())?;
        let closed = lemma1_counts(&profile);
        let generating = generating_counts(&profile);
        let brute = enumerate_by_dimension(&k);
        ensure(closed.counts() == brute.as_slice(), || format!("case {case} k={k:?}: closed form {:?} vs {brute:?}", closed.counts()))?;
        ensure(generating.counts() == brute.as_slice(), || {
            format!("case {case} k={k:?}: generating function {:?} vs {brute:?}", generating.counts())
        })?;
        let d0: u64 = k.iter().map(|&k| k as u64).product();
        let dn: u64 = k.iter().map(|&k| k as u64 + 1).product();
        ensure(brute[0] == d0 && brute[n] == dn, || format!("case {case} k={k:?}: special cases"))?;
        cells += brute.iter().sum::<u64>();
    }
    Ok(format!("200 profiles, {cells} enumerated cells"))
}

fn random_term(rng: &mut ChaCha8Rng, vars: &[String]) -> String {
    let c: i32 = loop {
        let c = rng.gen_range(-5..=5);
        if c != 0 {
            break c;
        }
    };
    let degree = rng.gen_range(0..=3);
    let mut factors = vec![c.to_string()];
    for _ in 0..degree {
        factors.push(vars.choose(rng).unwrap().clone());
    }
    factors.join("*")
}

fn random_system(rng: &mut ChaCha8Rng) -> (Vec<Polynomial>, Vec<String>) {
    let vars = names(&["x", "y", "z"][..rng.gen_range(2..=3)]);
    let count = rng.gen_range(1..=3);
    let mut ps = Vec::new();
    while ps.len() < count {
        let terms: Vec<String> = (0..rng.gen_range(2..=4)).map(|_| random_term(rng, &vars)).collect();
        let p = parse_polynomial(&terms.join(" + "), &vars).unwrap();
        if !p.is_constant() {
            ps.push(p);
        }
    }
    (ps, vars)
}

fn indices(cad: &Cad) -> Vec<Vec<u32>> {
    let mut v: Vec<_> = cad.cells.iter().map(|c| c.index.0.clone()).collect();
    v.sort();
    v
}

fn layered_completeness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed4);
    let (mut agreed, mut both_failed, mut cells) = (0, 0, 0);
    for case in 0..40 {
        if agreed >= 10 {
            break;
        }
        let (ps, vars) = random_system(&mut rng);
        let order = VariableOrder::all(vars.len()).choose(&mut rng).unwrap().clone();
        let shown = || format!("case {case} {:?} under {}", ps.iter().map(|p| p.to_text(&vars)).collect::<Vec<_>>(), order.display(&vars));
        let full = build_cad(&ps, &order);
        let before = algebraic_allocations();
        let layered = one_layered(&ps, &order);
        let allocated = algebraic_allocations() - before;
        ensure(allocated == 0, || format!("{}: 1-layered path allocated {allocated} algebraic numbers", shown()))?;
        let layered = layered.and_then(|mut cad| {
            while !cad.is_complete() {
                extend_layer(&mut cad)?;
            }
            Ok(cad)
        });
        match (full, layered) {
            (Ok(a), Ok(b)) => {
                ensure(indices(&a) == indices(&b), || format!("{}: cell indices differ", shown()))?;
                agreed += 1;
                cells += a.cells.len();
            }
            (Err(CadError::Nullification { .. }), Err(CadError::Nullification { .. })) => both_failed += 1,
            (a, b) => return Err(format!("{}: full {:?} vs layered {:?}", shown(), a.err(), b.err())),
        }
    }
    ensure(agreed >= 10, || format!("only {agreed} systems agreed"))?;
    Ok(format!("{agreed} systems, {cells} cells identical; {both_failed} nullified on both paths"))
}

/// Fitted p for n = 2..6 read off the published histograms.
const FIG2_P: [(usize, f64); 5] = [(2, 0.6), (3, 0.6), (4, 0.65), (5, 0.7), (6, 0.7)];

fn binomial_fits() -> Check {
    let structures = random_structures(0, 45, &RandomConfig::defaults(GenerationMode::PerCylinder))
        .map_err(|e| e.to_string())?;
    let mut by_n = BTreeMap::<usize, Vec<_>>::new();
    for s in &structures {
        by_n.entry(s.n()).or_default().push(s.histogram());
    }
    let mut parts = Vec::new();
    for (n, target) in FIG2_P {
        let hs = by_n.get(&n).ok_or_else(|| format!("no structure with n = {n}"))?;
        let fit = fit_binomial_proportions(&mean_proportions(hs));
        ensure((fit.p - target).abs() <= 0.15, || format!("n = {n}: p = {:.3}, published {target}", fit.p))?;
        ensure(fit.distance < 0.15, || format!("n = {n}: TV distance {:.4}", fit.distance))?;
        parts.push(format!("n={n} p={:.3} (vs {target}) tv={:.4}", fit.p, fit.distance));
    }
    Ok(parts.join("; "))
}

fn example2_ranking() -> Check {
    let (ps, xyz) = example2();
    let report = compare_orderings(&ps, &xyz, &AdmissibleOrderings::All, &FractionTable::default())
        .map_err(|e| e.to_string())?;
    let rows: Vec<(String, u64, u64)> = report
        .rows
        .iter()
        .map(|r| match (r.fulldim, r.complete) {
            (Some(f), Some(c)) => Ok((r.ordering.clone(), f, c)),
            _ => Err(format!("{}: {}", r.ordering, r.error.clone().unwrap_or_default())),
        })
        .collect::<Result<_, _>>()?;
    let min_full = rows.iter().map(|r| r.1).min().unwrap();
    let min_cad = rows.iter().map(|r| r.2).min().unwrap();
    for (o, f, c) in &rows {
        ensure(*f != min_full || *c == min_cad, || format!("{o} minimizes the 1-layered count ({f}) but has {c} cells, minimum {min_cad}"))?;
    }
    let p = predict_total(118, 3, &FractionTable::default()).map_err(|e| e.to_string())?;
    ensure(p.rounded == 615, || format!("118/0.192 rounds to {}", p.rounded))?;
    let table: Vec<String> = rows.iter().map(|(o, f, c)| format!("{o} {f}/{c}")).collect();
    Ok(format!("{}; 118/0.192 -> 615", table.join(", ")))
}

fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// A square-free polynomial of degree <= 8 with known real roots: distinct
/// rational linear factors, `x^2 + c` (no real roots), `x^2 - d` and
/// `x^3 - e` with `d` not a square and `e` not a cube.
fn known_root_polynomial(rng: &mut ChaCha8Rng) -> (String, Vec<f64>, usize) {
    let mut degree = 0;
    let target = rng.gen_range(1..=8);
    let mut factors = Vec::new();
    let mut roots = Vec::new();
    let mut rationals = Vec::new();
    let (mut used_d, mut used_e) = (Vec::new(), Vec::new());
    while degree < target {
        match rng.gen_range(0..4) {
            0 | 1 => {
                let (a, b): (i64, i64) = (rng.gen_range(-12..=12), rng.gen_range(1..=4));
                let q = Rational::new(a.into(), b.into());
                if rationals.contains(&q) {
                    continue;
                }
                rationals.push(q);
                factors.push(format!("({b}*x - ({a}))"));
                roots.push(a as f64 / b as f64);
                degree += 1;
            }
            2 if degree + 2 <= target => {
                if rng.gen_bool(0.5) {
                    factors.push(format!("(x^2 + {})", rng.gen_range(1..=9)));
                } else {
                    let d: i64 = rng.gen_range(2..=30);
                    let r = (d as f64).sqrt();
                    if r.fract() == 0.0 || used_d.contains(&d) {
                        continue;
                    }
                    used_d.push(d);
                    factors.push(format!("(x^2 - {d})"));
                    roots.extend([r, -r]);
                }
                degree += 2;
            }
            3 if degree + 3 <= target => {
                let e: i64 = rng.gen_range(2..=40);
                if [8, 27].contains(&e) || used_e.contains(&e) {
                    continue;
                }
                used_e.push(e);
                factors.push(format!("(x^3 - {e})"));
                roots.push((e as f64).cbrt());
                degree += 3;
            }
            _ => {}
        }
    }
    roots.sort_by(f64::total_cmp);
    let scale = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    (format!("{scale}*{}", factors.join("*")), roots, rationals.len())
}

fn root_fuzz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x500);
    let x = names(&["x"]);
    let mut total = 0;
    for case in 0..500 {
        let (src, roots, rational) = known_root_polynomial(&mut rng);
        let p = parse_polynomial(&src, &x).unwrap();
        let ivs = isolate_roots(&p).map_err(|e| format!("case {case} {src}: {e}"))?;
        ensure(ivs.len() == roots.len(), || format!("case {case} {src}: {} intervals, {} roots", ivs.len(), roots.len()))?;
        ensure(ivs.iter().filter(|iv| iv.exact).count() == rational, || format!("case {case} {src}: rational roots not exact"))?;
        let at = |q: &Rational| sign(&p.eval_all(std::slice::from_ref(q)));
        for (i, (iv, r)) in ivs.iter().zip(&roots).enumerate() {
            if iv.exact {
                ensure(at(&iv.lo) == 0, || format!("case {case} {src}: exact root {} is not a root", iv.lo))?;
            } else {
                let (lo, hi) = (at(&iv.lo), at(&iv.hi));
                ensure(lo * hi < 0, || format!("case {case} {src}: no sign change on ({}, {})", iv.lo, iv.hi))?;
            }
            let (lo, hi) = (iv.lo.to_f64().unwrap(), iv.hi.to_f64().unwrap());
            ensure(lo <= *r && *r <= hi, || format!("case {case} {src}: root {r} outside interval {i} ({lo}, {hi})"))?;
            if i > 0 {
                ensure(ivs[i - 1].hi < iv.lo || (ivs[i - 1].hi == iv.lo && !iv.exact && !ivs[i - 1].exact), || {
                    format!("case {case} {src}: intervals {} and {i} overlap", i - 1)
                })?;
            }
        }
        // A dense floating-point scan can only undercount.
        let bound = roots.iter().fold(1.0f64, |m, r| m.max(r.abs())) + 1.0;
        let f = p.to_f64_terms();
        let eval = |t: f64| f.iter().map(|(e, c)| c * t.powi(e[0] as i32)).sum::<f64>();
        let steps = 20_000;
        let mut prev = eval(-bound);
        let mut changes = 0;
        for s in 1..=steps {
            let v = eval(-bound + 2.0 * bound * s as f64 / steps as f64);
            // a grid point on a root counts once, not again on the far side
            if v == 0.0 || prev * v < 0.0 {
                changes += (prev != 0.0) as usize;
            }
            prev = v;
        }
        ensure(changes <= roots.len(), || format!("case {case} {src}: scan saw {changes} sign changes"))?;
        total += roots.len();
    }
    Ok(format!("500 polynomials, {total} roots bracketed"))
}

fn simulated_race() -> Check {
    let mut notes = Vec::new();
    for (label, (ps, vars)) in [("example 1", example1()), ("example 2", example2())] {
        let costs: Vec<(VariableOrder, usize)> = VariableOrder::all(vars.len())
            .into_iter()
            .map(|v| {
                let c = one_layered(&ps, &v).map(|c| c.stacks_lifted);
                c.map(|c| (v, c))
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let best = costs.iter().map(|c| c.1).min().unwrap();
        for seed in [0u64, 1, 2] {
            let run = || parallel_layered_heuristic(&ps, &vars, &AdmissibleOrderings::All, Scheduler::Simulated { seed });
            let a = run().map_err(|e| e.to_string())?;
            let b = run().map_err(|e| e.to_string())?;
            let cost = costs.iter().find(|c| c.0 == a.winner).unwrap().1;
            ensure(cost == best, || format!("{label} seed {seed}: winner {} costs {cost}, minimum {best}", a.winner.display(&vars)))?;
            ensure(a.winner == b.winner && a.stacks == b.stacks && a.finish_order == b.finish_order, || {
                format!("{label} seed {seed}: runs differ")
            })?;
            ensure(indices(&a.cad) == indices(&b.cad), || format!("{label} seed {seed}: decompositions differ"))?;
            ensure(a.registry.live() == 0 && b.registry.live() == 0, || format!("{label} seed {seed}: tasks left registered"))?;
        }
        notes.push(format!("{label}: minimum {best} stacks reached for seeds 0-2"));
    }
    Ok(notes.join("; "))
}

/// Title, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Check);

fn main() {
    let criteria: [Criterion; 8] = [
        ("example 1 exact counts (y≻x)", 5, example1_y_over_x),
        ("example 1 exact counts (x≻y) and selection", 5, example1_x_over_y),
        ("closed form = generating function = enumeration", 30, lemma_oracles),
        ("layered completion reproduces the full decomposition", 120, layered_completeness),
        ("binomial fits on random structures", 30, binomial_fits),
        ("example 2 ordering ranking", 600, example2_ranking),
        ("root isolation fuzz", 30, root_fuzz),
        ("first-finisher race contract", 10, simulated_race),
    ];
    let mut failed = 0;
    for (i, (title, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(limit) => Err(format!("{detail}; took {elapsed:.1?}, limit {limit} s")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {}  {status}  {title}  [{:.2} s]  {detail}", i + 1, elapsed.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
