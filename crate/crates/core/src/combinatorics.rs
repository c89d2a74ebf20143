//! Cell-dimension combinatorics of cylindrical structures.
//!
//! A structure with `k_m` sections in every cylinder at level `m` has
//! `D_i = sum_{|P| = i} prod_{a in P} (k_a + 1) prod_{b not in P} k_b`
//! cells of dimension `i`, with generating function `prod (k_i + (k_i + 1) x)`.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("a level profile needs at least one level")]
    EmptyProfile,
    #[error("section counts must be at least 1 (got {0})")]
    ZeroSections(u32),
    #[error("empty range")]
    EmptyRange,
}

/// Cell counts by dimension, `counts[i]` cells of dimension `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionDistribution {
    counts: Vec<u64>,
}

impl DimensionDistribution {
    pub fn new(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty(), "distribution over at least dimension 0");
        DimensionDistribution { counts }
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact proportions; all zero for an empty distribution.
    pub fn proportions(&self) -> Vec<BigRational> {
        let total = self.total();
        self.counts
            .iter()
            .map(|&c| {
                if total == 0 {
                    BigRational::from_integer(0.into())
                } else {
                    BigRational::new(BigInt::from(c), BigInt::from(total))
                }
            })
            .collect()
    }

    pub fn proportions_f64(&self) -> Vec<f64> {
        self.proportions().iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// `dimension,count,proportion` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dimension,count,proportion\n");
        for (i, (c, p)) in self.counts.iter().zip(self.proportions_f64()).enumerate() {
            writeln!(out, "{i},{c},{p:.6}").unwrap();
        }
        out
    }
}

/// Section counts `k_1..k_n`, the same in every cylinder of a level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelProfile {
    k: Vec<u32>,
}

impl LevelProfile {
    pub fn new(k: Vec<u32>) -> Result<Self, CombinatoricsError> {
        if k.is_empty() {
            return Err(CombinatoricsError::EmptyProfile);
        }
        if let Some(&z) = k.iter().find(|&&k| k == 0) {
            return Err(CombinatoricsError::ZeroSections(z));
        }
        Ok(LevelProfile { k })
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.k.len()
    }

    /// `prod (2 k_i + 1)`.
    pub fn total_cells(&self) -> u64 {
        self.k.iter().map(|&k| 2 * k as u64 + 1).product()
    }
}

/// Closed-form counts, summing over the subsets of sector levels.
pub fn lemma1_counts(profile: &LevelProfile) -> DimensionDistribution {
    let n = profile.n();
    let mut counts = vec![0u64; n + 1];
    for mask in 0u32..(1 << n) {
        let term: u64 = profile
            .k
            .iter()
            .enumerate()
            .map(|(a, &k)| if mask >> a & 1 == 1 { k as u64 + 1 } else { k as u64 })
            .product();
        counts[mask.count_ones() as usize] += term;
    }
    DimensionDistribution::new(counts)
}

/// Coefficients of `prod (k_i + (k_i + 1) x)`.
pub fn generating_counts(profile: &LevelProfile) -> DimensionDistribution {
    let mut coeffs = vec![1u64];
    for &k in &profile.k {
        let mut next = vec![0u64; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += c * k as u64;
            next[i + 1] += c * (k as u64 + 1);
        }
        coeffs = next;
    }
    DimensionDistribution::new(coeffs)
}

/// Every cell index of the uniform structure, lexicographically.
pub fn enumerate_indices(profile: &LevelProfile) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &k in &profile.k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=2 * k + 1).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenerationMode {
    /// One section count per level, shared by all its cylinders.
    UniformPerLevel,
    /// A fresh section count for every cylinder.
    PerCylinder,
}

impl std::str::FromStr for GenerationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" | "uniform-per-level" => Ok(GenerationMode::UniformPerLevel),
            "per-cylinder" | "per-cylinder-random" => Ok(GenerationMode::PerCylinder),
            other => Err(format!("unknown mode '{other}' (expected uniform or per-cylinder)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomConfig {
    pub n: RangeInclusive<usize>,
    pub sections: RangeInclusive<u32>,
    pub mode: GenerationMode,
}

impl RandomConfig {
    /// Dimensions 2 to 6, 1 to 7 sections per cylinder.
    pub fn defaults(mode: GenerationMode) -> Self {
        RandomConfig { n: 2..=6, sections: 1..=7, mode }
    }
}

/// A set of cell indices with cylindrical structure and no polynomials.
/// Indices are stored flattened, `n` entries per cell, in lexicographic
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialCad {
    n: usize,
    mode: GenerationMode,
    flat: Vec<u16>,
}

impl CombinatorialCad {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> GenerationMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = &[u16]> {
        self.flat.chunks(self.n)
    }

    pub fn histogram(&self) -> DimensionDistribution {
        let mut counts = vec![0u64; self.n + 1];
        for idx in self.indices() {
            counts[idx.iter().filter(|&&i| i % 2 == 1).count()] += 1;
        }
        DimensionDistribution::new(counts)
    }

    /// Indices are sorted and every prefix's children are numbered
    /// `1..=2k+1` without gaps.
    pub fn is_cylindrical(&self) -> bool {
        let cells: Vec<&[u16]> = self.indices().collect();
        if cells.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        for j in 0..self.n {
            let mut i = 0;
            while i < cells.len() {
                let prefix = &cells[i][..j];
                let (mut expect, mut last) = (1u16, 0u16);
                while i < cells.len() && &cells[i][..j] == prefix {
                    let e = cells[i][j];
                    if e != last {
                        if e != expect {
                            return false;
                        }
                        last = e;
                        expect += 1;
                    }
                    i += 1;
                }
                if last % 2 == 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Mixes a seed with a cylinder's path so that each cylinder draws the
/// same section count regardless of generation order.
fn path_seed(seed: u64, path: &[u16]) -> u64 {
    // splitmix64 finalizer over the path entries
    let mix = |mut z: u64| {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let mut h = mix(seed.wrapping_add(0x9e3779b97f4a7c15));
    h = mix(h ^ path.len() as u64);
    for &p in path {
        h = mix(h.wrapping_add(p as u64).wrapping_add(0x9e3779b97f4a7c15));
    }
    h
}

/// Seeded random structure. The dimension is drawn from `config.n`, then
/// section counts per level or per cylinder.
pub fn random_structure(seed: u64, config: &RandomConfig) -> Result<CombinatorialCad, CombinatoricsError> {
    if config.n.is_empty() || config.sections.is_empty() || *config.sections.start() == 0 || *config.n.start() == 0 {
        return Err(CombinatoricsError::EmptyRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(path_seed(seed, &[]));
    let n = rng.gen_range(config.n.clone());
    let flat = match config.mode {
        GenerationMode::UniformPerLevel => {
            let k: Vec<u32> = (0..n).map(|_| rng.gen_range(config.sections.clone())).collect();
            let profile = LevelProfile::new(k).expect("ranges start at 1");
            enumerate_indices(&profile).into_iter().flatten().map(|i| i as u16).collect()
        }
        GenerationMode::PerCylinder => {
            let mut flat = Vec::new();
            let mut path = Vec::with_capacity(n);
            grow(seed, n, &config.sections, &mut path, &mut flat);
            flat
        }
    };
    Ok(CombinatorialCad { n, mode: config.mode, flat })
}

fn grow(seed: u64, n: usize, sections: &RangeInclusive<u32>, path: &mut Vec<u16>, flat: &mut Vec<u16>) {
    if path.len() == n {
        flat.extend_from_slice(path);
        return;
    }
    let k = ChaCha8Rng::seed_from_u64(path_seed(seed, path)).gen_range(sections.clone());
    for i in 1..=(2 * k + 1) as u16 {
        path.push(i);
        grow(seed, n, sections, path, flat);
        path.pop();
    }
}

/// `count` structures; structure `i` uses a seed derived from `(seed, i)`.
pub fn random_structures(
    seed: u64,
    count: usize,
    config: &RandomConfig,
) -> Result<Vec<CombinatorialCad>, CombinatoricsError> {
    (0..count).map(|i| random_structure(path_seed(seed, &[i as u16, 0xffff]), config)).collect()
}

/// `C(n, x) p^x (1 - p)^(n - x)`, zero outside `0..=n`.
pub fn binomial_pmf(n: u32, p: f64, x: i64) -> f64 {
    if x < 0 || x > n as i64 {
        return 0.0;
    }
    let x = x as u32;
    let mut c = 1.0f64;
    for i in 0..x {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinomialFit {
    pub n: usize,
    pub p: f64,
    /// Total-variation distance between the data and `Binomial(n, p)`.
    pub distance: f64,
}

/// Mean-matching fit `p = sum i q_i / n` on proportions `q_0..q_n`.
pub fn fit_binomial_proportions(q: &[f64]) -> BinomialFit {
    let n = q.len() - 1;
    let total: f64 = q.iter().sum();
    let q: Vec<f64> = q.iter().map(|x| x / total).collect();
    let mean: f64 = q.iter().enumerate().map(|(i, x)| i as f64 * x).sum();
    let p = if n == 0 { 1.0 } else { (mean / n as f64).clamp(0.0, 1.0) };
    let distance = 0.5 * q.iter().enumerate().map(|(i, x)| (x - binomial_pmf(n as u32, p, i as i64)).abs()).sum::<f64>();
    BinomialFit { n, p, distance }
}

pub fn fit_binomial(dist: &DimensionDistribution) -> BinomialFit {
    fit_binomial_proportions(&dist.proportions_f64())
}

/// Average of the proportion vectors of distributions sharing one `n`.
pub fn mean_proportions(dists: &[DimensionDistribution]) -> Vec<f64> {
    let n = dists[0].n();
    let mut acc = vec![0.0; n + 1];
    for d in dists {
        assert_eq!(d.n(), n, "mixed dimensions");
        for (a, p) in acc.iter_mut().zip(d.proportions_f64()) {
            *a += p;
        }
    }
    acc.iter().map(|a| a / dists.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(k: &[u32]) -> LevelProfile {
        LevelProfile::new(k.to_vec()).unwrap()
    }

    #[test]
    fn lemma_counts_small_cases() {
        assert_eq!(lemma1_counts(&profile(&[1, 1])).counts(), &[1, 4, 4]);
        assert_eq!(lemma1_counts(&profile(&[2, 3])).counts(), &[6, 17, 12]);
        assert_eq!(generating_counts(&profile(&[3])).counts(), &[3, 4]);
        assert_eq!(generating_counts(&profile(&[1, 1])).counts(), &[1, 4, 4]);
        assert_eq!(enumerate_indices(&profile(&[1, 1])).len(), 9);
    }

    #[test]
    fn pmf_values() {
        assert!((binomial_pmf(2, 0.5, 1) - 0.5).abs() < 1e-12);
        assert!((binomial_pmf(2, 0.6, 2) - 0.36).abs() < 1e-12);
        assert_eq!(binomial_pmf(4, 0.3, -1), 0.0);
        assert_eq!(binomial_pmf(4, 0.3, 5), 0.0);
    }

    #[test]
    fn fit_recovers_exact_binomial() {
        let d = DimensionDistribution::new(vec![16, 48, 36]); // Binomial(2, 0.6) * 100
        let fit = fit_binomial(&d);
        assert!((fit.p - 0.6).abs() < 1e-12);
        assert!(fit.distance < 1e-12);
        let all_top = fit_binomial(&DimensionDistribution::new(vec![0, 0, 0, 7]));
        assert_eq!(all_top.p, 1.0);
    }

    #[test]
    fn uniform_structure_matches_lemma() {
        let config = RandomConfig { n: 2..=2, sections: 1..=1, mode: GenerationMode::UniformPerLevel };
        let s = random_structure(3, &config).unwrap();
        assert_eq!(s.len(), 9);
        assert!(s.is_cylindrical());
        assert_eq!(s.histogram().counts(), &[1, 4, 4]);
    }

    #[test]
    fn per_cylinder_is_deterministic_and_cylindrical() {
        let config = RandomConfig::defaults(GenerationMode::PerCylinder);
        let a = random_structures(7, 3, &config).unwrap();
        let b = random_structures(7, 3, &config).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(CombinatorialCad::is_cylindrical));
    }

    #[test]
    fn csv_export() {
        let csv = DimensionDistribution::new(vec![1, 4, 4]).to_csv();
        assert_eq!(csv.lines().next(), Some("dimension,count,proportion"));
        assert_eq!(csv.lines().nth(2), Some("1,4,0.444444"));
    }
}
