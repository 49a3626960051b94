//! Seeded input generators.
//!
//! All randomness comes from Xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Bounded integers are drawn as
//! `(next_u64() · bound) >> 64` so the streams depend on the generator only.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{items_from_keys, Item};
use crate::runs::{dual_runs, RunDetection};

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Uniform integer in `0..bound`.
pub fn below(rng: &mut Xoshiro256PlusPlus, bound: u64) -> u64 {
    ((rng.next_u64() as u128 * bound as u128) >> 64) as u64
}

/// Fisher–Yates shuffle driven by [`below`].
pub fn shuffle<T>(v: &mut [T], rng: &mut Xoshiro256PlusPlus) {
    for i in (1..v.len()).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        v.swap(i, j);
    }
}

/// Ascending blocks with a strict descent at each boundary.
///
/// Greedy detection reproduces `lengths` exactly when every run but the
/// last has length at least 2; ascending detection always does.
pub fn array_from_run_lengths(lengths: &[usize]) -> Result<Vec<Item>> {
    if lengths.is_empty() {
        return Err(Error::EmptyInput);
    }
    if lengths.contains(&0) {
        return Err(Error::InvalidLength);
    }
    let n: usize = lengths.iter().sum();
    let rho = lengths.len();
    let mut keys = Vec::with_capacity(n);
    for (j, &len) in lengths.iter().enumerate() {
        let offset = ((rho - 1 - j) * (n + 1)) as i64;
        keys.extend((0..len as i64).map(|x| offset + x));
    }
    Ok(items_from_keys(keys))
}

/// An array with values `1..=σ` whose dual runs are exactly `s`.
pub fn array_with_dual_runs(s: &[usize], seed: u64) -> Result<Vec<Item>> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if s.contains(&0) {
        return Err(Error::ImpossibleProfile("dual-run lengths must be positive".into()));
    }
    let sigma = s.len();
    let mut keys: Vec<i64> = s
        .iter()
        .enumerate()
        .flat_map(|(v, &c)| std::iter::repeat_n(v as i64 + 1, c))
        .collect();
    let mut r = rng(seed);
    shuffle(&mut keys, &mut r);
    // Value v and v + 1 stay separate dual runs iff some v + 1 precedes
    // some v. Swapping the last v with the first v + 1 forces that, but may
    // undo a neighbouring boundary, so repeat a bounded number of times.
    for _ in 0..4 * sigma + 16 {
        let (first, last) = extremes(&keys, sigma);
        let broken: Vec<usize> = (0..sigma - 1).filter(|&v| last[v] < first[v + 1]).collect();
        if broken.is_empty() {
            break;
        }
        for v in broken {
            let (first, last) = extremes(&keys, sigma);
            if last[v] < first[v + 1] {
                keys.swap(last[v], first[v + 1]);
            }
        }
    }
    let items = items_from_keys(keys);
    if dual_runs(&items)? == s {
        return Ok(items);
    }
    // Blocks of decreasing value always work.
    let keys = s
        .iter()
        .enumerate()
        .rev()
        .flat_map(|(v, &c)| std::iter::repeat_n(v as i64 + 1, c));
    let items = items_from_keys(keys);
    debug_assert_eq!(dual_runs(&items)?, s);
    Ok(items)
}

fn extremes(keys: &[i64], sigma: usize) -> (Vec<usize>, Vec<usize>) {
    let mut first = vec![usize::MAX; sigma];
    let mut last = vec![0; sigma];
    for (i, &k) in keys.iter().enumerate() {
        let v = k as usize - 1;
        first[v] = first[v].min(i);
        last[v] = i;
    }
    (first, last)
}

/// `1, 2, 1, 4, 1, …, 1, 2^k, 1`; just `[1]` for `k = 0`.
pub fn gen_adaptive_shivers_worstcase(k: u32) -> Vec<usize> {
    let mut out = vec![1];
    for i in 1..=k {
        out.push(1 << i);
        out.push(1);
    }
    out
}

/// `S_0 = 1`, `S_{k+1} = S_k · 3^k · S_k`.
pub fn gen_peeksort_worstcase(k: u32) -> Vec<usize> {
    let mut s = vec![1usize];
    for i in 0..k {
        let mut next = s.clone();
        next.push(3usize.pow(i));
        next.extend_from_slice(&s);
        s = next;
    }
    s
}

/// Keys `1..=n` in uniformly random order.
pub fn random_permutation(n: usize, seed: u64) -> Result<Vec<Item>> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut keys: Vec<i64> = (1..=n as i64).collect();
    shuffle(&mut keys, &mut rng(seed));
    Ok(items_from_keys(keys))
}

/// `n` keys drawn uniformly from `1..=sigma`.
pub fn few_values(n: usize, sigma: u64, seed: u64) -> Result<Vec<Item>> {
    if n == 0 || sigma == 0 {
        return Err(Error::EmptyInput);
    }
    let mut r = rng(seed);
    Ok(items_from_keys((0..n).map(|_| below(&mut r, sigma) as i64 + 1)))
}

/// Random composition of `n` into `k` parts, each at least `min` (when
/// possible).
pub fn random_composition(n: usize, k: usize, min: usize, seed: u64) -> Vec<usize> {
    let k = k.clamp(1, n.max(1));
    let min = if min * k <= n { min } else { 1 };
    let spare = n - min * k;
    let mut r = rng(seed);
    let mut cuts: Vec<usize> = (0..k - 1).map(|_| below(&mut r, spare as u64 + 1) as usize).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(spare)) {
        out.push(min + c - prev);
        prev = c;
    }
    out
}

/// Interior run lengths drawn from {1, 1, 1, 2, 3}, for ascending detection.
pub fn unit_heavy_lengths(n: usize, seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let l = [1, 1, 1, 2, 3][below(&mut r, 5) as usize].min(left);
        out.push(l);
        left -= l;
    }
    out
}

/// Named input families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "param", rename_all = "kebab-case")]
pub enum Family {
    RandomPerm,
    /// A fixed run-length profile.
    RunLengths(Vec<usize>),
    /// A fixed dual-run profile.
    DualRuns(Vec<usize>),
    /// Keys drawn from `1..=σ`.
    FewValues(u64),
    /// About this many ascending runs of random lengths.
    FewRuns(usize),
    ManyUnitRuns,
    AdaptiveShiversWorst(u32),
    PeekSortWorst(u32),
}

/// A generated input and the run detection it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub items: Vec<Item>,
    pub detection: RunDetection,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::RandomPerm => "random-perm",
            Family::RunLengths(_) => "run-lengths",
            Family::DualRuns(_) => "dual-runs",
            Family::FewValues(_) => "few-values",
            Family::FewRuns(_) => "few-runs",
            Family::ManyUnitRuns => "many-unit-runs",
            Family::AdaptiveShiversWorst(_) => "adaptive-shivers-worst",
            Family::PeekSortWorst(_) => "peeksort-worst",
        }
    }

    /// Families with a prescribed profile ignore `n`.
    pub fn generate(&self, n: usize, seed: u64) -> Result<Case> {
        let greedy = |items| Case { items, detection: RunDetection::Greedy };
        let ascending = |items| Case { items, detection: RunDetection::Ascending };
        Ok(match self {
            Family::RandomPerm => greedy(random_permutation(n, seed)?),
            Family::RunLengths(l) => ascending(array_from_run_lengths(l)?),
            Family::DualRuns(s) => greedy(array_with_dual_runs(s, seed)?),
            Family::FewValues(sigma) => greedy(few_values(n, *sigma, seed)?),
            Family::FewRuns(k) => {
                if n == 0 {
                    return Err(Error::EmptyInput);
                }
                greedy(array_from_run_lengths(&random_composition(n, *k, 2, seed))?)
            }
            Family::ManyUnitRuns => {
                if n == 0 {
                    return Err(Error::EmptyInput);
                }
                ascending(array_from_run_lengths(&unit_heavy_lengths(n, seed))?)
            }
            Family::AdaptiveShiversWorst(k) => {
                ascending(array_from_run_lengths(&gen_adaptive_shivers_worstcase(*k))?)
            }
            Family::PeekSortWorst(k) => ascending(array_from_run_lengths(&gen_peeksort_worstcase(*k))?),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Family::RunLengths(l) | Family::DualRuns(l) => write!(f, "{}:{}", self.name(), list(l)),
            Family::FewValues(s) => write!(f, "{}:{s}", self.name()),
            Family::FewRuns(k) => write!(f, "{}:{k}", self.name()),
            Family::AdaptiveShiversWorst(k) | Family::PeekSortWorst(k) => write!(f, "{}:{k}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

pub fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("bad length {x:?}: {e}")))
        .collect()
}

impl FromStr for Family {
    type Err = String;

    /// `name` or `name:param`, e.g. `few-values:4`, `run-lengths:4,4,5,4`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let need = || param.ok_or_else(|| format!("family {name} needs a parameter, e.g. {name}:4"));
        let num = |p: &str| p.parse::<u64>().map_err(|e| format!("bad parameter {p:?}: {e}"));
        Ok(match name {
            "random-perm" => Family::RandomPerm,
            "many-unit-runs" => Family::ManyUnitRuns,
            "run-lengths" => Family::RunLengths(parse_list(need()?)?),
            "dual-runs" => Family::DualRuns(parse_list(need()?)?),
            "few-values" => Family::FewValues(num(param.unwrap_or("2"))?),
            "few-runs" => Family::FewRuns(num(param.unwrap_or("8"))? as usize),
            "adaptive-shivers-worst" => Family::AdaptiveShiversWorst(num(need()?)? as u32),
            "peeksort-worst" => Family::PeekSortWorst(num(need()?)? as u32),
            _ => return Err(format!("unknown family {name:?}")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runs::run_lengths;
    use proptest::prelude::*;

    #[test]
    fn run_length_examples() {
        let a = array_from_run_lengths(&[4, 4, 5, 4]).unwrap();
        assert_eq!(run_lengths(&a, RunDetection::Greedy).unwrap(), vec![4, 4, 5, 4]);
        assert_eq!(run_lengths(&a, RunDetection::Ascending).unwrap(), vec![4, 4, 5, 4]);
        assert_eq!(array_from_run_lengths(&[1]).unwrap().len(), 1);
        let ones = array_from_run_lengths(&[1; 6]).unwrap();
        assert!(ones.windows(2).all(|w| w[0].key > w[1].key));
        assert_eq!(run_lengths(&ones, RunDetection::Ascending).unwrap(), vec![1; 6]);
    }

    #[test]
    fn worst_case_profiles() {
        assert_eq!(gen_adaptive_shivers_worstcase(0), vec![1]);
        assert_eq!(gen_adaptive_shivers_worstcase(2), vec![1, 2, 1, 4, 1]);
        assert_eq!(gen_adaptive_shivers_worstcase(3), vec![1, 2, 1, 4, 1, 8, 1]);
        for k in 0..=12u32 {
            let l = gen_adaptive_shivers_worstcase(k);
            assert_eq!(l.len(), 2 * k as usize + 1);
            assert_eq!(l.iter().sum::<usize>(), (1 << (k + 1)) + k as usize - 1);
        }
        assert_eq!(gen_peeksort_worstcase(0), vec![1]);
        assert_eq!(gen_peeksort_worstcase(1), vec![1, 1, 1]);
        assert_eq!(gen_peeksort_worstcase(2), vec![1, 1, 1, 3, 1, 1, 1]);
        for k in 0..=10u32 {
            assert_eq!(gen_peeksort_worstcase(k).iter().sum::<usize>(), 3usize.pow(k));
        }
    }

    #[test]
    fn dual_run_examples() {
        let a = array_with_dual_runs(&[3, 3, 4], 42).unwrap();
        assert_eq!(dual_runs(&a).unwrap(), vec![3, 3, 4]);
        let a = array_with_dual_runs(&[7], 1).unwrap();
        assert_eq!(dual_runs(&a).unwrap(), vec![7]);
        let a = array_with_dual_runs(&[1; 9], 5).unwrap();
        assert_eq!(dual_runs(&a).unwrap(), vec![1; 9]);
        assert!(array_with_dual_runs(&[2, 0, 1], 0).is_err());
        assert!(array_with_dual_runs(&[], 0).is_err());
    }

    #[test]
    fn permutations() {
        let p = random_permutation(1, 3).unwrap();
        assert_eq!(p[0].key, 1);
        assert_eq!(random_permutation(500, 9).unwrap(), random_permutation(500, 9).unwrap());
        assert_ne!(random_permutation(500, 9).unwrap(), random_permutation(500, 10).unwrap());
        let mut keys: Vec<i64> = random_permutation(1000, 4).unwrap().iter().map(|i| i.key).collect();
        keys.sort();
        assert_eq!(keys, (1..=1000).collect::<Vec<_>>());
        assert!(random_permutation(0, 1).is_err());
    }

    #[test]
    fn random_permutation_run_count_band() {
        // Greedy runs have mean length 1 + 2(e − 2); alternating up/down
        // runs, which share their end points, number (2n − 1)/3 on average.
        let n = 10_000usize;
        let (mut greedy, mut alternating) = (0usize, 0usize);
        for seed in 0..100 {
            let p = random_permutation(n, seed).unwrap();
            greedy += run_lengths(&p, RunDetection::Greedy).unwrap().len();
            let ups: Vec<bool> = p.windows(2).map(|w| w[0].key < w[1].key).collect();
            alternating += 1 + ups.windows(2).filter(|w| w[0] != w[1]).count();
        }
        let sd = (n as f64).sqrt();
        let greedy_mean = greedy as f64 / 100.0;
        let expect = n as f64 / (2.0 * std::f64::consts::E - 3.0);
        assert!((greedy_mean - expect).abs() < sd, "{greedy_mean} vs {expect}");
        let alt_mean = alternating as f64 / 100.0;
        assert!((alt_mean - (2.0 * n as f64 - 1.0) / 3.0).abs() < sd, "{alt_mean}");
    }

    #[test]
    fn family_names_roundtrip() {
        for f in [
            "random-perm",
            "many-unit-runs",
            "few-values:4",
            "few-runs:3",
            "run-lengths:4,4,5,4",
            "dual-runs:3,3,4",
            "adaptive-shivers-worst:5",
            "peeksort-worst:3",
        ] {
            let fam: Family = f.parse().unwrap();
            assert_eq!(fam.to_string(), f);
            let case = fam.generate(300, 1).unwrap();
            assert!(!case.items.is_empty());
        }
        assert!("nope".parse::<Family>().is_err());
        assert!("peeksort-worst".parse::<Family>().is_err());
    }

    #[test]
    fn family_profiles_roundtrip() {
        let c = Family::FewRuns(5).generate(1000, 3).unwrap();
        assert_eq!(run_lengths(&c.items, c.detection).unwrap().len(), 5);
        let c = Family::AdaptiveShiversWorst(4).generate(0, 0).unwrap();
        assert_eq!(run_lengths(&c.items, c.detection).unwrap(), gen_adaptive_shivers_worstcase(4));
        let c = Family::ManyUnitRuns.generate(500, 2).unwrap();
        let l = run_lengths(&c.items, c.detection).unwrap();
        assert_eq!(l, unit_heavy_lengths(500, 2));
        assert!(l.iter().filter(|&&x| x == 1).count() > l.len() / 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn run_profile_roundtrip(lengths in prop::collection::vec(1usize..12, 1..40)) {
            let a = array_from_run_lengths(&lengths).unwrap();
            prop_assert_eq!(&run_lengths(&a, RunDetection::Ascending).unwrap(), &lengths);
            let wide: Vec<usize> = lengths.iter().map(|&l| l + 1).collect();
            let b = array_from_run_lengths(&wide).unwrap();
            prop_assert_eq!(&run_lengths(&b, RunDetection::Greedy).unwrap(), &wide);
        }

        #[test]
        fn dual_profile_roundtrip(s in prop::collection::vec(1usize..8, 1..30), seed in any::<u64>()) {
            let a = array_with_dual_runs(&s, seed).unwrap();
            prop_assert_eq!(&dual_runs(&a).unwrap(), &s);
        }
    }
}
