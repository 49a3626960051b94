//! Run detection, dual runs and entropies.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{by_key, Counter, Item};
use crate::tree::RunSpan;

/// How the input is cut into runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunDetection {
    /// The first two elements fix the direction; strictly decreasing runs
    /// are reversed in place.
    #[default]
    Greedy,
    /// Maximal non-decreasing segments only.
    ///
    /// Greedy detection never yields a run of length 1 except at the very
    /// end, so profiles with interior unit runs need this mode.
    Ascending,
}

impl std::str::FromStr for RunDetection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "greedy" => Ok(RunDetection::Greedy),
            "ascending" => Ok(RunDetection::Ascending),
            _ => Err(format!("unknown run detection {s:?} (expected greedy or ascending)")),
        }
    }
}

/// Greedy run detection on items, reversing decreasing runs.
pub fn detect_runs<K: Ord>(array: &mut [Item<K>]) -> Result<Vec<RunSpan>> {
    let mut counter = Counter::new(by_key::<K>);
    detect_runs_with(array, RunDetection::Greedy, &mut counter)
}

/// Run detection with an explicit mode and counter. Uses exactly `n − 1`
/// comparisons.
pub fn detect_runs_with<T, F>(
    data: &mut [T],
    mode: RunDetection,
    counter: &mut Counter<F>,
) -> Result<Vec<RunSpan>>
where
    F: FnMut(&T, &T) -> Ordering,
{
    let n = data.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut runs = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        if j < n && mode == RunDetection::Greedy && counter.lt(&data[j], &data[j - 1]) {
            j += 1;
            while j < n && counter.lt(&data[j], &data[j - 1]) {
                j += 1;
            }
            data[i..j].reverse();
        } else if j < n {
            if mode == RunDetection::Ascending && counter.lt(&data[j], &data[j - 1]) {
                runs.push(RunSpan::new(i, 1));
                i = j;
                continue;
            }
            j += 1;
            while j < n && !counter.lt(&data[j], &data[j - 1]) {
                j += 1;
            }
        }
        runs.push(RunSpan::new(i, j - i));
        i = j;
    }
    Ok(runs)
}

/// Run lengths of `keys` without reordering anything.
pub fn run_lengths<K: Ord + Clone>(items: &[Item<K>], mode: RunDetection) -> Result<Vec<usize>> {
    let mut copy = items.to_vec();
    let mut counter = Counter::new(by_key::<K>);
    Ok(detect_runs_with(&mut copy, mode, &mut counter)?
        .into_iter()
        .map(|r| r.len)
        .collect())
}

/// Dual-run lengths: maximal ascending runs of the stable argsort.
pub fn dual_runs<K: Ord>(array: &[Item<K>]) -> Result<Vec<usize>> {
    if array.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pos: Vec<usize> = (0..array.len()).collect();
    pos.sort_by(|&a, &b| array[a].key.cmp(&array[b].key));
    let mut out = Vec::new();
    let mut len = 1;
    for w in pos.windows(2) {
        if w[1] > w[0] {
            len += 1;
        } else {
            out.push(len);
            len = 1;
        }
    }
    out.push(len);
    Ok(out)
}

/// Replaces keys by their rank among distinct keys, `1..=σ'`.
pub fn rank_compress<K: Ord>(array: &[Item<K>]) -> Result<Vec<Item<u64>>> {
    if array.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pos: Vec<usize> = (0..array.len()).collect();
    pos.sort_by(|&a, &b| array[a].key.cmp(&array[b].key));
    let mut ranks = vec![0u64; array.len()];
    let mut rank = 0;
    for (i, &p) in pos.iter().enumerate() {
        if i == 0 || array[pos[i - 1]].key != array[p].key {
            rank += 1;
        }
        ranks[p] = rank;
    }
    Ok(array
        .iter()
        .zip(ranks)
        .map(|(it, key)| Item { key, tag: it.tag })
        .collect())
}

/// Base-2 Shannon entropy of the distribution `lengths / Σ lengths`.
pub fn entropy(lengths: &[usize]) -> Result<f64> {
    if lengths.is_empty() {
        return Err(Error::EmptyInput);
    }
    if lengths.contains(&0) {
        return Err(Error::InvalidLength);
    }
    let n: f64 = lengths.iter().map(|&l| l as f64).sum();
    let weighted: f64 = lengths.iter().map(|&l| l as f64 * (l as f64).log2()).sum();
    Ok((n.log2() - weighted / n).max(0.0))
}

/// Presortedness measures of one array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub n: usize,
    pub run_lengths: Vec<usize>,
    pub rho: usize,
    #[serde(rename = "H")]
    pub h: f64,
    pub dual_run_lengths: Vec<usize>,
    pub sigma: usize,
    #[serde(rename = "H_star")]
    pub h_star: f64,
}

impl EntropyReport {
    pub fn new<K: Ord + Clone>(array: &[Item<K>], mode: RunDetection) -> Result<Self> {
        let run_lengths = run_lengths(array, mode)?;
        let dual_run_lengths = dual_runs(array)?;
        Ok(EntropyReport {
            n: array.len(),
            rho: run_lengths.len(),
            h: entropy(&run_lengths)?,
            sigma: dual_run_lengths.len(),
            h_star: entropy(&dual_run_lengths)?,
            run_lengths,
            dual_run_lengths,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item::{is_stably_sorted, items_from_keys};
    use proptest::prelude::*;

    fn lengths(keys: &[i64], mode: RunDetection) -> (Vec<usize>, u64, Vec<Item>) {
        let mut items = items_from_keys(keys.iter().copied());
        let mut c = Counter::new(by_key::<i64>);
        let runs = detect_runs_with(&mut items, mode, &mut c).unwrap();
        (runs.iter().map(|r| r.len).collect(), c.count(), items)
    }

    #[test]
    fn figure_one_runs() {
        let keys = [12, 7, 6, 5, 5, 7, 14, 36, 3, 3, 5, 21, 21, 20, 8, 5, 1];
        let (l, c, items) = lengths(&keys, RunDetection::Greedy);
        assert_eq!(l, vec![4, 4, 5, 4]);
        assert_eq!(c, 16);
        assert_eq!(items[0].key, 5);
        assert_eq!(items[3].key, 12);
    }

    #[test]
    fn simple_runs() {
        assert_eq!(lengths(&[1, 2, 3], RunDetection::Greedy).0, vec![3]);
        assert_eq!(lengths(&[2, 2, 1], RunDetection::Greedy).0, vec![2, 1]);
        assert_eq!(lengths(&[3, 2, 1], RunDetection::Greedy).0, vec![3]);
        assert_eq!(lengths(&[3, 2, 1], RunDetection::Ascending).0, vec![1, 1, 1]);
        assert_eq!(lengths(&[7], RunDetection::Greedy).0, vec![1]);
        let mut empty: Vec<Item> = vec![];
        assert_eq!(detect_runs(&mut empty), Err(Error::EmptyInput));
    }

    #[test]
    fn dual_run_examples() {
        assert_eq!(dual_runs(&items_from_keys([2i64, 1, 2, 1])).unwrap(), vec![2, 2]);
        assert_eq!(dual_runs(&items_from_keys(1i64..=6)).unwrap(), vec![6]);
        assert_eq!(dual_runs(&items_from_keys((1i64..=5).rev())).unwrap(), vec![1; 5]);
    }

    #[test]
    fn rank_examples() {
        let r = rank_compress(&items_from_keys([10i64, 30, 20])).unwrap();
        assert_eq!(r.iter().map(|i| i.key).collect::<Vec<_>>(), vec![1, 3, 2]);
        let r = rank_compress(&items_from_keys([5i64, 5, 5])).unwrap();
        assert_eq!(r.iter().map(|i| i.key).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[9]).unwrap(), 0.0);
        assert!((entropy(&[2, 1, 1]).unwrap() - 1.5).abs() < 1e-12);
        for rho in 1..200usize {
            assert!((entropy(&vec![3; rho]).unwrap() - (rho as f64).log2()).abs() < 1e-12);
        }
        assert_eq!(entropy(&[1, 0]), Err(Error::InvalidLength));
        assert_eq!(entropy(&[]), Err(Error::EmptyInput));
    }

    /// Direct evaluation of the dual-run definition: greedily extend each
    /// interval of values while the array stays non-decreasing on it.
    fn dual_runs_by_definition(keys: &[i64]) -> Vec<usize> {
        let mut values: Vec<i64> = keys.to_vec();
        values.sort();
        values.dedup();
        let nondecreasing_on = |lo: i64, hi: i64| {
            let sub: Vec<i64> = keys.iter().copied().filter(|&k| lo <= k && k <= hi).collect();
            sub.windows(2).all(|w| w[0] <= w[1])
        };
        let mut out = Vec::new();
        let mut i = 0;
        while i < values.len() {
            let mut j = i;
            while j + 1 < values.len() && nondecreasing_on(values[i], values[j + 1]) {
                j += 1;
            }
            out.push(keys.iter().filter(|&&k| values[i] <= k && k <= values[j]).count());
            i = j + 1;
        }
        out
    }

    #[test]
    fn dual_runs_match_definition_exhaustively() {
        for n in 1..=8u32 {
            for code in 0..3usize.pow(n) {
                let mut c = code;
                let keys: Vec<i64> = (0..n)
                    .map(|_| {
                        let k = (c % 3) as i64 + 1;
                        c /= 3;
                        k
                    })
                    .collect();
                let items = items_from_keys(keys.iter().copied());
                assert_eq!(dual_runs(&items).unwrap(), dual_runs_by_definition(&keys), "{keys:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn detection_properties(keys in prop::collection::vec(-20i64..20, 1..200), asc in any::<bool>()) {
            let mode = if asc { RunDetection::Ascending } else { RunDetection::Greedy };
            let (l, c, items) = lengths(&keys, mode);
            prop_assert_eq!(c, keys.len() as u64 - 1);
            prop_assert_eq!(l.iter().sum::<usize>(), keys.len());
            let mut start = 0;
            for len in l {
                prop_assert!(is_stably_sorted(&items[start..start + len]));
                start += len;
            }
            let mut sorted_in: Vec<i64> = keys.clone();
            sorted_in.sort();
            let mut sorted_out: Vec<i64> = items.iter().map(|i| i.key).collect();
            sorted_out.sort();
            prop_assert_eq!(sorted_in, sorted_out);
        }

        #[test]
        fn dual_run_invariances(keys in prop::collection::vec(-50i64..50, 1..150)) {
            let items = items_from_keys(keys.iter().copied());
            let d = dual_runs(&items).unwrap();
            prop_assert_eq!(d.iter().sum::<usize>(), keys.len());
            let ranked = rank_compress(&items).unwrap();
            prop_assert_eq!(&dual_runs(&ranked).unwrap(), &d);
            let shifted = items_from_keys(keys.iter().map(|k| 3 * k + 1));
            prop_assert_eq!(&dual_runs(&shifted).unwrap(), &d);
            let mut distinct = keys.clone();
            distinct.sort();
            distinct.dedup();
            prop_assert!(d.len() <= distinct.len());
            let sigma = ranked.iter().map(|i| i.key).max().unwrap();
            prop_assert_eq!(sigma as usize, distinct.len());
            for i in 0..keys.len() {
                for j in 0..keys.len() {
                    prop_assert_eq!(keys[i].cmp(&keys[j]), ranked[i].key.cmp(&ranked[j].key));
                }
            }
            let e = entropy(&d).unwrap();
            prop_assert!(e >= 0.0 && e <= (d.len() as f64).log2() + 1e-12);
        }
    }
}
