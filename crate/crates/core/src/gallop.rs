//! Merging sub-routines.
//!
//! The galloping search is McIlroy's mix of linear and exponential search:
//! probe one position at a time for `t` steps, then switch to an
//! exponential search followed by a binary search on the bracket found.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::Counter;
use crate::report::MergeRecord;

/// Merge sub-routine and its parameter policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", content = "param")]
pub enum GallopConfig {
    Naive,
    FixedT(u32),
    /// `t` starts at the given value and is adjusted after each block.
    TimsortUpdate(u32),
    /// `t = ⌈log₂(a + b)⌉` for each merge.
    Logarithmic,
    /// `t = τ·⌈log₂(a + b)⌉` for each merge.
    LogScaled(u32),
}

pub const DEFAULT_T: u32 = 7;

impl Default for GallopConfig {
    fn default() -> Self {
        GallopConfig::FixedT(DEFAULT_T)
    }
}

impl GallopConfig {
    pub fn is_naive(&self) -> bool {
        matches!(self, GallopConfig::Naive)
    }

    /// Modes whose `t` never changes within a merge.
    pub fn has_fixed_t_per_merge(&self) -> bool {
        matches!(
            self,
            GallopConfig::FixedT(_) | GallopConfig::Logarithmic | GallopConfig::LogScaled(_)
        )
    }

    /// The parameter used for a merge of total length `total`.
    pub fn t_for(&self, total: usize, state: &GallopState) -> Option<u32> {
        let lg = ceil_log2(total as u64);
        match *self {
            GallopConfig::Naive => None,
            GallopConfig::FixedT(t) => Some(t),
            GallopConfig::TimsortUpdate(_) => Some(state.t),
            GallopConfig::Logarithmic => Some(lg),
            GallopConfig::LogScaled(tau) => Some(tau.saturating_mul(lg)),
        }
    }
}

/// Parameter carried from one merge to the next within a sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GallopState {
    pub t: u32,
}

impl GallopState {
    pub fn new(config: &GallopConfig) -> Self {
        let t = match *config {
            GallopConfig::FixedT(t) | GallopConfig::TimsortUpdate(t) => t,
            _ => 0,
        };
        GallopState { t }
    }
}

/// Which leading elements a search counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bias {
    /// Elements `≤ key`; used when searching the left run.
    TakeWhileLe,
    /// Elements `< key`; used when searching the right run.
    TakeWhileLt,
}

/// `⌈log₂ x⌉` for `x ≥ 1`, and 0 for `x = 0`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Number of probes the search needs to find a block of length `m`.
pub fn cost_t(t: u32, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    let t = t as u64;
    if m <= t + 2 {
        Ok(m)
    } else {
        Ok(t + 2 * ceil_log2(m - t) as u64)
    }
}

/// `min{(1 + 1/(t+3))·m, t + 2 + 2·log₂(m + 1)}`.
pub fn cost_star(t: u32, m: u64) -> f64 {
    let (t, mf) = (t as f64, m as f64);
    let linear = mf + mf / (t + 3.0);
    let log = t + 2.0 + 2.0 * (mf + 1.0).log2();
    linear.min(log)
}

/// Integer test of `c ≤ cost_star(t, m)`, free of rounding.
pub fn within_cost_star(c: u64, t: u32, m: u64) -> bool {
    let t = t as u64;
    // c ≤ m + m/(t+3)
    let linear = (c as u128) * (t as u128 + 3) <= (m as u128) * (t as u128 + 4);
    // c ≤ t + 2 + 2·log₂(m+1)  ⟺  2^(c − t − 2) ≤ (m+1)²
    let log = c <= t + 2 || {
        let e = c - t - 2;
        e < 127 && (1u128 << e) <= (m as u128 + 1) * (m as u128 + 1)
    };
    linear && log
}

/// `min{m, log₂(m + 1) + c}`.
pub fn cost_ideal(m: u64, c: f64) -> f64 {
    (m as f64).min(((m + 1) as f64).log2() + c)
}

/// The per-block parameter update.
pub fn update_t(t: u32, m: usize) -> u32 {
    let (t64, m) = (t as u64, m as u64);
    if m <= t64 {
        t
    } else if m <= t64 + 6 {
        t + 1
    } else {
        t.saturating_sub(1)
    }
}

/// Finds the least `M ≥ 1` with `probe(M)` true, for a monotone predicate.
/// Positions `≥ limit` are known to satisfy the predicate and are never
/// probed. Returns `M` and the number of probes made.
fn search(t: u32, limit: usize, mut probe: impl FnMut(usize) -> bool) -> (usize, u64) {
    debug_assert!(limit >= 1);
    let t = t as usize;
    let mut paid = 0u64;
    let mut x = 1;
    while x <= t {
        if x >= limit {
            return (x, paid);
        }
        paid += 1;
        if probe(x) {
            return (x, paid);
        }
        x += 1;
    }
    let mut lo = t;
    let mut step = 1usize;
    let mut hi;
    loop {
        let x = t.saturating_add(step);
        if x >= limit {
            hi = limit;
            break;
        }
        paid += 1;
        if probe(x) {
            hi = x;
            break;
        }
        lo = x;
        step = step.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        paid += 1;
        if probe(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, paid)
}

fn debug_check_cost(t: u32, m: usize, paid: u64) {
    debug_assert!(
        m == 0 || paid <= cost_t(t, m as u64).unwrap(),
        "search used {paid} probes for m = {m} at t = {t}"
    );
}

/// Counts how many leading elements of `run` satisfy `bias` against `key`.
///
/// Probes past the end of the run are free, so the cost is at most
/// `cost_t(min(m + 1, run.len()))`.
pub fn gallop_find<T, F>(
    run: &[T],
    key: &T,
    bias: Bias,
    t: u32,
    counter: &mut Counter<F>,
) -> Result<usize>
where
    F: FnMut(&T, &T) -> Ordering,
{
    if cfg!(debug_assertions) && !counter.is_sorted(run) {
        return Err(Error::UnsortedRun);
    }
    let (m1, paid) = search(t, run.len() + 1, |x| match bias {
        Bias::TakeWhileLe => counter.lt(key, &run[x - 1]),
        Bias::TakeWhileLt => !counter.lt(&run[x - 1], key),
    });
    let m = m1 - 1;
    debug_check_cost(t, m.saturating_add(1).min(run.len()), paid);
    Ok(m)
}

/// Stable merge of `left` and `right` into `out[..a + b]`.
pub fn merge<T, F>(
    left: &[T],
    right: &[T],
    config: &GallopConfig,
    state: &mut GallopState,
    out: &mut [T],
    counter: &mut Counter<F>,
    record: &mut MergeRecord,
) -> Result<()>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    let (a, b) = (left.len(), right.len());
    if out.len() < a + b {
        return Err(Error::BufferTooSmall);
    }
    if cfg!(debug_assertions) && (!counter.is_sorted(left) || !counter.is_sorted(right)) {
        return Err(Error::UnsortedRun);
    }
    *record = MergeRecord::new(a, b);
    // blocks alternate, so there are at most 2·min(a, b) + 2 of them
    record.blocks.reserve(2 * a.min(b) + 2);
    let before = counter.count();
    let t = config.t_for(a + b, state);
    record.t_effective = t;
    match t {
        None => naive(left, right, out, counter, record),
        Some(t) => {
            record.searches.reserve(2 * a.min(b) + 1);
            let update = matches!(config, GallopConfig::TimsortUpdate(_));
            let t_end = galloping(left, right, t, update, out, counter, record);
            if update {
                state.t = t_end;
            }
        }
    }
    record.comparisons = counter.count() - before;
    Ok(())
}

fn naive<T, F>(
    left: &[T],
    right: &[T],
    out: &mut [T],
    counter: &mut Counter<F>,
    record: &mut MergeRecord,
) where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    let (a, b) = (left.len(), right.len());
    let (mut i, mut j, mut k) = (0, 0, 0);
    let mut from_left = true;
    let mut cur = 0;
    let mut take = |from_l: bool, count: usize, blocks: &mut Vec<usize>| {
        if from_l != from_left {
            blocks.push(cur);
            cur = 0;
            from_left = from_l;
        }
        cur += count;
    };
    while i < a && j < b {
        if counter.lt(&right[j], &left[i]) {
            take(false, 1, &mut record.blocks);
            out[k] = right[j].clone();
            j += 1;
        } else {
            take(true, 1, &mut record.blocks);
            out[k] = left[i].clone();
            i += 1;
        }
        k += 1;
    }
    if i < a {
        take(true, a - i, &mut record.blocks);
        out[k..a + b].clone_from_slice(&left[i..]);
    } else if j < b {
        take(false, b - j, &mut record.blocks);
        out[k..a + b].clone_from_slice(&right[j..]);
    }
    if a + b > 0 {
        record.blocks.push(cur);
    }
}

/// Returns the parameter in effect after the last block.
fn galloping<T, F>(
    left: &[T],
    right: &[T],
    mut t: u32,
    update: bool,
    out: &mut [T],
    counter: &mut Counter<F>,
    record: &mut MergeRecord,
) -> u32
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    let (a, b) = (left.len(), right.len());
    if a == 0 || b == 0 {
        out[..a].clone_from_slice(left);
        out[a..a + b].clone_from_slice(right);
        record.blocks = match (a, b) {
            (0, 0) => vec![],
            (0, _) => vec![0, b],
            _ => vec![a],
        };
        return t;
    }
    let (mut i, mut j, mut k) = (0, 0, 0);
    // Invariant on entry to each branch: the head of the searched run is
    // known to belong to the block, so every search finds m ≥ 1.
    let mut in_left = !counter.lt(&right[0], &left[0]);
    if !in_left {
        record.blocks.push(0);
    }
    loop {
        let m = if in_left {
            let (m, paid) = search(t, a - i, |x| counter.lt(&right[j], &left[i + x]));
            debug_check_cost(t, m, paid);
            out[k..k + m].clone_from_slice(&left[i..i + m]);
            i += m;
            m
        } else {
            let (m, paid) = search(t, b - j, |x| !counter.lt(&right[j + x], &left[i]));
            debug_check_cost(t, m, paid);
            out[k..k + m].clone_from_slice(&right[j..j + m]);
            j += m;
            m
        };
        k += m;
        record.blocks.push(m);
        record.searches.push((t, m));
        if update {
            t = update_t(t, m);
        }
        if i == a {
            out[k..].clone_from_slice(&right[j..]);
            record.blocks.push(b - j);
            break;
        }
        if j == b {
            out[k..a + b].clone_from_slice(&left[i..]);
            record.blocks.push(a - i);
            break;
        }
        in_left = !in_left;
    }
    t
}
