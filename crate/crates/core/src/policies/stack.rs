//! Stack-based policies: one decision per step, from run lengths alone.
//!
//! Stacks are given deepest run first, so `stack[h - 1]` is the top `R_h`.

use crate::error::Result;
use crate::params::Alpha;
use crate::report::{InvariantViolation, Phase};
use crate::tree::{level_of, MergeTree, NodeId, TreeBuilder};

/// Which adjacent pair of the stack to merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    /// `R_{h−2}` and `R_{h−1}`.
    BelowTop,
    /// `R_{h−1}` and `R_h`.
    Top,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// `case` is the numbered guard that fired, for policies that number them.
    Merge { pair: Pair, case: Option<u8> },
    Push,
    /// Input exhausted: merge the top two runs until one is left.
    Collapse,
    Done,
}

fn fallback(h: usize, has_next: bool) -> Action {
    if has_next {
        Action::Push
    } else if h >= 2 {
        Action::Collapse
    } else {
        Action::Done
    }
}

fn lv(r: usize) -> u32 {
    level_of(r)
}

pub fn adaptive_shivers_step(stack: &[usize], has_next: bool) -> Action {
    let h = stack.len();
    if h >= 3 && lv(stack[h - 3]) <= lv(stack[h - 2]).max(lv(stack[h - 1])) {
        return Action::Merge { pair: Pair::BelowTop, case: None };
    }
    fallback(h, has_next)
}

pub fn timsort_step(stack: &[usize], has_next: bool) -> Action {
    let h = stack.len();
    let r = |i: usize| stack[h - i] as u64; // r(1) = r_h, r(2) = r_{h−1}, ...
    if h >= 3 && r(3) < r(1) {
        return Action::Merge { pair: Pair::BelowTop, case: Some(1) };
    }
    if h >= 2 && r(2) <= r(1) {
        return Action::Merge { pair: Pair::Top, case: Some(2) };
    }
    if h >= 3 && r(3) <= r(2) + r(1) {
        return Action::Merge { pair: Pair::Top, case: Some(3) };
    }
    if h >= 4 && r(4) <= r(3) + r(2) {
        return Action::Merge { pair: Pair::Top, case: Some(4) };
    }
    fallback(h, has_next)
}

pub fn alpha_merge_step(stack: &[usize], alpha: Alpha, has_next: bool) -> Action {
    let h = stack.len();
    let r = |i: usize| stack[h - i] as u64;
    if h >= 3 && r(3) < r(1) {
        return Action::Merge { pair: Pair::BelowTop, case: Some(1) };
    }
    if h >= 2 && alpha.lt_times(r(2), r(1)) {
        return Action::Merge { pair: Pair::Top, case: Some(2) };
    }
    if h >= 3 && alpha.lt_times(r(3), r(2)) {
        return Action::Merge { pair: Pair::Top, case: Some(3) };
    }
    fallback(h, has_next)
}

pub fn shivers_step(stack: &[usize], has_next: bool) -> Action {
    let h = stack.len();
    if h >= 2 && lv(stack[h - 2]) <= lv(stack[h - 1]) {
        return Action::Merge { pair: Pair::Top, case: None };
    }
    fallback(h, has_next)
}

pub fn alpha_stack_step(stack: &[usize], alpha: Alpha, has_next: bool) -> Action {
    let h = stack.len();
    if h >= 2 && alpha.le_times(stack[h - 2] as u64, stack[h - 1] as u64) {
        return Action::Merge { pair: Pair::Top, case: None };
    }
    fallback(h, has_next)
}

/// Stack-invariant checks; each returns the name of the first broken rule.
pub mod invariants {
    use super::*;

    pub fn adaptive_shivers(s: &[usize]) -> Option<&'static str> {
        let h = s.len();
        if h >= 3 && (0..h - 3).any(|i| lv(s[i]) < lv(s[i + 1]) + 1) {
            return Some("lemma20(i)");
        }
        if h >= 4 && lv(s[h - 4]) < lv(s[h - 2]) + 1 {
            return Some("lemma20(ii)");
        }
        None
    }

    pub fn timsort(s: &[usize]) -> Option<&'static str> {
        let h = s.len();
        let r = |i: usize| s[i] as u64;
        if h >= 4 && (0..h - 4).any(|i| r(i) <= r(i + 1) + r(i + 2)) {
            return Some("lemma24(i)");
        }
        if h >= 3 && 3 * r(h - 3) <= r(h - 2) {
            return Some("lemma24(ii)");
        }
        if h >= 4 {
            if r(h - 4) <= r(h - 3) {
                return Some("lemma24(iii)");
            }
            if r(h - 4) + r(h - 3) <= r(h - 2) {
                return Some("lemma24(iv)");
            }
            // max{r_{h−3}/2, 4r_h} > r_{h−1}
            if r(h - 4).max(8 * r(h - 1)) <= 2 * r(h - 2) {
                return Some("lemma24(v)");
            }
        }
        None
    }

    pub fn alpha_merge(s: &[usize], alpha: Alpha) -> Option<&'static str> {
        let h = s.len();
        let r = |i: usize| s[i] as u128;
        let (num, den) = (alpha.numer() as u128, alpha.denom() as u128);
        if h >= 3 && (0..h - 3).any(|i| !alpha.ge_times(s[i] as u64, s[i + 1] as u64)) {
            return Some("lemma28(i)");
        }
        if h >= 3 {
            // r_{h−2} ≥ (α − 1)·r_{h−1}
            if r(h - 3) * den < (num - den) * r(h - 2) {
                return Some("lemma28(ii)");
            }
            // max{r_{h−2}/α, α·r_h/(α − 1)} ≥ r_{h−1}
            let first = r(h - 3) * den >= num * r(h - 2);
            let second = num * r(h - 1) >= (num - den) * r(h - 2);
            if !first && !second {
                return Some("lemma28(iii)");
            }
        }
        None
    }

    pub fn shivers(s: &[usize]) -> Option<&'static str> {
        let h = s.len();
        if h >= 2 && (0..h - 2).any(|i| lv(s[i]) < lv(s[i + 1]) + 1) {
            return Some("lemma35");
        }
        None
    }

    pub fn alpha_stack(s: &[usize], alpha: Alpha) -> Option<&'static str> {
        let h = s.len();
        if h >= 2 && (0..h - 2).any(|i| !alpha.gt_times(s[i] as u64, s[i + 1] as u64)) {
            return Some("lemma39");
        }
        None
    }
}

/// Runs a stack policy over `lengths`, checking `check` after every
/// operation. Violations before the final collapse also trip a debug
/// assertion; those during the collapse are only recorded.
pub fn plan_stack(
    lengths: &[usize],
    mut step: impl FnMut(&[usize], bool) -> Action,
    check: impl Fn(&[usize]) -> Option<&'static str>,
) -> Result<(MergeTree, Vec<InvariantViolation>)> {
    let mut builder = TreeBuilder::new(lengths)?;
    let mut ids: Vec<NodeId> = Vec::new();
    let mut lens: Vec<usize> = Vec::new();
    let mut violations = Vec::new();
    let mut next = 0;
    let mut collapsing = false;
    for step_no in 0.. {
        let action = if collapsing {
            if ids.len() >= 2 {
                Action::Collapse
            } else {
                Action::Done
            }
        } else {
            step(&lens, next < lengths.len())
        };
        let at = match action {
            Action::Done => break,
            Action::Push => {
                ids.push(next);
                lens.push(lengths[next]);
                next += 1;
                None
            }
            Action::Merge { pair: Pair::BelowTop, .. } => Some(ids.len() - 3),
            Action::Merge { pair: Pair::Top, .. } => Some(ids.len() - 2),
            Action::Collapse => {
                collapsing = true;
                Some(ids.len() - 2)
            }
        };
        if let Some(i) = at {
            let id = builder.merge(ids[i], ids[i + 1])?;
            ids[i] = id;
            ids.remove(i + 1);
            lens[i] += lens[i + 1];
            lens.remove(i + 1);
        }
        if let Some(rule) = check(&lens) {
            let phase = if collapsing { Phase::Collapse } else { Phase::Main };
            log::debug!("{rule} broken at step {step_no} ({phase:?}): {lens:?}");
            debug_assert!(collapsing, "{rule} broken at step {step_no}: {lens:?}");
            violations.push(InvariantViolation {
                phase,
                step: step_no,
                rule: rule.to_string(),
                stack: lens.clone(),
            });
        }
    }
    Ok((builder.finish()?, violations))
}
