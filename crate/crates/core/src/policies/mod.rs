//! The merge policies and the sort driver.
//!
//! Every policy decides its merges from run lengths alone, so a sort first
//! detects runs, then plans the whole merge tree, then executes the merges
//! in the order the tree records them.

pub mod natural;
pub mod peeksort;
pub mod powersort;
pub mod stack;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallop::{merge, GallopConfig, GallopState};
use crate::item::{by_key, Counter, Item};
use crate::params::Alpha;
use crate::report::{InvariantViolation, MergeRecord, SortReport};
use crate::runs::{detect_runs_with, RunDetection};
use crate::tree::MergeTree;

pub use natural::natural_merge_tree;
pub use peeksort::peek_split;
pub use powersort::{all_boundary_powers, boundary_power, prefix_sums};
pub use stack::{
    adaptive_shivers_step, alpha_merge_step, alpha_stack_step, shivers_step, timsort_step, Action,
    Pair,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "policy", content = "alpha")]
pub enum Policy {
    NaturalMergeSort,
    ShiversSort,
    AdaptiveShiversSort,
    TimSort,
    AlphaMergeSort(Alpha),
    AlphaStackSort(Alpha),
    PeekSort,
    PowerSort,
}

impl Policy {
    pub fn default_alpha_merge() -> Alpha {
        Alpha::new(81, 50).unwrap()
    }

    pub fn default_alpha_stack() -> Alpha {
        Alpha::new(2, 1).unwrap()
    }

    /// All eight policies with default parameters.
    pub fn all() -> [Policy; 8] {
        [
            Policy::NaturalMergeSort,
            Policy::ShiversSort,
            Policy::AdaptiveShiversSort,
            Policy::TimSort,
            Policy::AlphaMergeSort(Self::default_alpha_merge()),
            Policy::AlphaStackSort(Self::default_alpha_stack()),
            Policy::PeekSort,
            Policy::PowerSort,
        ]
    }

    /// Command-line name.
    pub fn name(&self) -> &'static str {
        match self {
            Policy::NaturalMergeSort => "natural",
            Policy::ShiversSort => "shivers",
            Policy::AdaptiveShiversSort => "adaptive-shivers",
            Policy::TimSort => "timsort",
            Policy::AlphaMergeSort(_) => "alpha-merge",
            Policy::AlphaStackSort(_) => "alpha-stack",
            Policy::PeekSort => "peeksort",
            Policy::PowerSort => "powersort",
        }
    }

    pub fn alpha(&self) -> Option<Alpha> {
        match *self {
            Policy::AlphaMergeSort(a) | Policy::AlphaStackSort(a) => Some(a),
            _ => None,
        }
    }

    /// Replaces α on the α-parametrized policies.
    pub fn with_alpha(self, alpha: Alpha) -> Policy {
        match self {
            Policy::AlphaMergeSort(_) => Policy::AlphaMergeSort(alpha),
            Policy::AlphaStackSort(_) => Policy::AlphaStackSort(alpha),
            p => p,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}({a})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    /// Parses a command-line name; α-policies get their default α.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Policy::all()
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown policy {s:?}"))
    }
}

/// One sort configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub policy: Policy,
    pub gallop: GallopConfig,
    pub detection: RunDetection,
}

impl PolicyConfig {
    pub fn new(policy: Policy, gallop: GallopConfig) -> Self {
        PolicyConfig { policy, gallop, detection: RunDetection::Greedy }
    }

    pub fn with_detection(mut self, detection: RunDetection) -> Self {
        self.detection = detection;
        self
    }
}

/// A merge tree planned from run lengths, with any stack-invariant
/// violations seen while planning.
#[derive(Clone, Debug)]
pub struct Plan {
    pub tree: MergeTree,
    pub violations: Vec<InvariantViolation>,
}

pub fn plan(lengths: &[usize], policy: &Policy) -> Result<Plan> {
    use stack::{invariants as inv, plan_stack};
    let (tree, violations) = match *policy {
        Policy::NaturalMergeSort => (natural::plan_natural(lengths)?, vec![]),
        Policy::PeekSort => (peeksort::plan_peeksort(lengths)?, vec![]),
        Policy::PowerSort => (powersort::plan_powersort(lengths)?, vec![]),
        Policy::ShiversSort => plan_stack(lengths, shivers_step, inv::shivers)?,
        Policy::AdaptiveShiversSort => {
            plan_stack(lengths, adaptive_shivers_step, inv::adaptive_shivers)?
        }
        Policy::TimSort => plan_stack(lengths, timsort_step, inv::timsort)?,
        Policy::AlphaMergeSort(a) => plan_stack(
            lengths,
            |s, next| alpha_merge_step(s, a, next),
            |s| inv::alpha_merge(s, a),
        )?,
        Policy::AlphaStackSort(a) => plan_stack(
            lengths,
            |s, next| alpha_stack_step(s, a, next),
            |s| inv::alpha_stack(s, a),
        )?,
    };
    Ok(Plan { tree, violations })
}

/// Sorts a copy of `array` by key.
pub fn sort<K: Ord + Clone>(array: &[Item<K>], config: &PolicyConfig) -> Result<(Vec<Item<K>>, SortReport)> {
    let mut data = array.to_vec();
    let report = sort_slice_by(&mut data, by_key::<K>, config)?;
    Ok((data, report))
}

/// Sorts `data` in place with a caller-supplied total order.
pub fn sort_slice_by<T, F>(data: &mut [T], cmp: F, config: &PolicyConfig) -> Result<SortReport>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counter = Counter::new(cmp);
    let runs = detect_runs_with(data, config.detection, &mut counter)?;
    let detection_comparisons = counter.count();
    let lengths: Vec<usize> = runs.iter().map(|r| r.len).collect();
    let Plan { tree, violations } = plan(&lengths, &config.policy)?;
    let per_merge = execute(&tree, data, &config.gallop, &mut counter)?;
    let gallop_trace = per_merge.iter().flat_map(|r| r.searches.iter().copied()).collect();
    let moves = per_merge.iter().map(|r| (r.left_len + r.right_len) as u64).sum();
    Ok(SortReport {
        n: data.len(),
        comparisons: counter.count(),
        detection_comparisons,
        moves,
        merges: tree.merges(),
        tree,
        gallop_trace,
        per_merge,
        invariant_violations: violations,
    })
}

/// Performs the merges of `tree` on `data`, whose runs must already be
/// non-decreasing.
pub fn execute<T, F>(
    tree: &MergeTree,
    data: &mut [T],
    gallop: &GallopConfig,
    counter: &mut Counter<F>,
) -> Result<Vec<MergeRecord>>
where
    T: Clone,
    F: FnMut(&T, &T) -> Ordering,
{
    if tree.n() != data.len() {
        return Err(Error::BufferTooSmall);
    }
    let mut state = GallopState::new(gallop);
    let mut scratch: Vec<T> = Vec::with_capacity(data.len());
    let mut records = Vec::with_capacity(tree.merges());
    for id in tree.internal_ids() {
        let node = tree.node(id);
        let [l, _] = node.children.expect("internal node");
        let a = tree.node(l).span.len;
        let range = node.span.range();
        scratch.clear();
        scratch.extend_from_slice(&data[range.clone()]);
        let mut record = MergeRecord::default();
        let (left, right) = scratch.split_at(a);
        merge(left, right, gallop, &mut state, &mut data[range], counter, &mut record)?;
        records.push(record);
    }
    Ok(records)
}
