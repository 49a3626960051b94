use serde::{Deserialize, Serialize};

use crate::tree::MergeTree;

/// What one merge did.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub left_len: usize,
    pub right_len: usize,
    pub comparisons: u64,
    /// Lengths of the alternating blocks of the output, starting with a
    /// (possibly empty) block from the left run.
    pub blocks: Vec<usize>,
    /// The galloping parameter at the start of the merge; `None` for the
    /// naive merge.
    pub t_effective: Option<u32>,
    /// `(t, m)` for every block found by a galloping search.
    #[serde(skip)]
    pub searches: Vec<(u32, usize)>,
}

impl MergeRecord {
    pub fn new(left_len: usize, right_len: usize) -> Self {
        MergeRecord { left_len, right_len, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Main,
    Collapse,
}

/// A stack state that broke one of the policy's invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantViolation {
    pub phase: Phase,
    pub step: usize,
    pub rule: String,
    pub stack: Vec<usize>,
}

/// Everything measured during one sort.
#[derive(Clone, Debug, Serialize)]
pub struct SortReport {
    pub n: usize,
    pub comparisons: u64,
    pub detection_comparisons: u64,
    pub moves: u64,
    pub merges: usize,
    pub tree: MergeTree,
    pub gallop_trace: Vec<(u32, usize)>,
    pub per_merge: Vec<MergeRecord>,
    pub invariant_violations: Vec<InvariantViolation>,
}

impl SortReport {
    /// Violations seen before the final collapse.
    pub fn main_violations(&self) -> impl Iterator<Item = &InvariantViolation> {
        self.invariant_violations.iter().filter(|v| v.phase == Phase::Main)
    }

    /// `Σ m` over all galloping searches.
    pub fn discovered_total(&self) -> u64 {
        self.gallop_trace.iter().map(|&(_, m)| m as u64).sum()
    }
}
