//! Growth checks, tree-structure checks and bound evaluation.
//!
//! Every check returns the list of offending nodes; an empty list is a pass.

mod bounds;
mod growth;
mod structure;

use serde::{Deserialize, Serialize};

use crate::tree::{MergeTree, NodeId};

pub use bounds::{
    bound_report, compare_update_policy, ideal_cost, prop2_holds,
    thm6_holds, thm7_holds, Bound, BoundReport, UpdateComparison,
};
pub use growth::{
    check_fast_growth, check_growth, check_middle_growth, check_tight, fast_growth_profile,
    growth_catalog, FastProfile,
};
pub use structure::{check_power_order, check_split_runs, split_run_facts, SplitRunFacts};

/// A node that fails a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub node: NodeId,
    pub start: usize,
    pub len: usize,
    pub height: u32,
    pub detail: String,
}

impl Violation {
    pub(crate) fn at(tree: &MergeTree, id: NodeId, detail: String) -> Self {
        let node = tree.node(id);
        Violation { node: id, start: node.span.start, len: node.span.len, height: node.height, detail }
    }
}
