use serde::Serialize;

use super::Violation;
use crate::error::{Error, Result};
use crate::policies::powersort::{all_boundary_powers, node_power};
use crate::tree::{MergeTree, NodeId};

/// Checks the stored powers of a PowerSort tree against the boundary
/// powers recomputed from its leaves.
///
/// Each node must store `max{p_{i−1}, p_j}` for its runs `i..=j`, that value
/// must be below every boundary power inside the node, and the children of
/// an inner node must store larger powers than the node itself.
pub fn check_power_order(tree: &MergeTree) -> Result<Vec<Violation>> {
    if !tree.has_powers() {
        return Err(Error::NotPowerSortTree);
    }
    let p = all_boundary_powers(&tree.run_lengths());
    let mut out = Vec::new();
    for (id, node) in tree.nodes().iter().enumerate() {
        let stored = node.power.expect("checked above");
        let expect = node_power(&p, node.leaves.clone());
        if stored != expect {
            out.push(Violation::at(tree, id, format!("power {stored}, expected {expect}")));
        }
        let Some(children) = node.children else { continue };
        let inner = (node.leaves.start + 1..node.leaves.end).filter_map(|b| p[b]).min();
        if let Some(inner) = inner {
            if expect >= inner {
                out.push(Violation::at(tree, id, format!("outer power {expect} ≥ inner power {inner}")));
            }
        }
        for c in children {
            let cp = tree.node(c).power.expect("checked above");
            if cp <= stored {
                out.push(Violation::at(tree, id, format!("child {c} has power {cp} ≤ {stored}")));
            }
        }
    }
    Ok(out)
}

/// Split length and growth rate of one inner node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitRunFacts {
    pub node: NodeId,
    pub len: usize,
    pub sl: usize,
    pub gr: f64,
}

/// For each inner node with children of lengths `r` and `r′`, the split run
/// is the rightmost leaf of the left child when `r ≥ r′` and the leftmost
/// leaf of the right child otherwise.
pub fn split_run_facts(tree: &MergeTree) -> Vec<SplitRunFacts> {
    tree.internal_ids()
        .map(|id| {
            let node = tree.node(id);
            let [l, r] = node.children.expect("internal node");
            let (left, right) = (tree.node(l), tree.node(r));
            let leaf = if left.len() >= right.len() { left.leaves.end - 1 } else { right.leaves.start };
            let sl = tree.leaves()[leaf].len();
            let big = left.len().max(right.len()) as f64;
            let gr = (node.len() as f64).log2() - big.log2();
            SplitRunFacts { node: id, len: node.len(), sl, gr }
        })
        .collect()
}

/// Checks `gr·r̄ + 2·sl ≥ r̄` at every inner node, allowing `1e−9` on `gr`.
pub fn check_split_runs(tree: &MergeTree) -> Vec<Violation> {
    split_run_facts(tree)
        .into_iter()
        .filter(|f| {
            let r = f.len as f64;
            (f.gr + 1e-9) * r + 2.0 * (f.sl as f64) < r
        })
        .map(|f| {
            Violation::at(tree, f.node, format!("gr {} · {} + 2 · {} < {}", f.gr, f.len, f.sl, f.len))
        })
        .collect()
}
