//! The PeekSort merge tree, built from its split characterization.

use crate::error::Result;
use crate::tree::{MergeTree, NodeId, TreeBuilder};

use super::powersort::prefix_sums;

/// Split index for the node covering runs `i..=j` (1-based, `i < j`): the
/// `k ∈ [i, j)` minimizing `|2e_k − e_j − e_{i−1}|`, smallest on ties.
pub fn peek_split(e: &[u64], i: usize, j: usize) -> usize {
    assert!(1 <= i && i < j && j < e.len());
    let target = e[i - 1] + e[j];
    // First k in [i, j) with 2e_k ≥ target.
    let first = i + e[i..j].partition_point(|&x| 2 * x < target);
    let dev = |k: usize| (2 * e[k]).abs_diff(target);
    let mut best = first.min(j - 1);
    if first > i && dev(first - 1) <= dev(best) {
        best = first - 1;
    }
    best
}

pub fn plan_peeksort(lengths: &[usize]) -> Result<MergeTree> {
    let e = prefix_sums(lengths);
    let mut b = TreeBuilder::new(lengths)?;
    build(&mut b, &e, 1, lengths.len())?;
    b.finish()
}

fn build(b: &mut TreeBuilder, e: &[u64], i: usize, j: usize) -> Result<NodeId> {
    if i == j {
        return Ok(i - 1);
    }
    let k = peek_split(e, i, j);
    let l = build(b, e, i, k)?;
    let r = build(b, e, k + 1, j)?;
    b.merge(l, r)
}
