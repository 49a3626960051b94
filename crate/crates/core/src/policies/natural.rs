//! Top-down balanced merge tree over the run sequence.

use crate::error::Result;
use crate::tree::{MergeTree, NodeId, TreeBuilder};

pub fn plan_natural(lengths: &[usize]) -> Result<MergeTree> {
    let mut b = TreeBuilder::new(lengths)?;
    build(&mut b, 0, lengths.len())?;
    b.finish()
}

/// Merge tree shape for `rho` runs of unit length.
pub fn natural_merge_tree(rho: usize) -> Result<MergeTree> {
    plan_natural(&vec![1; rho])
}

fn build(b: &mut TreeBuilder, lo: usize, hi: usize) -> Result<NodeId> {
    if hi - lo == 1 {
        return Ok(lo);
    }
    let mid = lo + (hi - lo).div_ceil(2);
    let l = build(b, lo, mid)?;
    let r = build(b, mid, hi)?;
    b.merge(l, r)
}
