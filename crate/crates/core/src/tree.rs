//! Runs and merge trees.

use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `⌊log₂ len⌋`, with `level_of(0) == 0`.
pub fn level_of(len: usize) -> u32 {
    if len == 0 {
        0
    } else {
        usize::BITS - 1 - len.leading_zeros()
    }
}

/// A contiguous run `start..start + len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunSpan {
    pub start: usize,
    pub len: usize,
    pub level: u32,
}

impl RunSpan {
    /// Panics if `len == 0`.
    pub fn new(start: usize, len: usize) -> Self {
        assert!(len >= 1, "run length must be positive");
        RunSpan { start, len, level: level_of(len) }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end()
    }
}

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub span: RunSpan,
    /// Left and right child; `None` for leaves.
    pub children: Option<[NodeId; 2]>,
    pub parent: Option<NodeId>,
    /// Leaves have height 0.
    pub height: u32,
    /// The root has depth 0.
    pub depth: u32,
    /// Only set on trees produced by PowerSort.
    pub power: Option<u32>,
    /// Indices of the leaves below this node.
    pub leaves: Range<usize>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn len(&self) -> usize {
        self.span.len
    }
}

/// A binary merge tree.
///
/// Nodes live in an arena: leaves first, in left-to-right order, then
/// internal nodes in the order their merges were performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeTree {
    nodes: Vec<Node>,
    leaf_count: usize,
}

/// Builds a [`MergeTree`] one merge at a time.
#[derive(Clone, Debug)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
    leaf_count: usize,
}

impl TreeBuilder {
    pub fn new(lengths: &[usize]) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut nodes = Vec::with_capacity(2 * lengths.len() - 1);
        let mut start = 0;
        for (i, &len) in lengths.iter().enumerate() {
            if len == 0 {
                return Err(Error::InvalidLength);
            }
            nodes.push(Node {
                span: RunSpan::new(start, len),
                children: None,
                parent: None,
                height: 0,
                depth: 0,
                power: None,
                leaves: i..i + 1,
            });
            start += len;
        }
        Ok(TreeBuilder { nodes, leaf_count: lengths.len() })
    }

    pub fn span(&self, id: NodeId) -> RunSpan {
        self.nodes[id].span
    }

    pub fn leaves(&self, id: NodeId) -> Range<usize> {
        self.nodes[id].leaves.clone()
    }

    /// Merges two adjacent parentless nodes, `left` preceding `right`.
    pub fn merge(&mut self, left: NodeId, right: NodeId) -> Result<NodeId> {
        let n = self.nodes.len();
        if left >= n || right >= n {
            return Err(Error::InvalidTree(format!("unknown node {left} or {right}")));
        }
        let (l, r) = (&self.nodes[left], &self.nodes[right]);
        if l.parent.is_some() || r.parent.is_some() {
            return Err(Error::InvalidTree("node merged twice".into()));
        }
        if l.span.end() != r.span.start {
            return Err(Error::InvalidTree(format!(
                "runs {}:{} and {}:{} are not adjacent",
                l.span.start, l.span.len, r.span.start, r.span.len
            )));
        }
        let node = Node {
            span: RunSpan::new(l.span.start, l.span.len + r.span.len),
            children: Some([left, right]),
            parent: None,
            height: 1 + l.height.max(r.height),
            depth: 0,
            power: None,
            leaves: l.leaves.start..r.leaves.end,
        };
        self.nodes.push(node);
        self.nodes[left].parent = Some(n);
        self.nodes[right].parent = Some(n);
        Ok(n)
    }

    pub fn set_power(&mut self, id: NodeId, power: u32) {
        self.nodes[id].power = Some(power);
    }

    pub fn finish(mut self) -> Result<MergeTree> {
        let expected = 2 * self.leaf_count - 1;
        if self.nodes.len() != expected {
            return Err(Error::InvalidTree(format!(
                "{} merges for {} runs",
                self.nodes.len() - self.leaf_count,
                self.leaf_count
            )));
        }
        // Parents are always created after their children.
        for id in (0..self.nodes.len() - 1).rev() {
            let p = self.nodes[id].parent.expect("every non-root node has a parent");
            self.nodes[id].depth = self.nodes[p].depth + 1;
        }
        Ok(MergeTree { nodes: self.nodes, leaf_count: self.leaf_count })
    }
}

/// Summary numbers of a merge tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub internal_length_sum: u64,
    pub max_height: u32,
    pub leaf_depths: Vec<u32>,
}

/// JSON shape of a tree node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub start: usize,
    pub len: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub power: Option<u32>,
    pub children: Vec<TreeJson>,
}

impl MergeTree {
    /// The tree with a single leaf per run and merges given by `plan`,
    /// a list of `(left, right)` arena ids.
    pub fn from_merges(lengths: &[usize], plan: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut b = TreeBuilder::new(lengths)?;
        for &(l, r) in plan {
            b.merge(l, r)?;
        }
        b.finish()
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn leaves(&self) -> &[Node] {
        &self.nodes[..self.leaf_count]
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    /// Internal node ids in merge order.
    pub fn internal_ids(&self) -> Range<NodeId> {
        self.leaf_count..self.nodes.len()
    }

    pub fn merges(&self) -> usize {
        self.nodes.len() - self.leaf_count
    }

    /// Total number of elements.
    pub fn n(&self) -> usize {
        self.nodes[self.root()].span.len
    }

    pub fn height(&self) -> u32 {
        self.nodes[self.root()].height
    }

    pub fn run_lengths(&self) -> Vec<usize> {
        self.leaves().iter().map(|l| l.span.len).collect()
    }

    /// The `k`-th ancestor of `id`, if it exists.
    pub fn ancestor(&self, id: NodeId, k: u32) -> Option<NodeId> {
        let mut cur = id;
        for _ in 0..k {
            cur = self.nodes[cur].parent?;
        }
        Some(cur)
    }

    pub fn has_powers(&self) -> bool {
        self.nodes.iter().all(|n| n.power.is_some())
    }

    pub fn stats(&self) -> TreeStats {
        tree_stats(self)
    }

    pub fn to_json(&self) -> TreeJson {
        // Post-order over the arena: children always precede parents.
        let mut built: Vec<Option<TreeJson>> = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            let children = match node.children {
                None => Vec::new(),
                Some([l, r]) => vec![
                    built[l].take().expect("child built"),
                    built[r].take().expect("child built"),
                ],
            };
            built[id] = Some(TreeJson {
                start: node.span.start,
                len: node.span.len,
                power: node.power,
                children,
            });
        }
        built[self.root()].take().expect("root built")
    }

    /// Graphviz rendering, nodes labelled `start:len`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph mergetree {\n  node [shape=box];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            let _ = write!(s, "  n{id} [label=\"{}:{}\"", node.span.start, node.span.len);
            if let Some(p) = node.power {
                let _ = write!(s, ", xlabel=\"p={p}\"");
            }
            s.push_str("];\n");
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if let Some([l, r]) = node.children {
                let _ = writeln!(s, "  n{id} -> n{l};\n  n{id} -> n{r};");
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Serialize for MergeTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

pub fn tree_stats(tree: &MergeTree) -> TreeStats {
    let internal_length_sum = tree.nodes[tree.leaf_count..]
        .iter()
        .map(|n| n.span.len as u64)
        .sum();
    TreeStats {
        internal_length_sum,
        max_height: tree.height(),
        leaf_depths: tree.leaves().iter().map(|l| l.depth).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced4() -> MergeTree {
        MergeTree::from_merges(&[1, 1, 1, 1], &[(0, 1), (2, 3), (4, 5)]).unwrap()
    }

    #[test]
    fn levels() {
        assert_eq!(level_of(1), 0);
        assert_eq!(level_of(4), 2);
        assert_eq!(level_of(5), 2);
        assert_eq!(level_of(8), 3);
        let s = RunSpan::new(3, 7);
        assert_eq!((s.level, s.end()), (2, 10));
    }

    #[test]
    fn single_leaf_stats() {
        let t = MergeTree::from_merges(&[5], &[]).unwrap();
        let st = t.stats();
        assert_eq!((st.internal_length_sum, st.max_height, st.leaf_depths), (0, 0, vec![0]));
    }

    #[test]
    fn balanced_stats() {
        let st = balanced4().stats();
        assert_eq!(st.internal_length_sum, 8);
        assert_eq!(st.max_height, 2);
        assert_eq!(st.leaf_depths, vec![2, 2, 2, 2]);
    }

    #[test]
    fn comb_stats() {
        let t = MergeTree::from_merges(&[1, 1, 1], &[(0, 1), (3, 2)]).unwrap();
        let st = t.stats();
        assert_eq!(st.internal_length_sum, 5);
        assert_eq!(st.leaf_depths, vec![2, 2, 1]);
        let weighted: u64 = t
            .leaves()
            .iter()
            .map(|l| l.depth as u64 * l.span.len as u64)
            .sum();
        assert_eq!(weighted, st.internal_length_sum);
    }

    #[test]
    fn builder_rejects_bad_merges() {
        let mut b = TreeBuilder::new(&[1, 2, 3]).unwrap();
        assert!(b.merge(0, 2).is_err());
        assert!(b.merge(1, 0).is_err());
        let m = b.merge(0, 1).unwrap();
        assert!(b.merge(0, 2).is_err());
        assert!(b.clone().finish().is_err());
        b.merge(m, 2).unwrap();
        let t = b.finish().unwrap();
        assert_eq!(t.n(), 6);
        assert_eq!(t.node(t.root()).leaves, 0..3);
        assert!(TreeBuilder::new(&[]).is_err());
        assert!(TreeBuilder::new(&[1, 0]).is_err());
    }

    #[test]
    fn json_and_dot() {
        let t = balanced4();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["len"], 4);
        assert_eq!(json["children"][1]["start"], 2);
        assert!(json.get("power").is_none());
        let dot = t.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("n6 [label=\"0:4\"]"));
        assert!(dot.contains("n6 -> n4;"));
    }
}
