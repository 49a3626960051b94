//! Stable natural merge sort with interchangeable merge policies and
//! merge sub-routines, instrumented to count every comparison.
//!
//! ```
//! use runmerge::{items_from_keys, sort, GallopConfig, Policy, PolicyConfig};
//!
//! let items = items_from_keys([5i64, 1, 4, 2, 3, 3]);
//! let config = PolicyConfig::new(Policy::PowerSort, GallopConfig::FixedT(7));
//! let (sorted, report) = sort(&items, &config).unwrap();
//! assert_eq!(sorted.iter().map(|i| i.key).collect::<Vec<_>>(), [1, 2, 3, 3, 4, 5]);
//! assert_eq!(report.merges, report.tree.leaf_count() - 1);
//! ```

pub mod analysis;
pub mod error;
pub mod gallop;
pub mod generators;
pub mod item;
pub mod params;
pub mod policies;
pub mod report;
pub mod runs;
pub mod tree;

pub use error::{Error, Result};
pub use gallop::{
    ceil_log2, cost_ideal, cost_star, cost_t, gallop_find, merge, update_t, within_cost_star, Bias,
    GallopConfig, GallopState,
};
pub use item::{
    by_key, counting_compare, is_stably_sorted, items_from_keys, keys_of, same_multiset, Counter,
    Item,
};
pub use params::{Alpha, Beta, GrowthSpec};
pub use policies::{plan, sort, sort_slice_by, Plan, Policy, PolicyConfig};
pub use report::{InvariantViolation, MergeRecord, Phase, SortReport};
pub use runs::{detect_runs, detect_runs_with, dual_runs, entropy, rank_compress, EntropyReport, RunDetection};
pub use tree::{level_of, tree_stats, MergeTree, Node, NodeId, RunSpan, TreeBuilder, TreeJson, TreeStats};
