use num_rational::Ratio;
use serde::Serialize;

use super::Violation;
use crate::params::{Alpha, Beta, GrowthSpec};
use crate::policies::Policy;
use crate::tree::MergeTree;

/// Checks `r^(ℓ) ≥ α·r` for every node with at least `ℓ` proper ancestors.
pub fn check_fast_growth(tree: &MergeTree, ell: u32, alpha: Alpha) -> Vec<Violation> {
    assert!(ell >= 1);
    let mut out = Vec::new();
    for (id, node) in tree.nodes().iter().enumerate() {
        let Some(up) = tree.ancestor(id, ell) else { continue };
        let (r, big) = (node.len() as u64, tree.node(up).len() as u64);
        if !alpha.ge_times(big, r) {
            out.push(Violation::at(tree, id, format!("ancestor {ell} up has length {big} < {alpha}·{r}")));
        }
    }
    out
}

/// Checks `r ≥ β^h` for every node.
pub fn check_middle_growth(tree: &MergeTree, beta: Beta) -> Vec<Violation> {
    let th = beta.thresholds(tree.height());
    tree.nodes()
        .iter()
        .enumerate()
        .filter(|(_, node)| (node.len() as u64) < th[node.height as usize])
        .map(|(id, node)| {
            let detail = format!("length {} < {beta}^{}", node.len(), node.height);
            Violation::at(tree, id, detail)
        })
        .collect()
}

/// Checks `r · 2^γ ≥ 2^h` for every node.
pub fn check_tight(tree: &MergeTree, gamma: u32) -> Vec<Violation> {
    tree.nodes()
        .iter()
        .enumerate()
        .filter(|(_, node)| {
            let h = node.height;
            h > gamma && (h - gamma >= 64 || (node.len() as u64) < 1u64 << (h - gamma))
        })
        .map(|(id, node)| {
            let detail = format!("length {} < 2^({} - {gamma})", node.len(), node.height);
            Violation::at(tree, id, detail)
        })
        .collect()
}

pub fn check_growth(tree: &MergeTree, spec: &GrowthSpec) -> Vec<Violation> {
    match *spec {
        GrowthSpec::Fast { ell, alpha } => check_fast_growth(tree, ell, alpha),
        GrowthSpec::Middle { beta } => check_middle_growth(tree, beta),
        GrowthSpec::Tight { gamma } => check_tight(tree, gamma),
    }
}

/// The growth properties each policy is known to have.
pub fn growth_catalog(policy: &Policy) -> Vec<GrowthSpec> {
    let two = Alpha::new(2, 1).unwrap();
    match *policy {
        Policy::PowerSort => vec![GrowthSpec::fast(5, two), GrowthSpec::Tight { gamma: 4 }],
        Policy::PeekSort => vec![GrowthSpec::fast(3, two)],
        Policy::AdaptiveShiversSort => vec![GrowthSpec::fast(6, two)],
        Policy::TimSort => vec![GrowthSpec::fast(3, Alpha::new(5, 4).unwrap())],
        Policy::AlphaMergeSort(a) => vec![GrowthSpec::fast(3, a.alpha_star())],
        Policy::NaturalMergeSort => vec![GrowthSpec::Tight { gamma: 1 }],
        Policy::ShiversSort => vec![GrowthSpec::Tight { gamma: 2 }],
        Policy::AlphaStackSort(a) => vec![GrowthSpec::Middle { beta: Beta::new(a.stack_base(), 4) }],
    }
}

/// The smallest ratio `r^(ℓ) / r` seen at a given `ℓ`: fast growth holds
/// for exactly the α below it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FastProfile {
    pub ell: u32,
    pub numer: u64,
    pub denom: u64,
    pub ratio: f64,
}

/// One entry per `ℓ ≤ max_ell` that some node is deep enough for.
pub fn fast_growth_profile(tree: &MergeTree, max_ell: u32) -> Vec<FastProfile> {
    let mut out = Vec::new();
    for ell in 1..=max_ell {
        let worst = (0..tree.nodes().len())
            .filter_map(|id| {
                let up = tree.ancestor(id, ell)?;
                Some(Ratio::new(tree.node(up).len() as u64, tree.node(id).len() as u64))
            })
            .min();
        let Some(w) = worst else { break };
        out.push(FastProfile {
            ell,
            numer: *w.numer(),
            denom: *w.denom(),
            ratio: *w.numer() as f64 / *w.denom() as f64,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TreeBuilder;

    fn left_comb(k: usize) -> MergeTree {
        let mut b = TreeBuilder::new(&vec![1; k]).unwrap();
        let mut acc = 0;
        for leaf in 1..k {
            acc = b.merge(acc, leaf).unwrap();
        }
        b.finish().unwrap()
    }

    #[test]
    fn single_leaf_passes_everything() {
        let t = TreeBuilder::new(&[7]).unwrap().finish().unwrap();
        for p in Policy::all() {
            for spec in growth_catalog(&p) {
                assert!(check_growth(&t, &spec).is_empty());
            }
        }
        assert!(check_tight(&t, 0).is_empty());
    }

    #[test]
    fn comb_violates_fast_growth() {
        let t = left_comb(6);
        let v = check_fast_growth(&t, 1, Alpha::new(2, 1).unwrap());
        assert!(v.iter().any(|x| x.len == 3 && x.height == 2));
        // Only the leaves pass.
        let lens: Vec<usize> = v.iter().map(|x| x.len).collect();
        assert!(lens.contains(&2) && lens.contains(&5));
        assert!(!check_tight(&t, 0).is_empty());
        assert!(check_middle_growth(&t, Beta::new(Alpha::new(2, 1).unwrap(), 1)).len() >= 3);
    }

    #[test]
    fn tight_uses_exact_powers() {
        // A balanced tree over 8 unit runs has r = 2^h everywhere.
        let t = crate::policies::natural_merge_tree(8).unwrap();
        assert!(check_tight(&t, 0).is_empty());
        let t = left_comb(3);
        // root: length 3, height 2
        assert_eq!(check_tight(&t, 0).len(), 1);
        assert!(check_tight(&t, 1).is_empty());
    }

    #[test]
    fn profile_reports_worst_ratio() {
        let t = left_comb(4);
        let p = fast_growth_profile(&t, 5);
        assert_eq!((p[0].numer, p[0].denom), (4, 3));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn catalog_constants() {
        let a = Alpha::new(3, 2).unwrap();
        assert_eq!(growth_catalog(&Policy::AlphaMergeSort(a))[0].to_string(), "fast(3, 4/3)");
        assert_eq!(
            growth_catalog(&Policy::AlphaStackSort(Alpha::new(2, 1).unwrap()))[0].to_string(),
            "middle((1.5)^(1/4))"
        );
        assert_eq!(growth_catalog(&Policy::PowerSort).len(), 2);
    }
}
