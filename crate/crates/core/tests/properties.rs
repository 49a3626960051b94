use proptest::prelude::*;
use runmerge::analysis::{check_growth, growth_catalog, prop2_holds};
use runmerge::generators::{array_from_run_lengths, few_values, Family};
use runmerge::{
    is_stably_sorted, items_from_keys, plan, same_multiset, sort, sort_slice_by, GallopConfig, Item, Policy,
    PolicyConfig, RunDetection,
};

const MODES: [GallopConfig; 5] = [
    GallopConfig::Naive,
    GallopConfig::FixedT(0),
    GallopConfig::TimsortUpdate(7),
    GallopConfig::Logarithmic,
    GallopConfig::LogScaled(3),
];

fn check_all(items: &[Item], detection: RunDetection) -> Result<(), TestCaseError> {
    for policy in Policy::all() {
        for mode in MODES {
            let config = PolicyConfig::new(policy, mode).with_detection(detection);
            let (out, report) = sort(items, &config).unwrap();
            prop_assert!(is_stably_sorted(&out), "{policy} {mode:?}");
            prop_assert!(same_multiset(items, &out));
            prop_assert_eq!(report.merges + 1, report.tree.leaf_count());
            prop_assert_eq!(report.detection_comparisons, items.len() as u64 - 1);
            for r in &report.per_merge {
                prop_assert!(prop2_holds(r), "{policy} {mode:?} {r:?}");
                prop_assert_eq!(r.blocks.iter().sum::<usize>(), r.left_len + r.right_len);
            }
            prop_assert_eq!(report.main_violations().count(), 0);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_configuration_sorts_stably(keys in prop::collection::vec(-4i64..4, 1..300)) {
        check_all(&items_from_keys(keys), RunDetection::Greedy)?;
    }

    #[test]
    fn ascending_detection_sorts_stably(keys in prop::collection::vec(0i64..50, 1..300)) {
        check_all(&items_from_keys(keys), RunDetection::Ascending)?;
    }

    #[test]
    fn planned_trees_meet_their_catalog(lengths in prop::collection::vec(1usize..40, 1..120)) {
        for policy in Policy::all() {
            let p = plan(&lengths, &policy).unwrap();
            prop_assert_eq!(p.tree.run_lengths(), lengths.clone());
            for spec in growth_catalog(&policy) {
                prop_assert!(check_growth(&p.tree, &spec).is_empty(), "{policy} {spec}");
            }
        }
    }
}

#[test]
fn runs_from_lengths_roundtrip() {
    let lengths = [3, 1, 1, 4, 2];
    let items = array_from_run_lengths(&lengths).unwrap();
    let config = PolicyConfig::new(Policy::PeekSort, GallopConfig::Naive).with_detection(RunDetection::Ascending);
    let (_, report) = sort(&items, &config).unwrap();
    assert_eq!(report.tree.run_lengths(), lengths);
}

#[test]
fn custom_comparator_on_plain_slices() {
    let mut words = vec!["pear", "fig", "apple", "kiwi", "date", "plum"];
    let config = PolicyConfig::new(Policy::TimSort, GallopConfig::FixedT(1));
    let report = sort_slice_by(&mut words, |a, b| a.len().cmp(&b.len()), &config).unwrap();
    assert_eq!(words, ["fig", "pear", "kiwi", "date", "plum", "apple"]);
    assert!(report.comparisons >= 5);
}

#[test]
fn empty_input_is_an_error() {
    let config = PolicyConfig::new(Policy::PowerSort, GallopConfig::Naive);
    assert!(sort::<i64>(&[], &config).is_err());
}

#[test]
fn galloping_helps_on_two_values() {
    let items = few_values(20_000, 2, 4).unwrap();
    for policy in Policy::all() {
        let c = |g| sort(&items, &PolicyConfig::new(policy, g)).unwrap().1.comparisons;
        assert!(c(GallopConfig::FixedT(7)) * 2 < c(GallopConfig::Naive), "{policy}");
        assert!(c(GallopConfig::Logarithmic) * 2 < c(GallopConfig::Naive), "{policy}");
    }
}

#[test]
fn family_names_roundtrip() {
    for s in ["random-perm", "few-values:8", "few-runs:3", "run-lengths:2,1,5", "peeksort-worst:2"] {
        let f: Family = s.parse().unwrap();
        assert_eq!(f.to_string(), s);
    }
}
