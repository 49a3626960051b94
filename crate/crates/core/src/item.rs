use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// A key paired with its original position.
///
/// Tags are never compared; they only witness stability after sorting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Item<K = i64> {
    pub key: K,
    pub tag: usize,
}

impl<K> Item<K> {
    pub fn new(key: K, tag: usize) -> Self {
        Item { key, tag }
    }
}

/// Tags keys with their positions `0..n`.
pub fn items_from_keys<K>(keys: impl IntoIterator<Item = K>) -> Vec<Item<K>> {
    keys.into_iter()
        .enumerate()
        .map(|(tag, key)| Item { key, tag })
        .collect()
}

pub fn keys_of<K: Clone>(items: &[Item<K>]) -> Vec<K> {
    items.iter().map(|it| it.key.clone()).collect()
}

/// Compares two items by key and bumps `counter` by one.
pub fn counting_compare<K: Ord>(x: &Item<K>, y: &Item<K>, counter: &mut u64) -> Ordering {
    *counter += 1;
    x.key.cmp(&y.key)
}

/// Key comparator for items, ignoring tags.
pub fn by_key<K: Ord>(x: &Item<K>, y: &Item<K>) -> Ordering {
    x.key.cmp(&y.key)
}

/// A comparator that counts its invocations.
///
/// Every comparison made while sorting goes through one of these.
#[derive(Debug, Clone)]
pub struct Counter<F> {
    cmp: F,
    count: u64,
}

impl<F> Counter<F> {
    pub fn new(cmp: F) -> Self {
        Counter { cmp, count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn compare<T>(&mut self, a: &T, b: &T) -> Ordering
    where
        F: FnMut(&T, &T) -> Ordering,
    {
        self.count += 1;
        (self.cmp)(a, b)
    }

    /// `a < b`, one comparison.
    pub fn lt<T>(&mut self, a: &T, b: &T) -> bool
    where
        F: FnMut(&T, &T) -> Ordering,
    {
        self.compare(a, b) == Ordering::Less
    }

    /// Compares without counting. Only used by debug-build sortedness checks.
    pub(crate) fn peek<T>(&mut self, a: &T, b: &T) -> Ordering
    where
        F: FnMut(&T, &T) -> Ordering,
    {
        (self.cmp)(a, b)
    }

    pub(crate) fn is_sorted<T>(&mut self, run: &[T]) -> bool
    where
        F: FnMut(&T, &T) -> Ordering,
    {
        run.windows(2)
            .all(|w| self.peek(&w[1], &w[0]) != Ordering::Less)
    }
}

/// True if keys are non-decreasing and equal keys keep ascending tags.
pub fn is_stably_sorted<K: Ord>(items: &[Item<K>]) -> bool {
    items.windows(2).all(|w| match w[0].key.cmp(&w[1].key) {
        Ordering::Less => true,
        Ordering::Equal => w[0].tag < w[1].tag,
        Ordering::Greater => false,
    })
}

/// True if `out` is a permutation of `input` (compared as (key, tag) pairs).
pub fn same_multiset<K: Ord + Clone>(input: &[Item<K>], out: &[Item<K>]) -> bool {
    if input.len() != out.len() {
        return false;
    }
    let mut seen = vec![false; input.len()];
    for it in out {
        match input.get(it.tag) {
            Some(orig) if orig.key == it.key && !seen[it.tag] => seen[it.tag] = true,
            _ => return false,
        }
    }
    true
}
