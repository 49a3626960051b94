//! Boundary powers and the PowerSort merge tree.

use crate::error::Result;
use crate::tree::{MergeTree, NodeId, TreeBuilder};

/// Prefix sums `e_0 = 0, e_1, …, e_ρ = n` of the run lengths.
pub fn prefix_sums(lengths: &[usize]) -> Vec<u64> {
    let mut e = Vec::with_capacity(lengths.len() + 1);
    e.push(0);
    let mut acc = 0u64;
    for &l in lengths {
        acc += l as u64;
        e.push(acc);
    }
    e
}

/// Power of the boundary between runs `i` and `i + 1` (1-based), for
/// `1 ≤ i ≤ ρ − 1`: the least `p ≥ 1` such that the interval
/// `(e_{i−1} + e_i, e_i + e_{i+1}]` contains a multiple of `n / 2^(p−1)`.
pub fn boundary_power(i: usize, e: &[u64], n: u64) -> u32 {
    assert!(i >= 1 && i + 1 < e.len(), "boundary {i} out of range");
    assert!(n < 1 << 62);
    // lo, hi < 2n, so ⌊x·2^63 / n⌋ fits in 64 bits, and
    // ⌊x·2^q / n⌋ = ⌊x·2^63 / n⌋ >> (63 − q) for q ≤ 63.
    let scaled = |x: u64| (((x as u128) << 63) / n as u128) as u64;
    let lo = scaled(e[i - 1] + e[i]);
    let hi = scaled(e[i] + e[i + 1]);
    (lo ^ hi).leading_zeros() + 1
}

/// Boundary powers indexed by boundary: `None` stands for `p_0 = −∞`, and
/// `p_ρ = 0`.
pub fn all_boundary_powers(lengths: &[usize]) -> Vec<Option<u32>> {
    let e = prefix_sums(lengths);
    let n = *e.last().unwrap();
    let rho = lengths.len();
    let mut p = vec![None; rho + 1];
    for (i, slot) in p.iter_mut().enumerate().take(rho).skip(1) {
        *slot = Some(boundary_power(i, &e, n));
    }
    p[rho] = Some(0);
    p
}

/// Power of a node covering leaves `l0..l1`: `max{p_{i−1}, p_j}`.
pub fn node_power(p: &[Option<u32>], leaves: std::ops::Range<usize>) -> u32 {
    p[leaves.start].max(p[leaves.end]).expect("p_j is always finite")
}

pub fn plan_powersort(lengths: &[usize]) -> Result<MergeTree> {
    let mut b = TreeBuilder::new(lengths)?;
    let p = all_boundary_powers(lengths);
    let mut ids: Vec<NodeId> = vec![0];
    // below[k] is the power of the boundary between ids[k] and ids[k + 1].
    let mut below: Vec<u32> = Vec::new();
    for (leaf, &power) in p.iter().enumerate().take(lengths.len()).skip(1) {
        let power = power.unwrap();
        while below.last().is_some_and(|&q| q >= power) {
            below.pop();
            let r = ids.pop().unwrap();
            let l = ids.pop().unwrap();
            ids.push(b.merge(l, r)?);
        }
        below.push(power);
        ids.push(leaf);
    }
    while ids.len() >= 2 {
        let r = ids.pop().unwrap();
        let l = ids.pop().unwrap();
        ids.push(b.merge(l, r)?);
    }
    for id in 0..2 * lengths.len() - 1 {
        let power = node_power(&p, b.leaves(id));
        b.set_power(id, power);
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let e = prefix_sums(&[3, 3]);
        assert_eq!(boundary_power(1, &e, 6), 1);
        let e = prefix_sums(&[1, 1, 2]);
        assert_eq!(boundary_power(1, &e, 4), 2);
        assert_eq!(boundary_power(2, &e, 4), 1);
        assert_eq!(all_boundary_powers(&[1, 1, 2]), vec![None, Some(2), Some(1), Some(0)]);
    }

    #[test]
    fn trees_follow_powers() {
        let t = plan_powersort(&[3, 3]).unwrap();
        assert_eq!(t.node(t.root()).power, Some(0));
        assert_eq!(t.node(0).power, Some(1));
        assert_eq!(t.node(1).power, Some(1));

        let t = plan_powersort(&[1, 1, 2]).unwrap();
        let first = t.node(3);
        assert_eq!(first.children, Some([0, 1]));
        assert_eq!(t.node(4).children, Some([3, 2]));
        assert_eq!(first.power, Some(1));

        let t = plan_powersort(&[5]).unwrap();
        assert_eq!((t.merges(), t.node(0).power), (0, Some(0)));
    }

    fn brute_power(i: usize, e: &[u64], n: u64) -> u32 {
        let (lo, hi, n) = ((e[i - 1] + e[i]) as u128, (e[i] + e[i + 1]) as u128, n as u128);
        let mut p = 1u32;
        while (lo << (p - 1)) / n == (hi << (p - 1)) / n {
            p += 1;
        }
        p
    }

    #[test]
    fn matches_division_loop() {
        for n in 2..120usize {
            for a in 1..n {
                for b in 1..=n - a {
                    let lengths = [a, b, n - a - b].into_iter().filter(|&x| x > 0).collect::<Vec<_>>();
                    let e = prefix_sums(&lengths);
                    for i in 1..lengths.len() {
                        assert_eq!(boundary_power(i, &e, n as u64), brute_power(i, &e, n as u64));
                    }
                }
            }
        }
        let e = prefix_sums(&[1, 1 << 40, 3]);
        let n = *e.last().unwrap();
        assert_eq!(boundary_power(1, &e, n), brute_power(1, &e, n));
        assert_eq!(boundary_power(2, &e, n), brute_power(2, &e, n));
    }

    #[test]
    fn power_is_bounded() {
        for n in 2..200usize {
            for split in 1..n {
                let e = prefix_sums(&[split, n - split]);
                let p = boundary_power(1, &e, n as u64);
                let bound = 64 - ((2 * n as u64) - 1).leading_zeros() + 1;
                assert!(p <= bound);
            }
        }
    }
}
