use num_bigint::BigUint;
use serde::Serialize;

use super::growth::growth_catalog;
use crate::error::{Error, Result};
use crate::gallop::{cost_ideal, cost_star, cost_t, GallopConfig, DEFAULT_T};
use crate::item::Item;
use crate::params::{Alpha, GrowthSpec};
use crate::policies::{sort, Policy, PolicyConfig};
use crate::report::{MergeRecord, SortReport};
use crate::runs::EntropyReport;

/// `Π b^e ≤ Π b'^e'`, decided in floating point when the logarithms are
/// clearly apart and with big integers otherwise.
fn product_le(lhs: &[(u64, u64)], rhs: &[(u64, u64)]) -> bool {
    let log = |side: &[(u64, u64)]| side.iter().map(|&(b, e)| e as f64 * (b as f64).log2()).sum::<f64>();
    let (l, r) = (log(lhs), log(rhs));
    let margin = 1e-7 * (l.abs() + r.abs()) + 1e-6;
    if l + margin < r {
        return true;
    }
    if l > r + margin {
        return false;
    }
    let exact = |side: &[(u64, u64)]| {
        side.iter().fold(BigUint::from(1u8), |acc, &(b, e)| {
            acc * BigUint::from(b).pow(u32::try_from(e).expect("exponent fits in u32"))
        })
    };
    exact(lhs) <= exact(rhs)
}

/// Exact test of `Σr ≤ (log₂ n + γ + 1)·n`.
pub fn thm7_holds(sum: u64, n: u64, gamma: u32) -> bool {
    let base = (gamma as u64 + 1) * n;
    // 2^(Σr − (γ+1)n) ≤ n^n
    sum <= base || product_le(&[(2, sum - base)], &[(n, n)])
}

/// Exact test of `Σr ≤ ℓ·(nH/log₂ α + n)`.
pub fn thm6_holds(sum: u64, lengths: &[usize], ell: u32, alpha: Alpha) -> bool {
    let n: u64 = lengths.iter().map(|&l| l as u64).sum();
    let base = ell as u64 * n;
    if sum <= base {
        return true;
    }
    // (n^n / Π l^l)^ℓ ≥ α^(Σr − ℓn)
    let s = sum - base;
    let ell = ell as u64;
    let mut lhs = vec![(alpha.numer(), s)];
    lhs.extend(lengths.iter().filter(|&&l| l > 1).map(|&l| (l as u64, l as u64 * ell)));
    product_le(&lhs, &[(alpha.denom(), s), (n, n * ell)])
}

/// `comparisons ≤ 1 + Σ cost*_t(m)` over the blocks of one merge, each
/// block taken with the `t` in force when it was found. The naive merge is
/// held to `a + b − 1`.
pub fn prop2_holds(record: &MergeRecord) -> bool {
    let (a, b, c) = (record.left_len as u64, record.right_len as u64, record.comparisons);
    let Some(t0) = record.t_effective else {
        return c < (a + b).max(1);
    };
    if a == 0 || b == 0 {
        return c == 0;
    }
    let last_t = record.searches.last().map_or(t0, |&(t, _)| t);
    let rest = *record.blocks.last().unwrap_or(&0) as u64;
    let terms = || {
        let tail = (rest > 0).then_some((last_t, rest));
        record.searches.iter().map(|&(t, m)| (t, m as u64)).chain(tail)
    };
    // cost_t ≤ cost*_t, so the integer sum settles most cases exactly.
    let paid: u64 = terms().map(|(t, m)| cost_t(t, m).unwrap()).sum();
    if c <= 1 + paid {
        return true;
    }
    let bound: f64 = terms().map(|(t, m)| cost_star(t, m)).sum::<f64>() + 1.0;
    c as f64 <= bound * (1.0 + 1e-12)
}

/// `Σ cost_ideal(m, c)` over all blocks of all merges.
pub fn ideal_cost(report: &SortReport, c: f64) -> f64 {
    report
        .per_merge
        .iter()
        .flat_map(|r| r.blocks.iter())
        .filter(|&&m| m > 0)
        .map(|&m| cost_ideal(m as u64, c))
        .sum()
}

/// One bound next to the value it constrains.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub name: String,
    pub measured: f64,
    pub value: f64,
    pub holds: bool,
    /// Whether the configuration meets the hypotheses the bound is stated
    /// under.
    pub applies: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub rho: usize,
    pub sigma: usize,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H_star")]
    pub h_star: f64,
    pub comparisons: u64,
    pub internal_length_sum: u64,
    pub slack: f64,
    /// `(log₂ n + γ + 1)·n` for policies with tight middle growth.
    pub thm7: Option<Bound>,
    /// `ℓ·(nH/log₂ α + n)`, one per fast-growth catalog entry.
    pub thm6: Vec<Bound>,
    /// `(1 + 1/(t+3))·nH* + log₂(t+1)·n + C·n`.
    pub thm43: Bound,
    pub thm43_t: u32,
    /// `nH* + 2·log₂(H*+1)·n + C·n`.
    pub thm45: Bound,
    /// `nH* + (1 + 1/τ)·log₂(H*+1)·n + log₂(τ)·n + C·n` for the scaled mode.
    pub thm45_tau: Option<Bound>,
    pub ideal_cost: f64,
}

/// Evaluates every bound that concerns `config` on one sort. Never fails on
/// a bound that does not hold; check the `holds` fields.
pub fn bound_report(
    report: &SortReport,
    entropy: &EntropyReport,
    config: &PolicyConfig,
    slack: f64,
) -> Result<BoundReport> {
    if report.n != entropy.n {
        return Err(Error::MismatchedN { report: report.n, entropy: entropy.n });
    }
    let n = report.n as u64;
    let nf = n as f64;
    let sum = report.tree.stats().internal_length_sum;
    let lengths = report.tree.run_lengths();
    let catalog = growth_catalog(&config.policy);
    let mut thm7 = None;
    let mut thm6 = Vec::new();
    for spec in &catalog {
        match *spec {
            GrowthSpec::Tight { gamma } => {
                thm7 = Some(Bound {
                    name: format!("thm7(gamma={gamma})"),
                    measured: sum as f64,
                    value: (nf.log2() + gamma as f64 + 1.0) * nf,
                    holds: thm7_holds(sum, n, gamma),
                    applies: true,
                })
            }
            GrowthSpec::Fast { ell, alpha } => thm6.push(Bound {
                name: format!("thm6(ell={ell}, alpha={alpha})"),
                measured: sum as f64,
                value: ell as f64 * (nf * entropy.h / alpha.to_f64().log2() + nf),
                holds: thm6_holds(sum, &lengths, ell, alpha),
                applies: true,
            }),
            GrowthSpec::Middle { .. } => {}
        }
    }
    let tight = thm7.is_some() || config.policy == Policy::PeekSort;
    let hs = entropy.h_star;
    let measured = report.comparisons as f64;
    let comparison_bound = |name: String, value: f64, applies: bool| Bound {
        name,
        measured,
        value,
        holds: measured <= value,
        applies,
    };
    let t = match config.gallop {
        GallopConfig::FixedT(t) | GallopConfig::TimsortUpdate(t) => t,
        _ => DEFAULT_T,
    };
    let tf = t as f64;
    let thm43 = comparison_bound(
        format!("thm43(t={t})"),
        (1.0 + 1.0 / (tf + 3.0)) * nf * hs + (tf + 1.0).log2() * nf + slack * nf,
        tight && config.gallop == GallopConfig::FixedT(t),
    );
    let thm45 = comparison_bound(
        "thm45".into(),
        nf * hs + 2.0 * (hs + 1.0).log2() * nf + slack * nf,
        tight && config.gallop == GallopConfig::Logarithmic,
    );
    let thm45_tau = match config.gallop {
        GallopConfig::LogScaled(tau) if tau >= 1 => {
            let tau_f = tau as f64;
            Some(comparison_bound(
                format!("thm45(tau={tau})"),
                nf * hs + (1.0 + 1.0 / tau_f) * (hs + 1.0).log2() * nf + tau_f.log2() * nf + slack * nf,
                tight,
            ))
        }
        _ => None,
    };
    Ok(BoundReport {
        n: report.n,
        rho: entropy.rho,
        sigma: entropy.sigma,
        h: entropy.h,
        h_star: hs,
        comparisons: report.comparisons,
        internal_length_sum: sum,
        slack,
        thm7,
        thm6,
        thm43,
        thm43_t: t,
        thm45,
        thm45_tau,
        ideal_cost: ideal_cost(report, 1.0),
    })
}

/// Naive merging against TimSort's parameter update on the same input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpdateComparison {
    pub c_naive: u64,
    pub c_update: u64,
    /// `Σ m` over the blocks found by the updating run.
    pub mu: u64,
    /// Merge steps of the updating run, one boundary comparison each.
    pub rho: usize,
    /// `c_update ≤ c_naive + √(3μ) + ρ`.
    pub holds: bool,
}

pub fn compare_update_policy<K: Ord + Clone>(array: &[Item<K>], policy: &Policy) -> Result<UpdateComparison> {
    let (_, naive) = sort(array, &PolicyConfig::new(*policy, GallopConfig::Naive))?;
    let (_, update) = sort(array, &PolicyConfig::new(*policy, GallopConfig::TimsortUpdate(DEFAULT_T)))?;
    let mu = update.discovered_total();
    let rho = update.tree.leaf_count();
    let holds = update.comparisons as f64 <= naive.comparisons as f64 + (3.0 * mu as f64).sqrt() + rho as f64;
    Ok(UpdateComparison { c_naive: naive.comparisons, c_update: update.comparisons, mu, rho, holds })
}
