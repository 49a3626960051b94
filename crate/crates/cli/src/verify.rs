use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use runmerge::analysis::{
    check_growth, check_power_order, check_split_runs, prop2_holds, thm6_holds, thm7_holds, growth_catalog,
    Violation,
};
use runmerge::generators::{below, rng, Family};
use runmerge::runs::run_lengths;
use runmerge::{
    is_stably_sorted, plan, same_multiset, sort, GallopConfig, GrowthSpec, Item, Phase, Policy, PolicyConfig,
};
use serde::Serialize;

use crate::analyze::specs_of;
use crate::textio::emit;
use crate::{mode_name, out_path, to_json, AlgoArgs, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Growth,
    Invariants,
    Stability,
    Bounds,
    Split,
    Power,
    All,
}

const SUITES: [Suite; 6] =
    [Suite::Growth, Suite::Invariants, Suite::Stability, Suite::Bounds, Suite::Split, Suite::Power];

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    suite: Vec<Suite>,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest generated n; sizes are log-uniform in 1..=max-n.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: u64,
    /// Defaults to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// One failed check.
#[derive(Debug, Serialize)]
pub struct Failed {
    pub suite: Suite,
    pub algo: String,
    pub case: usize,
    pub family: String,
    pub n: usize,
    pub case_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merge: Option<&'static str>,
    pub detail: String,
    /// The offending nodes, at most [`MAX_NODES`] of them.
    pub nodes: Vec<Violation>,
}

pub const MAX_NODES: usize = 20;

#[derive(Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<Suite>,
    pub checks: u64,
    pub passed: bool,
    pub violations: Vec<Failed>,
}

pub struct GenCase {
    pub family: Family,
    pub seed: u64,
    pub items: Vec<Item>,
    pub detection: runmerge::RunDetection,
}

/// Case `i` of a run seeded with `seed`; families cycle through the
/// generator catalog.
pub fn gen_case(seed: u64, i: usize, max_n: u64) -> Result<GenCase, Failure> {
    let case_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64);
    let mut r = rng(case_seed);
    let u = below(&mut r, 1 << 53) as f64 / (1u64 << 53) as f64;
    let n = ((max_n as f64).powf(u).floor() as usize).clamp(1, max_n as usize);
    let k_max = |fits: &dyn Fn(u32) -> bool| (1..).take_while(|&k| fits(k)).last().unwrap_or(0);
    let family = match i % 9 {
        0 => Family::RandomPerm,
        1 => Family::FewRuns(1 + below(&mut r, 40) as usize),
        2 => Family::ManyUnitRuns,
        3 => Family::FewValues(2),
        4 => Family::FewValues(4),
        5 => Family::FewValues(8),
        6 => Family::FewValues(64),
        7 => {
            let k = k_max(&|k| k < 30 && (1u64 << (k + 1)) + k as u64 - 1 <= max_n).max(1);
            Family::AdaptiveShiversWorst(1 + below(&mut r, k as u64) as u32)
        }
        _ => {
            let k = k_max(&|k| k < 30 && 3u64.pow(k) <= max_n);
            Family::PeekSortWorst(below(&mut r, k as u64 + 1) as u32)
        }
    };
    let case = family.generate(n, case_seed)?;
    Ok(GenCase { family, seed: case_seed, items: case.items, detection: case.detection })
}

const MODES: [GallopConfig; 5] = [
    GallopConfig::Naive,
    GallopConfig::FixedT(7),
    GallopConfig::TimsortUpdate(7),
    GallopConfig::Logarithmic,
    GallopConfig::LogScaled(2),
];

struct Ctx<'a> {
    case: &'a GenCase,
    index: usize,
    policy: Policy,
    checks: u64,
    out: Vec<Failed>,
}

impl Ctx<'_> {
    fn check(&mut self, suite: Suite, merge: Option<&'static str>, detail: impl FnOnce() -> String, nodes: Vec<Violation>, ok: bool) {
        self.checks += 1;
        if !ok {
            self.out.push(Failed {
                suite,
                algo: self.policy.to_string(),
                case: self.index,
                family: self.case.family.to_string(),
                n: self.case.items.len(),
                case_seed: self.case.seed,
                merge,
                detail: detail(),
                nodes: nodes.into_iter().take(MAX_NODES).collect(),
            });
        }
    }
}

fn run_sort(items: &[Item], config: &PolicyConfig) -> Result<(Vec<Item>, runmerge::SortReport), String> {
    match panic::catch_unwind(AssertUnwindSafe(|| sort(items, config))) {
        Ok(Ok(r)) => Ok(r),
        Ok(Err(e)) => Err(e.to_string()),
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn check_policy(ctx: &mut Ctx<'_>, suites: &[Suite], lengths: &[usize]) -> Result<(), Failure> {
    let policy = ctx.policy;
    let p = plan(lengths, &policy)?;
    let tree = &p.tree;
    let has = |s| suites.contains(&s);
    if has(Suite::Growth) {
        for spec in specs_of(&policy) {
            let v = check_growth(tree, &spec);
            let (ok, count) = (v.is_empty(), v.len());
            ctx.check(Suite::Growth, None, || format!("{spec}: {count} nodes"), v, ok);
        }
    }
    if has(Suite::Invariants) {
        let main: Vec<_> = p.violations.iter().filter(|v| v.phase == Phase::Main).collect();
        let ok = main.is_empty();
        ctx.check(Suite::Invariants, None, || format!("{main:?}"), vec![], ok);
    }
    if has(Suite::Split) && policy == Policy::PeekSort {
        let v = check_split_runs(tree);
        let ok = v.is_empty();
        ctx.check(Suite::Split, None, || "gr·r + 2·sl < r".into(), v, ok);
    }
    if has(Suite::Power) && policy == Policy::PowerSort {
        let v = check_power_order(tree)?;
        let ok = v.is_empty();
        ctx.check(Suite::Power, None, || "power order".into(), v, ok);
    }
    if has(Suite::Bounds) {
        let n = tree.n() as u64;
        let sum = tree.stats().internal_length_sum;
        for spec in growth_catalog(&policy) {
            let ok = match spec {
                GrowthSpec::Tight { gamma } => thm7_holds(sum, n, gamma),
                GrowthSpec::Fast { ell, alpha } => thm6_holds(sum, lengths, ell, alpha),
                GrowthSpec::Middle { .. } => continue,
            };
            ctx.check(Suite::Bounds, None, || format!("internal length sum {sum} above the {spec} bound"), vec![], ok);
        }
    }
    let bounds = has(Suite::Bounds);
    if has(Suite::Stability) || bounds {
        for mode in MODES {
            let prop2 = bounds
                && matches!(mode, GallopConfig::FixedT(_) | GallopConfig::Logarithmic | GallopConfig::LogScaled(_));
            if !has(Suite::Stability) && !prop2 {
                continue;
            }
            let config = PolicyConfig::new(policy, mode).with_detection(ctx.case.detection);
            let name = Some(mode_name(&mode));
            let (out, report) = match run_sort(&ctx.case.items, &config) {
                Ok(r) => r,
                Err(e) => {
                    ctx.check(Suite::Stability, name, || e, vec![], false);
                    continue;
                }
            };
            if has(Suite::Stability) {
                let ok = is_stably_sorted(&out) && same_multiset(&ctx.case.items, &out);
                ctx.check(Suite::Stability, name, || "output not a stable sort of the input".into(), vec![], ok);
            }
            if prop2 {
                let bad = report.per_merge.iter().position(|r| !prop2_holds(r));
                ctx.check(Suite::Bounds, name, || format!("merge {bad:?} above its block cost bound"), vec![], bad.is_none());
            }
        }
    }
    Ok(())
}

pub fn verify(
    suites: &[Suite],
    policies: &[Policy],
    cases: usize,
    seed: u64,
    max_n: u64,
) -> Result<VerifyReport, Failure> {
    let mut suites: Vec<Suite> = if suites.contains(&Suite::All) { SUITES.to_vec() } else { suites.to_vec() };
    suites.dedup();
    let mut checks = 0;
    let mut violations = Vec::new();
    for i in 0..cases {
        let case = gen_case(seed, i, max_n)?;
        let lengths = run_lengths(&case.items, case.detection)?;
        for &policy in policies {
            let mut ctx = Ctx { case: &case, index: i, policy, checks: 0, out: Vec::new() };
            check_policy(&mut ctx, &suites, &lengths)?;
            checks += ctx.checks;
            violations.append(&mut ctx.out);
        }
    }
    Ok(VerifyReport { seed, cases, suites, checks, passed: violations.is_empty(), violations })
}

pub fn run(a: &VerifyArgs) -> Result<(), Failure> {
    let policies = a.algo.policies()?;
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let report = verify(&a.suite, &policies, a.cases, a.seed, a.max_n);
    panic::set_hook(hook);
    let report = report?;
    emit(out_path(&a.report), &to_json(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verify(format!("{} of {} checks failed", report.violations.len(), report.checks)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_are_deterministic_and_bounded() {
        for i in 0..30 {
            let a = gen_case(5, i, 500).unwrap();
            let b = gen_case(5, i, 500).unwrap();
            assert_eq!(a.items, b.items);
            assert!(!a.items.is_empty() && a.items.len() <= 1000, "{} {}", a.family, a.items.len());
        }
    }

    #[test]
    fn small_run_is_clean() {
        let r = verify(&[Suite::All], &Policy::all(), 18, 3, 300).unwrap();
        assert!(r.passed, "{:?}", r.violations);
        assert!(r.checks > 18 * 8 * 5);
    }
}
