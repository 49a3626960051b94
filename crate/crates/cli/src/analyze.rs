use std::path::PathBuf;

use clap::Args;
use runmerge::analysis::{
    check_growth, check_power_order, check_split_runs, fast_growth_profile, growth_catalog, FastProfile,
    Violation,
};
use runmerge::{items_from_keys, plan, EntropyReport, InvariantViolation, Policy, RunDetection};
use serde::Serialize;

use crate::textio::{emit, read_keys};
use crate::{out_path, to_json, AlgoArgs, Detection, Failure};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, value_enum, default_value = "greedy")]
    detection: Detection,
    /// Largest ℓ of the fast-growth profile.
    #[arg(long, default_value_t = 8)]
    max_ell: u32,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
pub struct GrowthResult {
    pub spec: String,
    pub violations: Vec<Violation>,
}

#[derive(Serialize)]
pub struct PolicyAnalysis {
    pub algo: String,
    pub merges: usize,
    pub height: u32,
    pub internal_length_sum: u64,
    pub growth: Vec<GrowthResult>,
    pub fast_profile: Vec<FastProfile>,
    /// PeekSort only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_runs: Option<Vec<Violation>>,
    /// PowerSort only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_order: Option<Vec<Violation>>,
    pub invariant_violations: Vec<InvariantViolation>,
}

#[derive(Serialize)]
pub struct Analysis {
    pub detection: RunDetection,
    pub entropy: EntropyReport,
    pub policies: Vec<PolicyAnalysis>,
}

/// Growth specs of the catalog, each followed by the middle growth it
/// implies.
pub(crate) fn specs_of(policy: &Policy) -> Vec<runmerge::GrowthSpec> {
    let mut out = Vec::new();
    for s in growth_catalog(policy) {
        let implied = s.implied_middle();
        out.push(s);
        out.extend(implied);
    }
    out
}

pub fn analyze_policy(lengths: &[usize], policy: Policy, max_ell: u32) -> Result<PolicyAnalysis, Failure> {
    let p = plan(lengths, &policy)?;
    let tree = &p.tree;
    let stats = tree.stats();
    let growth = specs_of(&policy)
        .iter()
        .map(|s| GrowthResult { spec: s.to_string(), violations: check_growth(tree, s) })
        .collect();
    Ok(PolicyAnalysis {
        algo: policy.to_string(),
        merges: tree.merges(),
        height: tree.height(),
        internal_length_sum: stats.internal_length_sum,
        growth,
        fast_profile: fast_growth_profile(tree, max_ell),
        split_runs: (policy == Policy::PeekSort).then(|| check_split_runs(tree)),
        power_order: if policy == Policy::PowerSort { Some(check_power_order(tree)?) } else { None },
        invariant_violations: p.violations,
    })
}

pub fn run(a: &AnalyzeArgs) -> Result<(), Failure> {
    let items = items_from_keys(read_keys(&a.input)?);
    let detection: RunDetection = a.detection.into();
    let entropy = EntropyReport::new(&items, detection)?;
    let policies = a
        .algo
        .policies()?
        .into_iter()
        .map(|p| analyze_policy(&entropy.run_lengths, p, a.max_ell))
        .collect::<Result<_, _>>()?;
    emit(out_path(&a.out), &to_json(&Analysis { detection, entropy, policies }))
}
