use std::path::PathBuf;

use clap::{Args, ValueEnum};
use runmerge::analysis::{bound_report, BoundReport};
use runmerge::{
    is_stably_sorted, items_from_keys, keys_of, same_multiset, sort, EntropyReport, InvariantViolation,
    PolicyConfig, RunDetection, TreeJson,
};
use serde::Serialize;

use crate::textio::{emit, format_keys, read_keys};
use crate::{mode_name, mode_param, out_path, to_json, AlgoArgs, Detection, Failure, MergeMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeFormat {
    None,
    Json,
    Dot,
}

/// `--merge`, `--t`, `--tau`, `--detection`, `--slack`.
#[derive(Args, Debug, Clone)]
pub struct MergeArgs {
    #[arg(long, value_enum, default_value = "naive")]
    pub merge: MergeMode,
    /// Galloping threshold for gallop-fixed, initial value for gallop-update.
    #[arg(long, default_value_t = 7)]
    pub t: u32,
    /// Scale for gallop-logscaled.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub tau: u32,
    #[arg(long, value_enum, default_value = "greedy")]
    pub detection: Detection,
    /// The constant C of the comparison bounds, in units of n.
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
}

#[derive(Args, Debug)]
pub struct SortArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Sorted keys; not written when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report JSON; defaults to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    algo: AlgoArgs,
    #[command(flatten)]
    merge: MergeArgs,
    /// json embeds the tree in the report; dot writes it to --tree-out.
    #[arg(long, value_enum, default_value = "none")]
    tree: TreeFormat,
    /// DOT output; defaults to stdout when the report goes to a file.
    #[arg(long)]
    tree_out: Option<PathBuf>,
}

/// Everything `sort` reports. Together with the tree this is enough to
/// recompute every bound offline.
#[derive(Serialize)]
pub struct SortOutput {
    pub sorted: bool,
    pub stable: bool,
    pub n: usize,
    pub algo: String,
    pub merge: &'static str,
    pub param: String,
    pub detection: RunDetection,
    pub comparisons: u64,
    pub detection_comparisons: u64,
    pub moves: u64,
    pub merges: usize,
    pub rho: usize,
    pub sigma: usize,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "H_star")]
    pub h_star: f64,
    pub run_lengths: Vec<usize>,
    pub dual_run_lengths: Vec<usize>,
    pub internal_length_sum: u64,
    pub max_height: u32,
    pub bounds: BoundReport,
    pub invariant_violations: Vec<InvariantViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeJson>,
}

pub fn run(a: &SortArgs) -> Result<(), Failure> {
    if a.tree == TreeFormat::Dot && a.report.is_none() && a.tree_out.is_none() {
        return Err(Failure::Usage("--tree dot needs --tree-out when the report goes to stdout".into()));
    }
    let policy = a.algo.single()?;
    let gallop = a.merge.merge.config(a.merge.t, a.merge.tau);
    let detection: RunDetection = a.merge.detection.into();
    let config = PolicyConfig::new(policy, gallop).with_detection(detection);

    let items = items_from_keys(read_keys(&a.input)?);
    let (out, report) = sort(&items, &config)?;
    let entropy = EntropyReport::new(&items, detection)?;
    let bounds = bound_report(&report, &entropy, &config, a.merge.slack)?;
    let sorted = out.windows(2).all(|w| w[0].key <= w[1].key) && same_multiset(&items, &out);
    let stable = is_stably_sorted(&out);
    let stats = report.tree.stats();
    log::info!("{policy} {}: {} comparisons", mode_name(&gallop), report.comparisons);

    let output = SortOutput {
        sorted,
        stable,
        n: report.n,
        algo: policy.to_string(),
        merge: mode_name(&gallop),
        param: mode_param(&gallop),
        detection,
        comparisons: report.comparisons,
        detection_comparisons: report.detection_comparisons,
        moves: report.moves,
        merges: report.merges,
        rho: entropy.rho,
        sigma: entropy.sigma,
        h: entropy.h,
        h_star: entropy.h_star,
        run_lengths: entropy.run_lengths,
        dual_run_lengths: entropy.dual_run_lengths,
        internal_length_sum: stats.internal_length_sum,
        max_height: stats.max_height,
        bounds,
        invariant_violations: report.invariant_violations.clone(),
        tree: (a.tree == TreeFormat::Json).then(|| report.tree.to_json()),
    };
    if let Some(p) = &a.out {
        emit(Some(p), &format_keys(None, keys_of(&out)))?;
    }
    emit(out_path(&a.report), &to_json(&output))?;
    if a.tree == TreeFormat::Dot {
        emit(out_path(&a.tree_out), &report.tree.to_dot())?;
    }
    if !(sorted && stable) {
        return Err(Failure::Verify(format!("output sorted={sorted} stable={stable}")));
    }
    Ok(())
}
