use std::path::PathBuf;

use clap::Args;
use runmerge::generators::Family;
use runmerge::{keys_of, RunDetection};

use crate::textio::{emit, format_keys};
use crate::{out_path, parse_family, Failure};

#[derive(Args, Debug)]
pub struct GenArgs {
    /// random-perm, few-values:σ, few-runs:k, many-unit-runs,
    /// run-lengths:l1,l2,.., dual-runs:s1,s2,.., adaptive-shivers-worst:k,
    /// peeksort-worst:k
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Ignored by families with a fixed profile.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(a: &GenArgs) -> Result<(), Failure> {
    let case = a.family.generate(a.n, a.seed)?;
    let header = format!(
        "family={} n={} seed={} detection={}",
        a.family,
        case.items.len(),
        a.seed,
        match case.detection {
            RunDetection::Greedy => "greedy",
            RunDetection::Ascending => "ascending",
        },
    );
    emit(out_path(&a.out), &format_keys(Some(&header), keys_of(&case.items)))
}
