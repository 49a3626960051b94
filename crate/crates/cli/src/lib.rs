//! `runmerge` command line: generate inputs, sort them with any policy and
//! merge mode, analyze, verify and benchmark.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error.

mod analyze;
mod bench;
mod gen;
mod sort;
pub mod textio;
mod verify;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use runmerge::generators::Family;
use runmerge::{Alpha, GallopConfig, Policy, RunDetection};

pub use bench::{bench_rows, BenchRow, BenchSpec};

#[derive(Debug)]
pub enum Failure {
    Verify(String),
    Usage(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub(crate) fn io(path: &Path, e: impl fmt::Display) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }
}

impl From<runmerge::Error> for Failure {
    fn from(e: runmerge::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verify(m) => write!(f, "verification failed: {m}"),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "runmerge", version, about = "Stable natural merge sort laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated array in the text format.
    Gen(gen::GenArgs),
    /// Sort an array and report comparisons, moves and the merge tree.
    Sort(sort::SortArgs),
    /// Presortedness measures and per-policy tree checks for one array.
    Analyze(analyze::AnalyzeArgs),
    /// Run randomized checks; exits with 1 on any violation.
    Verify(verify::VerifyArgs),
    /// Sort a matrix of configurations and write one CSV row per cell.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoName {
    Natural,
    Shivers,
    AdaptiveShivers,
    Timsort,
    AlphaMerge,
    AlphaStack,
    Peeksort,
    Powersort,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MergeMode {
    Naive,
    GallopFixed,
    GallopUpdate,
    GallopLog,
    GallopLogscaled,
}

impl MergeMode {
    pub fn config(self, t: u32, tau: u32) -> GallopConfig {
        match self {
            MergeMode::Naive => GallopConfig::Naive,
            MergeMode::GallopFixed => GallopConfig::FixedT(t),
            MergeMode::GallopUpdate => GallopConfig::TimsortUpdate(t),
            MergeMode::GallopLog => GallopConfig::Logarithmic,
            MergeMode::GallopLogscaled => GallopConfig::LogScaled(tau),
        }
    }
}

pub(crate) fn mode_name(g: &GallopConfig) -> &'static str {
    match g {
        GallopConfig::Naive => "naive",
        GallopConfig::FixedT(_) => "gallop-fixed",
        GallopConfig::TimsortUpdate(_) => "gallop-update",
        GallopConfig::Logarithmic => "gallop-log",
        GallopConfig::LogScaled(_) => "gallop-logscaled",
    }
}

pub(crate) fn mode_param(g: &GallopConfig) -> String {
    match g {
        GallopConfig::FixedT(t) | GallopConfig::TimsortUpdate(t) | GallopConfig::LogScaled(t) => t.to_string(),
        GallopConfig::Naive | GallopConfig::Logarithmic => String::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Detection {
    Greedy,
    Ascending,
}

impl From<Detection> for RunDetection {
    fn from(d: Detection) -> Self {
        match d {
            Detection::Greedy => RunDetection::Greedy,
            Detection::Ascending => RunDetection::Ascending,
        }
    }
}

/// `--algo` and `--alpha`.
#[derive(Args, Debug, Clone)]
pub struct AlgoArgs {
    /// Merge policy; `all` or a comma-separated list where accepted.
    /// Defaults to all policies, or powersort where only one is accepted.
    #[arg(long, value_enum, value_delimiter = ',')]
    algo: Vec<AlgoName>,
    /// α for alpha-merge and alpha-stack, e.g. 1.62 or 5/4.
    #[arg(long)]
    alpha: Option<String>,
}

impl AlgoArgs {
    pub fn policies(&self) -> Result<Vec<Policy>, Failure> {
        let alpha = match &self.alpha {
            Some(s) => Some(s.parse::<Alpha>().map_err(|e| Failure::Usage(format!("--alpha: {e}")))?),
            None => None,
        };
        let names: &[AlgoName] = if self.algo.is_empty() { &[AlgoName::All] } else { &self.algo };
        let mut out = Vec::new();
        for name in names {
            let ps: Vec<Policy> = match name {
                AlgoName::All => Policy::all().to_vec(),
                other => {
                    let s = other.to_possible_value().expect("no skipped variants");
                    vec![s.get_name().parse::<Policy>().map_err(Failure::Usage)?]
                }
            };
            for p in ps {
                let p = alpha.map_or(p, |a| p.with_alpha(a));
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    pub fn single(&self) -> Result<Policy, Failure> {
        if self.algo.is_empty() {
            return Ok(Policy::PowerSort);
        }
        match self.policies()?.as_slice() {
            [p] => Ok(*p),
            _ => Err(Failure::Usage("--algo must name exactly one policy here".into())),
        }
    }
}

pub(crate) fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

pub(crate) fn out_path(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}

pub(crate) fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn help_for(argv: &[OsString]) -> String {
    let mut cmd = Cli::command();
    let sub = argv.get(1).and_then(|s| s.to_str()).map(str::to_string);
    if let Some(name) = sub {
        if let Some(c) = cmd.find_subcommand_mut(&name) {
            return c.render_help().to_string();
        }
    }
    cmd.render_help().to_string()
}

/// Runs one command line and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code != 0 {
                eprintln!("\n{}", help_for(&argv));
                return 2;
            }
            return 0;
        }
    };
    let res = match &cli.command {
        Command::Gen(a) => gen::run(a),
        Command::Sort(a) => sort::run(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Bench(a) => bench::run(a),
    };
    match res {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("runmerge: {f}");
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(dispatch(["runmerge", "sort", "--bogus"]), 2);
        assert_eq!(dispatch(["runmerge"]), 2);
        assert_eq!(dispatch(["runmerge", "sort", "--algo", "quick", "--in", "x"]), 2);
        assert_eq!(dispatch(["runmerge", "--help"]), 0);
    }

    #[test]
    fn policy_lists() {
        let a = AlgoArgs { algo: vec![AlgoName::All], alpha: Some("1.5".into()) };
        let ps = a.policies().unwrap();
        assert_eq!(ps.len(), 8);
        assert_eq!(ps[4].to_string(), "alpha-merge(1.5)");
        let a = AlgoArgs { algo: vec![AlgoName::Timsort, AlgoName::Timsort], alpha: None };
        assert_eq!(a.single().unwrap(), Policy::TimSort);
        let a = AlgoArgs { algo: vec![AlgoName::Timsort], alpha: Some("0.5".into()) };
        assert_eq!(a.policies().unwrap_err().code(), 2);
    }
}
