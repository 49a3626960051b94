use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use clap::Args;
use runmerge::analysis::bound_report;
use runmerge::generators::Family;
use runmerge::{sort, EntropyReport, GallopConfig, Policy, PolicyConfig};
use serde::Serialize;

use crate::textio::emit;
use crate::{mode_name, mode_param, out_path, parse_family, AlgoArgs, Failure, MergeMode};

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "naive,gallop-fixed")]
    merge: Vec<MergeMode>,
    #[arg(long, default_value_t = 7)]
    t: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    tau: u32,
    /// Repeatable; see `gen --help` for the names.
    #[arg(long, value_parser = parse_family, default_value = "random-perm")]
    family: Vec<Family>,
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    n: Vec<usize>,
    /// A list `0,1,2` or a range `0..3`.
    #[arg(long, value_parser = parse_seeds, default_value = "0")]
    seeds: SeedList,
    /// The constant C of the comparison bounds, in units of n.
    #[arg(long, default_value_t = 0.0)]
    slack: f64,
    /// Worker threads; 0 means one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("bad seed {x:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = match b.strip_prefix('=') {
            Some(b) => (num(a)?, num(b)?.checked_add(1).ok_or("seed range overflows")?),
            None => (num(a)?, num(b)?),
        };
        if lo >= hi {
            return Err(format!("empty seed range {s:?}"));
        }
        return Ok(SeedList((lo..hi).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(SeedList)
}

/// The cells of a benchmark matrix, in row order: policy, then merge mode,
/// family, n and seed.
#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub policies: Vec<Policy>,
    pub modes: Vec<GallopConfig>,
    pub families: Vec<Family>,
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    pub slack: f64,
    pub jobs: usize,
}

struct Cell<'a> {
    policy: Policy,
    mode: GallopConfig,
    family: &'a Family,
    n: usize,
    seed: u64,
}

impl BenchSpec {
    fn cells(&self) -> Vec<Cell<'_>> {
        let mut out = Vec::new();
        for &policy in &self.policies {
            for &mode in &self.modes {
                for family in &self.families {
                    for &n in &self.ns {
                        for &seed in &self.seeds {
                            out.push(Cell { policy, mode, family, n, seed });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub algo: String,
    pub merge_mode: &'static str,
    pub param: String,
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub rho: usize,
    pub sigma: usize,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "Hstar")]
    pub h_star: f64,
    pub comparisons: u64,
    pub moves: u64,
    pub merges: usize,
    pub bound_thm43: f64,
    pub bound_thm45: f64,
    pub internal_length_sum: u64,
}

fn run_cell(cell: &Cell<'_>, slack: f64) -> runmerge::Result<BenchRow> {
    let case = cell.family.generate(cell.n, cell.seed)?;
    let config = PolicyConfig::new(cell.policy, cell.mode).with_detection(case.detection);
    let (_, report) = sort(&case.items, &config)?;
    let entropy = EntropyReport::new(&case.items, case.detection)?;
    let b = bound_report(&report, &entropy, &config, slack)?;
    Ok(BenchRow {
        algo: cell.policy.to_string(),
        merge_mode: mode_name(&cell.mode),
        param: mode_param(&cell.mode),
        family: cell.family.to_string(),
        n: report.n,
        seed: cell.seed,
        rho: entropy.rho,
        sigma: entropy.sigma,
        h: entropy.h,
        h_star: entropy.h_star,
        comparisons: report.comparisons,
        moves: report.moves,
        merges: report.merges,
        bound_thm43: b.thm43.value,
        bound_thm45: b.thm45.value,
        internal_length_sum: b.internal_length_sum,
    })
}

/// Runs every cell; rows come back in cell order whatever the thread count.
pub fn bench_rows(spec: &BenchSpec) -> runmerge::Result<Vec<BenchRow>> {
    let cells = spec.cells();
    let jobs = match spec.jobs {
        0 => thread::available_parallelism().map_or(1, |n| n.get()),
        j => j,
    }
    .min(cells.len().max(1));
    let slots: Mutex<Vec<Option<runmerge::Result<BenchRow>>>> = Mutex::new(vec![None; cells.len()]);
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                let row = run_cell(cell, spec.slack);
                slots.lock().expect("no worker panics")[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panics")
        .into_iter()
        .map(|r| r.expect("every cell ran"))
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Io(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn run(a: &BenchArgs) -> Result<(), Failure> {
    let mut modes: Vec<GallopConfig> = Vec::new();
    for m in &a.merge {
        let g = m.config(a.t, a.tau);
        if !modes.contains(&g) {
            modes.push(g);
        }
    }
    let spec = BenchSpec {
        policies: a.algo.policies()?,
        modes,
        families: a.family.clone(),
        ns: a.n.clone(),
        seeds: a.seeds.0.clone(),
        slack: a.slack,
        jobs: a.jobs,
    };
    let rows = bench_rows(&spec)?;
    log::info!("{} rows", rows.len());
    emit(out_path(&a.out), &to_csv(&rows)?)
}
