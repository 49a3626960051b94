//! Inputs shared by the benchmarks.

use runmerge::generators::Family;
use runmerge::{GallopConfig, Item, RunDetection};

/// A named benchmark input.
pub struct Input {
    pub name: String,
    pub items: Vec<Item>,
    pub detection: RunDetection,
}

pub fn input(family: &Family, n: usize, seed: u64) -> Input {
    let case = family.generate(n, seed).expect("benchmark families are valid");
    Input { name: family.to_string(), items: case.items, detection: case.detection }
}

/// The families every benchmark group runs on.
pub fn standard_inputs(n: usize) -> Vec<Input> {
    [Family::RandomPerm, Family::FewRuns(16), Family::FewValues(2), Family::FewValues(64)]
        .iter()
        .map(|f| input(f, n, 1))
        .collect()
}

pub fn modes() -> [GallopConfig; 5] {
    [
        GallopConfig::Naive,
        GallopConfig::FixedT(7),
        GallopConfig::TimsortUpdate(7),
        GallopConfig::Logarithmic,
        GallopConfig::LogScaled(2),
    ]
}

pub fn mode_label(g: &GallopConfig) -> String {
    match g {
        GallopConfig::Naive => "naive".into(),
        GallopConfig::FixedT(t) => format!("fixed-{t}"),
        GallopConfig::TimsortUpdate(t) => format!("update-{t}"),
        GallopConfig::Logarithmic => "log".into(),
        GallopConfig::LogScaled(tau) => format!("logscaled-{tau}"),
    }
}
