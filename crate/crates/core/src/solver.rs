//! Named algorithm variants behind one entry point.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::brkga::{
    Brkga, BrkgaConfig, Budget, Generation, ParameterMode, Params, RunResult, TracePoint,
    DEFAULT_POPULATION,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, Thresholds};
use crate::greedy::Greedy;
use crate::powerlaw::DEFAULT_BETA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Mdg,
    MdgRev,
    Brkga,
    BrkgaRev,
    Fast,
    FastRev,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Mdg,
        Algorithm::MdgRev,
        Algorithm::Brkga,
        Algorithm::BrkgaRev,
        Algorithm::Fast,
        Algorithm::FastRev,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Mdg => "mdg",
            Algorithm::MdgRev => "mdg-rev",
            Algorithm::Brkga => "brkga",
            Algorithm::BrkgaRev => "brkga-rev",
            Algorithm::Fast => "fast",
            Algorithm::FastRev => "fast-rev",
        }
    }

    /// Greedy variants ignore the seed and the budget.
    pub fn is_deterministic(self) -> bool {
        matches!(self, Algorithm::Mdg | Algorithm::MdgRev)
    }

    pub fn uses_reverse_mdg(self) -> bool {
        matches!(
            self,
            Algorithm::MdgRev | Algorithm::BrkgaRev | Algorithm::FastRev
        )
    }

    pub fn uses_power_law(self) -> bool {
        matches!(self, Algorithm::Fast | Algorithm::FastRev)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Algorithm::ALL.iter().map(|a| a.id()).collect();
                Error::invalid(format!(
                    "unknown algorithm `{s}` (expected one of {})",
                    known.join(", ")
                ))
            })
    }
}

/// Run settings. The greedy variants ignore all of them.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub budget: Budget,
    pub target_fitness: Option<usize>,
    /// Static parameters for `brkga` / `brkga-rev`.
    pub params: Params,
    /// Power-law exponent for `fast` / `fast-rev`.
    pub beta: f64,
    pub population_size: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            budget: Budget::seconds(100.0),
            target_fitness: None,
            params: Params::STATIC_DEFAULT,
            beta: DEFAULT_BETA,
            population_size: DEFAULT_POPULATION,
        }
    }
}

impl SolveOptions {
    pub fn brkga_config(&self, algorithm: Algorithm) -> BrkgaConfig {
        BrkgaConfig {
            population_size: self.population_size,
            mode: if algorithm.uses_power_law() {
                ParameterMode::PowerLaw { beta: self.beta }
            } else {
                ParameterMode::Static(self.params)
            },
            seed_half_individual: true,
            reverse_mdg: algorithm.uses_reverse_mdg(),
            seed: self.seed,
            budget: self.budget,
            target_fitness: self.target_fitness,
        }
    }
}

pub fn solve(
    graph: &Graph,
    thresholds: &Thresholds,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> Result<RunResult> {
    solve_observed(graph, thresholds, algorithm, options, |_| {})
}

/// Like [`solve`], calling `observer` after every BRKGA generation.
pub fn solve_observed(
    graph: &Graph,
    thresholds: &Thresholds,
    algorithm: Algorithm,
    options: &SolveOptions,
    observer: impl FnMut(&Generation<'_>),
) -> Result<RunResult> {
    if algorithm.is_deterministic() {
        let start = Instant::now();
        let mut greedy = Greedy::new(graph, thresholds);
        let mut best = greedy.mdg();
        if algorithm.uses_reverse_mdg() {
            best = greedy.reverse_mdg(&best)?;
        }
        let wall_time = start.elapsed().as_secs_f64();
        return Ok(RunResult {
            trace: vec![TracePoint {
                elapsed: wall_time,
                iteration: 0,
                fitness: best.len(),
            }],
            best_fitness: best.len(),
            best,
            iterations: 0,
            wall_time,
        });
    }
    Brkga::new(graph, thresholds, options.brkga_config(algorithm))?.run_observed(observer)
}
