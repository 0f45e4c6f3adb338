//! Experiment harness: a grid of instances × algorithms × seeded runs,
//! summary tables, a significance test and an exhaustive oracle.
//!
//! Plans are TOML documents:
//!
//! ```toml
//! runs = 10                 # runs per (instance, algorithm) cell
//! seed = 1                  # base seed, per-run seeds are derived from it
//! algorithms = ["mdg-rev", "brkga-rev", "fast-rev"]
//! budget = 100.0            # seconds per run; default max(100, |V|/100)
//! max_iterations = 5000     # optional generation cap
//! params = [0.24, 0.11, 0.51]   # static p_e, p_m, p_bias for brkga variants
//! beta = 1.5                # power-law exponent for fast variants
//! population = 46
//! workers = 4
//!
//! [[instances]]
//! id = "karate"
//! path = "data/karate.txt"  # relative to the plan file
//! thresholds = "majority"   # or a path to an `id threshold` file
//! target_fitness = 3        # optional early stop
//! ```

pub mod oracle;
pub mod record;
pub mod stats;
pub mod summary;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::brkga::{default_budget_secs, Budget, Generation, Params, DEFAULT_POPULATION};
use crate::error::{Error, Result};
use crate::graph::{Graph, Thresholds};
use crate::powerlaw::DEFAULT_BETA;
use crate::solver::{solve_observed, Algorithm, SolveOptions};

pub use oracle::exact_min_target_set;
pub use record::RunRecord;
pub use stats::{mann_whitney_u, MannWhitney};
pub use summary::{summarize, SummaryRow};

/// How thresholds are assigned to an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum ThresholdRule {
    #[default]
    Majority,
    File(PathBuf),
}

impl From<String> for ThresholdRule {
    fn from(s: String) -> Self {
        if s == "majority" {
            ThresholdRule::Majority
        } else {
            ThresholdRule::File(s.into())
        }
    }
}

impl From<ThresholdRule> for String {
    fn from(rule: ThresholdRule) -> Self {
        match rule {
            ThresholdRule::Majority => "majority".into(),
            ThresholdRule::File(p) => p.display().to_string(),
        }
    }
}

impl ThresholdRule {
    pub fn apply(&self, graph: &Graph) -> Result<Thresholds> {
        match self {
            ThresholdRule::Majority => Ok(Thresholds::majority(graph)),
            ThresholdRule::File(path) => Thresholds::load(graph, path),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub id: String,
    pub path: PathBuf,
    #[serde(default)]
    pub thresholds: ThresholdRule,
    #[serde(default)]
    pub target_fitness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub instances: Vec<InstanceSpec>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    /// Seconds per run. `None` applies `max(100, |V|/100)`.
    #[serde(default)]
    pub budget: Option<f64>,
    #[serde(default)]
    pub max_iterations: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: Option<[f64; 3]>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_population")]
    pub population: usize,
    #[serde(default)]
    pub workers: Option<usize>,
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn default_runs() -> u32 {
    10
}

fn default_beta() -> f64 {
    DEFAULT_BETA
}

fn default_population() -> usize {
    DEFAULT_POPULATION
}

impl ExperimentPlan {
    pub fn new(instances: Vec<InstanceSpec>, algorithms: Vec<Algorithm>) -> Self {
        ExperimentPlan {
            instances,
            algorithms,
            runs: default_runs(),
            budget: None,
            max_iterations: None,
            seed: 0,
            params: None,
            beta: DEFAULT_BETA,
            population: DEFAULT_POPULATION,
            workers: None,
        }
    }

    /// Parses a plan; relative instance and threshold paths are resolved
    /// against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut plan: ExperimentPlan = toml::from_str(text)?;
        for inst in &mut plan.instances {
            if inst.path.is_relative() {
                inst.path = base_dir.join(&inst.path);
            }
            if let ThresholdRule::File(p) = &mut inst.thresholds {
                if p.is_relative() {
                    *p = base_dir.join(&*p);
                }
            }
        }
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::invalid("runs must be at least 1"));
        }
        if self.instances.is_empty() {
            return Err(Error::invalid("plan lists no instances"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("plan lists no algorithms"));
        }
        if let Some(b) = self.budget {
            if b.is_nan() || b <= 0.0 {
                return Err(Error::invalid("budget must be positive"));
            }
        }
        self.static_params()?;
        Ok(())
    }

    pub fn static_params(&self) -> Result<Params> {
        match self.params {
            Some([e, m, b]) => Params::new(e, m, b),
            None => Ok(Params::STATIC_DEFAULT),
        }
    }

    /// Run options for one cell of the grid.
    pub fn options_for(
        &self,
        graph: &Graph,
        instance: &InstanceSpec,
        algorithm: Algorithm,
        run: u32,
    ) -> Result<SolveOptions> {
        let secs = self
            .budget
            .unwrap_or_else(|| default_budget_secs(graph.vertex_count()));
        Ok(SolveOptions {
            seed: cell_seed(self.seed, &instance.id, algorithm, run),
            budget: Budget {
                max_iterations: self.max_iterations,
                ..Budget::seconds(secs)
            },
            target_fitness: instance.target_fitness,
            params: self.static_params()?,
            beta: self.beta,
            population_size: self.population,
        })
    }
}

/// Seed of run `run` of `algorithm` on `instance`: the first eight bytes of
/// SHA-256 over the base seed, both ids and the run index.
pub fn cell_seed(base: u64, instance: &str, algorithm: Algorithm, run: u32) -> u64 {
    let digest = Sha256::new()
        .chain_update(base.to_le_bytes())
        .chain_update(instance.as_bytes())
        .chain_update([0u8])
        .chain_update(algorithm.id().as_bytes())
        .chain_update([0u8])
        .chain_update(run.to_le_bytes())
        .finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(head)
}

/// A loaded instance, shared read-only by all runs on it.
#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub spec: InstanceSpec,
    pub graph: Graph,
    pub thresholds: Thresholds,
}

impl LoadedInstance {
    pub fn load(spec: &InstanceSpec) -> Result<Self> {
        let wrap = |e: Error| Error::Instance {
            instance: spec.id.clone(),
            source: Box::new(e),
        };
        let (graph, _) = Graph::load(&spec.path).map_err(wrap)?;
        let thresholds = spec.thresholds.apply(&graph).map_err(wrap)?;
        Ok(LoadedInstance {
            spec: spec.clone(),
            graph,
            thresholds,
        })
    }
}

/// Runs one cell and turns the result into a record.
pub fn execute_cell(
    plan: &ExperimentPlan,
    instance: &LoadedInstance,
    algorithm: Algorithm,
    run: u32,
    observer: impl FnMut(&Generation<'_>),
) -> Result<RunRecord> {
    let options = plan.options_for(&instance.graph, &instance.spec, algorithm, run)?;
    let result = solve_observed(
        &instance.graph,
        &instance.thresholds,
        algorithm,
        &options,
        observer,
    )?;
    Ok(RunRecord::from_result(
        &instance.spec.id,
        algorithm,
        run,
        options.seed,
        &instance.graph,
        &result,
    ))
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    /// Ordered by instance, then algorithm (both in plan order), then run.
    pub records: Vec<RunRecord>,
    /// Instances or cells that could not be run.
    pub failures: Vec<Error>,
}

impl ExperimentOutcome {
    pub fn summary(&self) -> Vec<SummaryRow> {
        summarize(&self.records)
    }
}

/// Number of worker threads: the plan's setting, else `TSS_WORKERS`, else 1.
pub fn worker_count(plan: &ExperimentPlan) -> usize {
    plan.workers
        .or_else(|| std::env::var("TSS_WORKERS").ok()?.parse().ok())
        .unwrap_or(1)
        .max(1)
}

/// Executes every cell of the plan. Greedy algorithms run once per instance
/// and their record is replicated for each run index.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    plan.validate()?;
    let mut failures = Vec::new();
    let mut loaded = Vec::new();
    for spec in &plan.instances {
        match LoadedInstance::load(spec) {
            Ok(inst) => loaded.push(inst),
            Err(e) => failures.push(e),
        }
    }

    let mut cells = Vec::new();
    for (i, _) in loaded.iter().enumerate() {
        for (a, &algorithm) in plan.algorithms.iter().enumerate() {
            let runs = if algorithm.is_deterministic() {
                1
            } else {
                plan.runs
            };
            for run in 0..runs {
                cells.push((i, a, algorithm, run));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(plan))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, a, algorithm, run)| {
                let outcome = execute_cell(plan, &loaded[i], algorithm, run, |_| {});
                (i, a, outcome)
            })
            .collect()
    });

    let mut keyed = Vec::new();
    for (i, a, outcome) in results {
        match outcome {
            Ok(record) if record.algorithm.is_deterministic() => {
                for run in 0..plan.runs {
                    let mut copy = record.clone();
                    copy.run = run;
                    copy.seed = cell_seed(plan.seed, &record.instance, record.algorithm, run);
                    keyed.push(((i, a, run), copy));
                }
            }
            Ok(record) => keyed.push(((i, a, record.run), record)),
            Err(e) => failures.push(Error::Instance {
                instance: loaded[i].spec.id.clone(),
                source: Box::new(e),
            }),
        }
    }
    keyed.sort_by_key(|(key, _)| *key);
    Ok(ExperimentOutcome {
        records: keyed.into_iter().map(|(_, r)| r).collect(),
        failures,
    })
}
