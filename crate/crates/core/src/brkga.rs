//! Biased random-key genetic algorithm for target set selection.
//!
//! An individual is a vector of keys in `[0, 1]`, one per vertex. It is
//! decoded by the key-weighted greedy construction and, optionally, reduced
//! with the ascending-degree pass. Its fitness is the size of the resulting
//! target set. Reduction only affects the decoded set; keys are left as they
//! are.
//!
//! Each generation keeps the best `ceil(p_e * n)` individuals, adds
//! `ceil(p_m * n)` fresh uniform ones and fills the rest with biased uniform
//! crossover between a random member of the previous population and a random
//! elite. The triple `(p_e, p_m, p_bias)` is either fixed for the whole run or
//! redrawn from capped power-laws at the start of every generation.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffusion::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Thresholds};
use crate::greedy::Greedy;
use crate::powerlaw::{ParameterSampler, DEFAULT_BETA};

/// Population size used when none is given.
pub const DEFAULT_POPULATION: usize = 46;

/// Elite fraction, mutant fraction and crossover bias of one generation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub elite: f64,
    pub mutant: f64,
    pub bias: f64,
}

impl Params {
    /// Defaults for static runs: the endpoints of the power-law ranges that
    /// carry the most mass. Not the values of any published tuning.
    pub const STATIC_DEFAULT: Params = Params {
        elite: 0.24,
        mutant: 0.11,
        bias: 0.51,
    };

    pub fn new(elite: f64, mutant: f64, bias: f64) -> Result<Self> {
        let params = Params {
            elite,
            mutant,
            bias,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("elite fraction", self.elite),
            ("mutant fraction", self.mutant),
            ("crossover bias", self.bias),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::invalid(format!("{name} {value} is outside [0, 1]")));
            }
        }
        if self.elite <= 0.0 {
            return Err(Error::invalid("elite fraction must be positive"));
        }
        if self.elite + self.mutant > 1.0 + 1e-12 {
            return Err(Error::invalid(format!(
                "elite fraction {} plus mutant fraction {} exceeds 1",
                self.elite, self.mutant
            )));
        }
        Ok(())
    }

    /// `ceil(p_e * n)`, at least one.
    pub fn elite_count(&self, population: usize) -> usize {
        fraction_of(self.elite, population).clamp(1, population)
    }

    /// `ceil(p_m * n)`, capped so that elites and mutants fit in the
    /// population.
    pub fn mutant_count(&self, population: usize) -> usize {
        let elites = self.elite_count(population);
        fraction_of(self.mutant, population).min(population - elites)
    }
}

/// `ceil(p * n)` without rounding `0.11 * 100 = 11.000000000000002` up to 12.
fn fraction_of(p: f64, n: usize) -> usize {
    let exact = p * n as f64;
    let nearest = exact.round();
    if (exact - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        exact.ceil() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParameterMode {
    /// The same triple every generation.
    Static(Params),
    /// A fresh power-law triple every generation.
    PowerLaw { beta: f64 },
}

impl Default for ParameterMode {
    fn default() -> Self {
        ParameterMode::Static(Params::STATIC_DEFAULT)
    }
}

/// Stopping rule. At least one limit must be set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub time_limit: Option<Duration>,
    pub max_iterations: Option<u64>,
}

impl Budget {
    pub fn seconds(secs: f64) -> Self {
        Budget {
            time_limit: Some(Duration::from_secs_f64(secs)),
            max_iterations: None,
        }
    }

    pub fn iterations(n: u64) -> Self {
        Budget {
            time_limit: None,
            max_iterations: Some(n),
        }
    }

    /// `max(100, |V| / 100)` seconds.
    pub fn default_for(g: &Graph) -> Self {
        Self::seconds(default_budget_secs(g.vertex_count()))
    }

    fn validate(&self) -> Result<()> {
        match (self.time_limit, self.max_iterations) {
            (None, None) => Err(Error::invalid(
                "budget needs a time limit or an iteration cap",
            )),
            (Some(t), _) if t.is_zero() => Err(Error::invalid("time budget must be positive")),
            _ => Ok(()),
        }
    }
}

/// `max(100, |V| / 100)`.
pub fn default_budget_secs(vertex_count: usize) -> f64 {
    (vertex_count as f64 / 100.0).max(100.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrkgaConfig {
    pub population_size: usize,
    pub mode: ParameterMode,
    /// Put the all-0.5 individual into the initial population.
    pub seed_half_individual: bool,
    /// Reduce decoded sets with the ascending-degree pass.
    pub reverse_mdg: bool,
    pub seed: u64,
    pub budget: Budget,
    /// Stop as soon as a set of at most this size is found.
    pub target_fitness: Option<usize>,
}

impl Default for BrkgaConfig {
    fn default() -> Self {
        BrkgaConfig {
            population_size: DEFAULT_POPULATION,
            mode: ParameterMode::default(),
            seed_half_individual: true,
            reverse_mdg: false,
            seed: 0,
            budget: Budget::seconds(100.0),
            target_fitness: None,
        }
    }
}

impl BrkgaConfig {
    pub fn fast(beta: f64) -> Self {
        BrkgaConfig {
            mode: ParameterMode::PowerLaw { beta },
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::invalid("population size must be at least 2"));
        }
        match self.mode {
            ParameterMode::Static(p) => p.validate()?,
            ParameterMode::PowerLaw { beta } => {
                ParameterSampler::new(beta)?;
            }
        }
        self.budget.validate()
    }
}

/// A key vector together with its decoded target set.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub keys: Vec<f64>,
    pub fitness: usize,
    pub solution: VertexSet,
}

/// Source of per-generation parameters.
pub trait ParameterSchedule {
    fn next_params(&mut self) -> Params;
}

/// Always returns the same triple.
#[derive(Clone, Copy, Debug)]
pub struct FixedSchedule(pub Params);

impl ParameterSchedule for FixedSchedule {
    fn next_params(&mut self) -> Params {
        self.0
    }
}

/// Draws every triple from a [`ParameterSampler`] with its own random stream,
/// independent of the one driving the population.
#[derive(Clone, Debug)]
pub struct PowerLawSchedule {
    sampler: ParameterSampler,
    rng: ChaCha8Rng,
}

impl PowerLawSchedule {
    pub fn new(beta: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        Ok(PowerLawSchedule {
            sampler: ParameterSampler::new(beta)?,
            rng,
        })
    }
}

impl ParameterSchedule for PowerLawSchedule {
    fn next_params(&mut self) -> Params {
        self.sampler.sample(&mut self.rng)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub elapsed: f64,
    pub iteration: u64,
    pub fitness: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub best: VertexSet,
    pub best_fitness: usize,
    /// Best-so-far fitness at the start, at every improvement and at the end.
    pub trace: Vec<TracePoint>,
    pub iterations: u64,
    pub wall_time: f64,
}

/// What an observer sees after initialization and after each generation.
pub struct Generation<'a> {
    pub iteration: u64,
    pub params: Option<Params>,
    pub population: &'a [Individual],
    pub best_fitness: usize,
}

/// Indices of the `ceil(p_e * n)` fittest individuals; equal fitness keeps
/// population order.
pub fn select_elites(population: &[Individual], elite: f64) -> Vec<usize> {
    let count = fraction_of(elite, population.len()).clamp(1, population.len().max(1));
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by_key(|&i| population[i].fitness);
    order.truncate(count);
    order
}

/// Biased uniform crossover: each key comes from `elite` with probability
/// `bias`, otherwise from `other`.
pub fn crossover<R: Rng + ?Sized>(
    other: &[f64],
    elite: &[f64],
    bias: f64,
    rng: &mut R,
) -> Vec<f64> {
    other
        .iter()
        .zip(elite)
        .map(|(&x, &y)| if rng.random::<f64>() < bias { y } else { x })
        .collect()
}

/// One BRKGA run over a fixed instance.
pub struct Brkga<'g> {
    config: BrkgaConfig,
    greedy: Greedy<'g>,
    rng: ChaCha8Rng,
}

impl<'g> Brkga<'g> {
    pub fn new(graph: &'g Graph, thresholds: &'g Thresholds, config: BrkgaConfig) -> Result<Self> {
        config.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(Brkga {
            greedy: Greedy::new(graph, thresholds),
            config,
            rng,
        })
    }

    pub fn config(&self) -> &BrkgaConfig {
        &self.config
    }

    fn vertex_count(&self) -> usize {
        self.greedy.graph().vertex_count()
    }

    /// Decodes `keys` (and reduces, if configured).
    pub fn evaluate(&mut self, keys: Vec<f64>) -> Result<Individual> {
        let mut solution = self.greedy.decode(&keys)?;
        if self.config.reverse_mdg {
            solution = self.greedy.reverse_mdg(&solution)?;
        }
        Ok(Individual {
            keys,
            fitness: solution.len(),
            solution,
        })
    }

    fn random_keys(&mut self) -> Vec<f64> {
        let n = self.vertex_count();
        (0..n).map(|_| self.rng.random::<f64>()).collect()
    }

    fn random_individual(&mut self) -> Individual {
        let keys = self.random_keys();
        self.evaluate(keys).expect("uniform keys are in range")
    }

    pub fn init_population(&mut self) -> Vec<Individual> {
        let size = self.config.population_size;
        let random = if self.config.seed_half_individual {
            size - 1
        } else {
            size
        };
        let mut population: Vec<Individual> =
            (0..random).map(|_| self.random_individual()).collect();
        if self.config.seed_half_individual {
            let half = vec![0.5; self.vertex_count()];
            population.push(self.evaluate(half).expect("0.5 is in range"));
        }
        population
    }

    /// Elites, then fresh mutants, then crossover children.
    pub fn evolve_step(&mut self, population: &[Individual], params: Params) -> Vec<Individual> {
        let size = population.len();
        let elites = select_elites(population, params.elite);
        let mutants = params.mutant_count(size).min(size - elites.len());

        let mut next: Vec<Individual> = Vec::with_capacity(size);
        next.extend(elites.iter().map(|&i| population[i].clone()));
        for _ in 0..mutants {
            let mutant = self.random_individual();
            next.push(mutant);
        }
        while next.len() < size {
            let x = self.rng.random_range(0..size);
            let y = elites[self.rng.random_range(0..elites.len())];
            let keys = crossover(
                &population[x].keys,
                &population[y].keys,
                params.bias,
                &mut self.rng,
            );
            let child = self.evaluate(keys).expect("crossover keeps keys in range");
            next.push(child);
        }
        next
    }

    /// Runs with the schedule implied by the configured parameter mode.
    pub fn run(self) -> Result<RunResult> {
        self.run_observed(|_| {})
    }

    pub fn run_observed(self, observer: impl FnMut(&Generation<'_>)) -> Result<RunResult> {
        match self.config.mode {
            ParameterMode::Static(p) => self.run_with(FixedSchedule(p), observer),
            ParameterMode::PowerLaw { beta } => {
                let schedule = PowerLawSchedule::new(beta, self.config.seed)?;
                self.run_with(schedule, observer)
            }
        }
    }

    pub fn run_with<S: ParameterSchedule>(
        mut self,
        mut schedule: S,
        mut observer: impl FnMut(&Generation<'_>),
    ) -> Result<RunResult> {
        let start = Instant::now();
        let mut population = self.init_population();
        let best_index = best_of(&population);
        let mut best = population[best_index].solution.clone();
        let mut best_fitness = population[best_index].fitness;
        let mut trace = vec![TracePoint {
            elapsed: start.elapsed().as_secs_f64(),
            iteration: 0,
            fitness: best_fitness,
        }];
        observer(&Generation {
            iteration: 0,
            params: None,
            population: &population,
            best_fitness,
        });

        let budget = self.config.budget;
        let mut iterations = 0u64;
        loop {
            if self
                .config
                .target_fitness
                .is_some_and(|t| best_fitness <= t)
            {
                break;
            }
            if budget.max_iterations.is_some_and(|cap| iterations >= cap) {
                break;
            }
            if budget
                .time_limit
                .is_some_and(|limit| start.elapsed() >= limit)
            {
                break;
            }
            let params = schedule.next_params();
            population = self.evolve_step(&population, params);
            iterations += 1;

            let i = best_of(&population);
            if population[i].fitness < best_fitness {
                best_fitness = population[i].fitness;
                best = population[i].solution.clone();
                trace.push(TracePoint {
                    elapsed: start.elapsed().as_secs_f64(),
                    iteration: iterations,
                    fitness: best_fitness,
                });
            }
            observer(&Generation {
                iteration: iterations,
                params: Some(params),
                population: &population,
                best_fitness,
            });
        }

        let wall_time = start.elapsed().as_secs_f64();
        if trace.last().is_some_and(|p| p.iteration != iterations) {
            trace.push(TracePoint {
                elapsed: wall_time,
                iteration: iterations,
                fitness: best_fitness,
            });
        }
        Ok(RunResult {
            best,
            best_fitness,
            trace,
            iterations,
            wall_time,
        })
    }
}

fn best_of(population: &[Individual]) -> usize {
    population
        .iter()
        .enumerate()
        .min_by_key(|(_, ind)| ind.fitness)
        .map(|(i, _)| i)
        .expect("population is never empty")
}

/// Convenience wrapper: builds and runs in one call.
pub fn run(graph: &Graph, thresholds: &Thresholds, config: BrkgaConfig) -> Result<RunResult> {
    Brkga::new(graph, thresholds, config)?.run()
}

impl ParameterMode {
    pub fn power_law() -> Self {
        ParameterMode::PowerLaw { beta: DEFAULT_BETA }
    }
}
