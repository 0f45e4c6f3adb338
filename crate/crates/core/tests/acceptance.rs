//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Benchmark networks are read from `data/<name>.txt` at the workspace root,
//! or from the directory in `TSS_DATA_DIR`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tss_core::bench::{exact_min_target_set, mann_whitney_u};
use tss_core::brkga::Budget;
use tss_core::powerlaw::{ParameterSampler, PowerLaw};
use tss_core::solver::solve_observed;
use tss_core::{
    spread, Algorithm, DiffusionState, Graph, Greedy, SolveOptions, Thresholds, VertexSet,
};

const STOCHASTIC: [Algorithm; 4] = [
    Algorithm::Brkga,
    Algorithm::BrkgaRev,
    Algorithm::Fast,
    Algorithm::FastRev,
];

/// Upper 0.001 quantiles of the chi-square distribution.
const CHI2_CRIT_999: [(usize, f64); 3] = [
    (14, 36.12327368039813),
    (19, 43.82019596451753),
    (29, 58.301173489794905),
];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(failures: &[String], ok: impl Into<String>) -> Self {
        if failures.is_empty() {
            Verdict {
                pass: true,
                detail: ok.into(),
            }
        } else {
            let shown: Vec<&str> = failures.iter().take(6).map(String::as_str).collect();
            let more = failures.len().saturating_sub(shown.len());
            let ok = ok.into();
            let mut detail = if ok.is_empty() {
                String::new()
            } else {
                format!("{ok}; ")
            };
            detail.push_str("failed: ");
            detail.push_str(&shown.join("; "));
            if more > 0 {
                detail.push_str(&format!("; and {more} more"));
            }
            Verdict {
                pass: false,
                detail,
            }
        }
    }
}

/// Per-run observations shared with the elitism/trace criterion.
#[derive(Default)]
struct RunLog {
    runs: usize,
    violations: Vec<String>,
}

impl RunLog {
    fn run(
        &mut self,
        label: &str,
        g: &Graph,
        th: &Thresholds,
        algorithm: Algorithm,
        options: &SolveOptions,
    ) -> tss_core::RunResult {
        let expected = options.population_size;
        let mut bad_sizes = Vec::new();
        let result = solve_observed(g, th, algorithm, options, |gen| {
            if gen.population.len() != expected {
                bad_sizes.push((gen.iteration, gen.population.len()));
            }
        })
        .expect("solver run");
        self.runs += 1;
        if let Some((it, size)) = bad_sizes.first() {
            self.violations
                .push(format!("{label}: population {size} at iteration {it}"));
        }
        if !result
            .trace
            .windows(2)
            .all(|w| w[1].fitness <= w[0].fitness)
        {
            self.violations.push(format!("{label}: trace increases"));
        }
        if result.trace.last().map(|p| p.fitness) != Some(result.best_fitness) {
            self.violations
                .push(format!("{label}: trace does not end at best"));
        }
        result
    }
}

/// Independent fixed-point spread on bitmasks for graphs with at most 64
/// vertices.
fn naive_spread(g: &Graph, th: &Thresholds, seeds: u64) -> u64 {
    let mut active = seeds;
    loop {
        let mut next = active;
        for v in g.vertices() {
            let count = g
                .neighbors(v)
                .iter()
                .filter(|&&u| active >> u & 1 == 1)
                .count();
            if count >= th.get(v) as usize {
                next |= 1 << v;
            }
        }
        if next == active {
            return active;
        }
        active = next;
    }
}

fn mask_of(set: &VertexSet) -> u64 {
    set.iter().fold(0, |m, v| m | 1 << v)
}

fn set_of(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1))
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn random_thresholds(rng: &mut ChaCha8Rng, g: &Graph) -> Thresholds {
    let theta = g
        .vertices()
        .map(|v| rng.random_range(0..=g.degree(v) as u32))
        .collect();
    Thresholds::new(g, theta).unwrap()
}

fn data_dir() -> PathBuf {
    std::env::var_os("TSS_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")))
}

fn load_instance(name: &str) -> Result<(Graph, Thresholds), String> {
    let path = data_dir().join(format!("{name}.txt"));
    let (g, _) = Graph::load(&path).map_err(|e| match e {
        tss_core::Error::Io { source, .. } => {
            format!("{name}: cannot read {} ({source})", path.display())
        }
        other => format!("{name}: {other}"),
    })?;
    let th = Thresholds::majority(&g);
    Ok((g, th))
}

struct Golden {
    name: &'static str,
    algorithms: &'static [Algorithm],
    target: usize,
    max_best: usize,
    max_avg: f64,
}

fn criterion_1(log: &mut RunLog) -> Verdict {
    let goldens = [
        Golden {
            name: "karate",
            algorithms: &Algorithm::ALL,
            target: 3,
            max_best: 3,
            max_avg: 3.0,
        },
        Golden {
            name: "dolphins",
            algorithms: &STOCHASTIC,
            target: 6,
            max_best: 6,
            max_avg: f64::INFINITY,
        },
        Golden {
            name: "jazz",
            algorithms: &STOCHASTIC,
            target: 20,
            max_best: 20,
            max_avg: 21.5,
        },
        Golden {
            name: "football",
            algorithms: &STOCHASTIC,
            target: 22,
            max_best: 23,
            max_avg: 24.0,
        },
    ];
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for golden in &goldens {
        let (g, th) = match load_instance(golden.name) {
            Ok(x) => x,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        for &algorithm in golden.algorithms {
            let mut fits = Vec::new();
            for run in 0..10u64 {
                let options = SolveOptions {
                    seed: 1000 + run,
                    budget: Budget::seconds(100.0),
                    target_fitness: Some(golden.target),
                    ..SolveOptions::default()
                };
                let label = format!("{}/{algorithm}/{run}", golden.name);
                fits.push(log.run(&label, &g, &th, algorithm, &options).best_fitness);
            }
            let best = *fits.iter().min().unwrap();
            let avg = fits.iter().sum::<usize>() as f64 / fits.len() as f64;
            summary.push(format!("{}/{algorithm} {best}/{avg:.1}", golden.name));
            // for an exact target, best == target must also hold
            let exact_best = golden.max_best == golden.target;
            if best > golden.max_best
                || (exact_best && best != golden.target)
                || avg > golden.max_avg + 1e-9
            {
                failures.push(format!(
                    "{}/{algorithm}: best {best} avg {avg:.1} (want best {} avg <= {})",
                    golden.name, golden.max_best, golden.max_avg
                ));
            }
        }
    }
    Verdict::new(&failures, summary.join(", "))
}

fn criterion_2() -> Verdict {
    let cases = [
        ("karate", 3.0, 0.0),
        ("dolphins", 7.0, 0.1),
        ("football", 28.0, 0.1),
        ("jazz", 24.0, 0.1),
    ];
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (name, expected, tol) in cases {
        let (g, th) = match load_instance(name) {
            Ok(x) => x,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        let start = Instant::now();
        let mut greedy = Greedy::new(&g, &th);
        let m = greedy.mdg();
        let size = greedy.reverse_mdg(&m).unwrap().len() as f64;
        let elapsed = start.elapsed();
        summary.push(format!("{name}={size}"));
        if (size - expected).abs() > expected * tol + 1e-9 {
            failures.push(format!(
                "{name}: {size} outside {expected} ± {:.0}%",
                tol * 100.0
            ));
        }
        if elapsed >= Duration::from_secs(1) {
            failures.push(format!("{name}: took {elapsed:?}"));
        }
    }
    Verdict::new(&failures, summary.join(", "))
}

fn criterion_3(log: &mut RunLog) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut brkga_hits = 0;
    let mut mdg_gap_max = 0;
    const GRAPHS: usize = 30;
    for index in 0..GRAPHS {
        let n = rng.random_range(6..=12);
        let p = rng.random_range(0.2..0.6);
        let g = random_graph(&mut rng, n, p);
        let th = Thresholds::majority(&g);

        let optimum = exact_min_target_set(&g, &th).unwrap();
        let opt = optimum.len();
        // the oracle's answer must be valid and no smaller set may be
        let full = full_mask(n);
        if naive_spread(&g, &th, mask_of(&optimum)) != full {
            failures.push(format!("graph {index}: oracle set invalid"));
        }
        if (0..=full).any(|m| (m.count_ones() as usize) < opt && naive_spread(&g, &th, m) == full) {
            failures.push(format!("graph {index}: oracle not minimum"));
        }

        for algorithm in Algorithm::ALL {
            let options = SolveOptions {
                seed: 7 * index as u64,
                budget: if algorithm == Algorithm::BrkgaRev {
                    Budget::seconds(10.0)
                } else {
                    Budget {
                        max_iterations: Some(200),
                        ..Budget::seconds(10.0)
                    }
                },
                target_fitness: Some(opt),
                ..SolveOptions::default()
            };
            let label = format!("er{index}/{algorithm}");
            let result = log.run(&label, &g, &th, algorithm, &options);
            let size = result.best_fitness;
            if naive_spread(&g, &th, mask_of(&result.best)) != full {
                failures.push(format!("{label}: invalid output"));
            }
            if size < opt {
                failures.push(format!("{label}: {size} below optimum {opt}"));
            }
            match algorithm {
                Algorithm::MdgRev => {
                    mdg_gap_max = mdg_gap_max.max(size.saturating_sub(opt));
                    if size > opt + 2 {
                        failures.push(format!("{label}: {size} > optimum {opt} + 2"));
                    }
                }
                Algorithm::BrkgaRev if size == opt => brkga_hits += 1,
                _ => {}
            }
        }
    }
    if brkga_hits * 10 < GRAPHS * 9 {
        failures.push(format!(
            "brkga-rev reached the optimum on {brkga_hits}/{GRAPHS}"
        ));
    }
    Verdict::new(
        &failures,
        format!("brkga-rev optimal on {brkga_hits}/{GRAPHS}, mdg-rev gap <= {mdg_gap_max}"),
    )
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for index in 0..20 {
        let n = rng.random_range(1..=8);
        let p = rng.random_range(0.1..0.8);
        let g = random_graph(&mut rng, n, p);
        let th = random_thresholds(&mut rng, &g);
        let full = full_mask(n);
        let closure: Vec<u64> = (0..=full)
            .map(|m| mask_of(&spread(&g, &th, &set_of(n, m))))
            .collect();
        let mut state = DiffusionState::new(&g, &th);
        for s in 0..=full {
            let f = closure[s as usize];
            checked += 1;
            if f != naive_spread(&g, &th, s) {
                failures.push(format!(
                    "graph {index} set {s:#b}: differs from fixed point"
                ));
            }
            if s & !f != 0 {
                failures.push(format!("graph {index} set {s:#b}: not extensive"));
            }
            if closure[f as usize] != f {
                failures.push(format!("graph {index} set {s:#b}: not idempotent"));
            }
            for v in 0..n {
                let t = s | 1 << v;
                if f & !closure[t as usize] != 0 {
                    failures.push(format!("graph {index} set {s:#b} + {v}: not monotone"));
                }
            }
            // incremental, in a shuffled order
            let mut order: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            state.reset();
            for v in order {
                state.add_and_spread(v).unwrap();
            }
            if mask_of(state.active()) != f {
                failures.push(format!("graph {index} set {s:#b}: incremental differs"));
            }
        }
    }

    let mut sequences = 0;
    for index in 0..200 {
        let n = 100;
        let p = rng.random_range(0.01..0.1);
        let g = random_graph(&mut rng, n, p);
        let th = if index % 2 == 0 {
            Thresholds::majority(&g)
        } else {
            random_thresholds(&mut rng, &g)
        };
        let mut state = DiffusionState::new(&g, &th);
        let mut batch = VertexSet::empty(n);
        let steps = rng.random_range(1..=n);
        for _ in 0..steps {
            let v = rng.random_range(0..n);
            let before = state.active().clone();
            let gained = state.add_and_spread(v).unwrap();
            batch.insert(v);
            let expected = spread(&g, &th, &batch);
            if state.active() != &expected {
                failures.push(format!("sequence {index}: incremental differs from batch"));
                break;
            }
            if !before.is_subset(state.active()) || state.active_count() != before.len() + gained {
                failures.push(format!("sequence {index}: activation count inconsistent"));
                break;
            }
        }
        sequences += 1;
    }
    Verdict::new(
        &failures,
        format!(
            "{checked} seed sets on 20 small graphs, {sequences} addition sequences on |V|=100"
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut removal_checks = 0usize;
    for case in 0..500 {
        let n = rng.random_range(1..=60);
        let p = rng.random_range(0.02..0.5);
        let g = random_graph(&mut rng, n, p);
        let th = if case % 2 == 0 {
            Thresholds::majority(&g)
        } else {
            random_thresholds(&mut rng, &g)
        };
        let keys: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mut greedy = Greedy::new(&g, &th);
        let full = VertexSet::full(n);
        let valid = |s: &VertexSet| spread(&g, &th, s) == full;

        let m = greedy.mdg();
        let d = greedy.decode(&keys).unwrap();
        if !valid(&m) {
            failures.push(format!("case {case}: mdg invalid"));
        }
        if !valid(&d) {
            failures.push(format!("case {case}: decode invalid"));
        }
        if greedy.decode(&vec![0.5; n]).unwrap() != m {
            failures.push(format!("case {case}: decode(0.5) != mdg"));
        }
        for (what, input) in [("mdg", &m), ("decode", &d)] {
            let r = greedy.reverse_mdg(input).unwrap();
            if !valid(&r) {
                failures.push(format!("case {case}: reverse of {what} invalid"));
            }
            if !r.is_subset(input) {
                failures.push(format!("case {case}: reverse of {what} not a subset"));
            }
            for v in r.iter() {
                let mut smaller = r.clone();
                smaller.remove(v);
                removal_checks += 1;
                if valid(&smaller) {
                    failures.push(format!(
                        "case {case}: reverse of {what} keeps redundant {v}"
                    ));
                }
            }
        }
    }
    Verdict::new(
        &failures,
        format!("500 cases, {removal_checks} removal checks"),
    )
}

fn criterion_6() -> Verdict {
    const DRAWS: usize = 1_000_000;
    let beta = 1.5;
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (i, (df, critical)) in CHI2_CRIT_999.into_iter().enumerate() {
        let r = df + 1;
        let law = PowerLaw::new(beta, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(600 + i as u64);
        let mut counts = vec![0usize; r + 1];
        for _ in 0..DRAWS {
            let k = law.sample(&mut rng);
            if !(1..=r).contains(&k) {
                failures.push(format!("r={r}: drew {k}"));
                break;
            }
            counts[k] += 1;
        }
        let norm: f64 = (1..=r).map(|k| (k as f64).powf(-beta)).sum();
        let stat: f64 = (1..=r)
            .map(|k| {
                let expected = DRAWS as f64 * (k as f64).powf(-beta) / norm;
                (counts[k] as f64 - expected).powi(2) / expected
            })
            .sum();
        summary.push(format!("r={r} chi2={stat:.1}<{critical:.1}"));
        if stat >= critical {
            failures.push(format!("r={r}: chi-square {stat:.2} >= {critical:.2}"));
        }
    }

    let sampler = ParameterSampler::new(beta).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let on_grid = |x: f64, lo: i64, hi: i64| {
        let h = (x * 100.0).round();
        (x * 100.0 - h).abs() < 1e-9 && (lo..=hi).contains(&(h as i64))
    };
    let mut bad = 0usize;
    for _ in 0..DRAWS {
        let p = sampler.sample(&mut rng);
        if !on_grid(p.elite, 10, 24)
            || !on_grid(p.mutant, 11, 30)
            || !on_grid(p.bias, 51, 80)
            || p.elite + p.mutant > 0.54 + 1e-12
        {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("{bad} parameter triples out of range"));
    }
    summary.push(format!("{DRAWS} triples in range"));
    Verdict::new(&failures, summary.join(", "))
}

fn criterion_7() -> Verdict {
    let mut failures = Vec::new();
    let p = mann_whitney_u(&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0])
        .unwrap()
        .p_value;
    if (p - 0.1).abs() > 1e-12 {
        failures.push(format!("separated triples: p = {p}"));
    }
    for sample in [
        vec![4.0, 8.0, 15.0, 16.0],
        vec![23.0; 10],
        (0..20).map(f64::from).collect(),
    ] {
        let p = mann_whitney_u(&sample, &sample).unwrap().p_value;
        if p != 1.0 {
            failures.push(format!("identical samples of {}: p = {p}", sample.len()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let na = rng.random_range(1..=15);
        let nb = rng.random_range(1..=15);
        let levels = rng.random_range(2..=20);
        let a: Vec<f64> = (0..na)
            .map(|_| rng.random_range(0..levels) as f64)
            .collect();
        let b: Vec<f64> = (0..nb)
            .map(|_| rng.random_range(0..levels) as f64)
            .collect();
        let ab = mann_whitney_u(&a, &b).unwrap().p_value;
        let ba = mann_whitney_u(&b, &a).unwrap().p_value;
        worst = worst.max((ab - ba).abs());
    }
    if worst > 1e-12 {
        failures.push(format!("asymmetry {worst:e}"));
    }
    Verdict::new(&failures, format!("max |p(a,b) - p(b,a)| = {worst:e}"))
}

fn criterion_8(log: &RunLog) -> Verdict {
    let mut failures = log.violations.clone();
    if log.runs == 0 {
        failures.push("no runs were recorded".into());
    }
    Verdict::new(&failures, format!("{} runs checked", log.runs))
}

fn main() -> ExitCode {
    let mut log = RunLog::default();
    let mut all_pass = true;
    let mut report = |number: u32, name: &str, run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let verdict = run();
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {number} {status}  {name}  [{:.1}s] {}",
            start.elapsed().as_secs_f64(),
            verdict.detail
        );
        all_pass &= verdict.pass;
    };
    report(1, "small-instance golden values", &mut || {
        criterion_1(&mut log)
    });
    report(2, "deterministic mdg-rev golden values", &mut criterion_2);
    report(3, "oracle equivalence", &mut || criterion_3(&mut log));
    report(4, "diffusion properties", &mut criterion_4);
    report(5, "greedy properties", &mut criterion_5);
    report(6, "power-law statistics", &mut criterion_6);
    report(7, "Mann-Whitney correctness", &mut criterion_7);
    report(8, "elitism and trace invariant", &mut || criterion_8(&log));
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
