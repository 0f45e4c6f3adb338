use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tss_core::bench::record::{load_records, save_records, write_trace};
use tss_core::bench::summary::{to_csv, to_text};
use tss_core::bench::{
    mann_whitney_u, run_experiment, ExperimentPlan, InstanceSpec, ThresholdRule,
};
use tss_core::brkga::{default_budget_secs, Budget, DEFAULT_POPULATION};
use tss_core::powerlaw::DEFAULT_BETA;
use tss_core::{
    solve, Algorithm, DiffusionState, Error, Graph, Params, SolveOptions, Thresholds, VertexSet,
};

/// Target set selection under the deterministic threshold model.
#[derive(Parser)]
#[command(name = "tss", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and report the best target set found.
    Solve(SolveArgs),
    /// Run an experiment grid and write records and summary tables.
    Bench(BenchArgs),
    /// Compare algorithms with a two-sided Mann-Whitney U test.
    Stats(StatsArgs),
    /// Check that a target set activates the whole graph.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Edge list, optionally gzip-compressed.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "fast-rev")]
    algo: Algorithm,
    /// Seconds per run [default: max(100, |V|/100)].
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `majority` or a file of `vertex threshold` lines.
    #[arg(long, default_value = "majority")]
    thresholds: String,
    /// Write the target set here, one original vertex id per line.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the best-so-far trace here as `elapsed_seconds,fitness` CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Static parameters `pe,pm,pbias` for brkga and brkga-rev.
    #[arg(long, value_parser = parse_params)]
    params: Option<Params>,
    /// Stop as soon as a set of at most this size is found.
    #[arg(long)]
    target_fitness: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_POPULATION)]
    population: usize,
    /// Power-law exponent for fast and fast-rev.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML experiment plan.
    #[arg(long, conflicts_with = "graph")]
    plan: Option<PathBuf>,
    /// Instance file for an inline plan; may be repeated.
    #[arg(long, required_unless_present = "plan")]
    graph: Vec<PathBuf>,
    /// Algorithms of an inline plan [default: all].
    #[arg(long, value_delimiter = ',')]
    algos: Vec<Algorithm>,
    #[arg(long)]
    runs: Option<u32>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "TSS_WORKERS")]
    workers: Option<usize>,
    /// Output directory for records.jsonl, summary.csv and summary.txt.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Also write one trace CSV per run under `<out-dir>/traces`.
    #[arg(long)]
    traces: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    records: PathBuf,
    #[arg(long)]
    baseline: Algorithm,
    #[arg(long, value_delimiter = ',', required = true)]
    against: Vec<Algorithm>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "majority")]
    thresholds: String,
    /// Original vertex ids, one per line.
    #[arg(long)]
    solution: PathBuf,
}

fn parse_params(s: &str) -> Result<Params, String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [e, m, b] = values[..] else {
        return Err("expected three comma-separated values pe,pm,pbias".into());
    };
    Params::new(e, m, b).map_err(|e| e.to_string())
}

fn threshold_rule(arg: &str) -> ThresholdRule {
    ThresholdRule::from(arg.to_owned())
}

fn load_instance(graph: &Path, thresholds: &str) -> tss_core::Result<(Graph, Thresholds)> {
    let (g, _) = Graph::load(graph)?;
    let th = threshold_rule(thresholds).apply(&g)?;
    Ok((g, th))
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> tss_core::Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    let mut out = BufWriter::new(file);
    f(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| io_error(path, e))
}

fn cmd_solve(args: SolveArgs) -> tss_core::Result<ExitCode> {
    if args.params.is_some() && args.algo.uses_power_law() {
        return Err(Error::InvalidArgument(format!(
            "--params applies to static-parameter algorithms, not {}",
            args.algo
        )));
    }
    let (g, th) = load_instance(&args.graph, &args.thresholds)?;
    let secs = args
        .budget
        .unwrap_or_else(|| default_budget_secs(g.vertex_count()));
    let options = SolveOptions {
        seed: args.seed,
        budget: Budget {
            max_iterations: args.max_iterations,
            ..Budget::seconds(secs)
        },
        target_fitness: args.target_fitness,
        params: args.params.unwrap_or(Params::STATIC_DEFAULT),
        beta: args.beta,
        population_size: args.population,
    };
    let result = solve(&g, &th, args.algo, &options)?;

    if let Some(path) = &args.out {
        write_file(path, |out| {
            for v in result.best.iter() {
                writeln!(out, "{}", g.label(v))?;
            }
            Ok(())
        })?;
    }
    if let Some(path) = &args.trace {
        write_file(path, |out| write_trace(out, &result.trace))?;
    }
    println!("graph       {}", args.graph.display());
    println!("vertices    {}", g.vertex_count());
    println!("edges       {}", g.edge_count());
    println!("algorithm   {}", args.algo);
    println!("iterations  {}", result.iterations);
    println!("fitness     {}", result.best_fitness);
    println!("wall_time   {:.3}s", result.wall_time);
    Ok(ExitCode::SUCCESS)
}

fn bench_plan(args: &BenchArgs) -> tss_core::Result<ExperimentPlan> {
    let mut plan = match &args.plan {
        Some(path) => ExperimentPlan::load(path)?,
        None => {
            let instances = args
                .graph
                .iter()
                .map(|path| InstanceSpec {
                    id: path
                        .file_stem()
                        .map(|s| s.to_string_lossy().trim_end_matches(".txt").to_owned())
                        .unwrap_or_else(|| path.display().to_string()),
                    path: path.clone(),
                    thresholds: ThresholdRule::Majority,
                    target_fitness: None,
                })
                .collect();
            let algorithms = if args.algos.is_empty() {
                Algorithm::ALL.to_vec()
            } else {
                args.algos.clone()
            };
            ExperimentPlan::new(instances, algorithms)
        }
    };
    if args.plan.is_some() && !args.algos.is_empty() {
        plan.algorithms = args.algos.clone();
    }
    if let Some(runs) = args.runs {
        plan.runs = runs;
    }
    if let Some(budget) = args.budget {
        plan.budget = Some(budget);
    }
    if let Some(cap) = args.max_iterations {
        plan.max_iterations = Some(cap);
    }
    if let Some(seed) = args.seed {
        plan.seed = seed;
    }
    if let Some(workers) = args.workers {
        plan.workers = Some(workers);
    }
    plan.validate()?;
    Ok(plan)
}

fn cmd_bench(args: BenchArgs) -> tss_core::Result<ExitCode> {
    let plan = bench_plan(&args)?;
    let outcome = run_experiment(&plan)?;
    for failure in &outcome.failures {
        eprintln!("tss: {failure}");
    }

    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    save_records(dir.join("records.jsonl"), &outcome.records)?;
    let rows = outcome.summary();
    let table = to_text(&rows);
    let csv_path = dir.join("summary.csv");
    fs::write(&csv_path, to_csv(&rows)).map_err(|e| io_error(&csv_path, e))?;
    let txt_path = dir.join("summary.txt");
    fs::write(&txt_path, &table).map_err(|e| io_error(&txt_path, e))?;
    if args.traces {
        let traces = dir.join("traces");
        fs::create_dir_all(&traces).map_err(|e| io_error(&traces, e))?;
        for r in &outcome.records {
            let path = traces.join(format!("{}-{}-{}.csv", r.instance, r.algorithm, r.run));
            write_file(&path, |out| write_trace(out, &r.trace))?;
        }
    }
    print!("{table}");

    Ok(match outcome.failures.first() {
        Some(e) => ExitCode::from(exit_code(e)),
        None => ExitCode::SUCCESS,
    })
}

fn cmd_stats(args: StatsArgs) -> tss_core::Result<ExitCode> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::InvalidArgument("--alpha must lie in (0, 1)".into()));
    }
    let records = load_records(&args.records)?;
    let mut instances: Vec<&str> = Vec::new();
    for r in &records {
        if !instances.contains(&r.instance.as_str()) {
            instances.push(&r.instance);
        }
    }
    let sample = |instance: &str, algorithm: Algorithm| -> Vec<f64> {
        records
            .iter()
            .filter(|r| r.instance == instance && r.algorithm == algorithm)
            .map(|r| r.best_fitness as f64)
            .collect()
    };
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let width = instances.iter().map(|s| s.len()).max().unwrap_or(0).max(8);

    println!(
        "{:<width$}  {:<10} {:>8}  {:<10} {:>8}  {:>10}",
        "instance", "baseline", "avg", "against", "avg", "p_value"
    );
    for instance in instances {
        let base = sample(instance, args.baseline);
        for &other in &args.against {
            let cmp = sample(instance, other);
            if base.is_empty() || cmp.is_empty() {
                println!(
                    "{instance:<width$}  {:<10} {:>8}  {:<10} {:>8}  {:>10}",
                    args.baseline.id(),
                    if base.is_empty() {
                        "-".into()
                    } else {
                        format!("{:.1}", mean(&base))
                    },
                    other.id(),
                    if cmp.is_empty() {
                        "-".into()
                    } else {
                        format!("{:.1}", mean(&cmp))
                    },
                    "-"
                );
                continue;
            }
            let p = mann_whitney_u(&base, &cmp)?.p_value;
            let flag = if p <= args.alpha { " *" } else { "" };
            println!(
                "{instance:<width$}  {:<10} {:>8.1}  {:<10} {:>8.1}  {:>10.4}{flag}",
                args.baseline.id(),
                mean(&base),
                other.id(),
                mean(&cmp),
                p
            );
        }
    }
    println!("* p <= {}", args.alpha);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> tss_core::Result<ExitCode> {
    let (g, th) = load_instance(&args.graph, &args.thresholds)?;
    let text = fs::read_to_string(&args.solution).map_err(|e| io_error(&args.solution, e))?;
    let mut seeds = VertexSet::empty(g.vertex_count());
    for (index, line) in text.lines().enumerate() {
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        let label: u64 = token.parse().map_err(|e| Error::Parse {
            line: index + 1,
            message: format!("`{token}`: {e}"),
        })?;
        seeds.insert(g.index_of(label).ok_or(Error::UnknownVertex(label))?);
    }
    let size = seeds.len();
    let state = DiffusionState::from_set(&g, &th, &seeds);
    if state.is_complete() {
        println!(
            "valid: {size} seeds activate all {} vertices",
            g.vertex_count()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "invalid: {size} seeds activate {} of {} vertices",
            state.active_count(),
            g.vertex_count()
        );
        Ok(ExitCode::from(3))
    }
}

/// 1 for I/O failures, 2 for bad arguments or malformed input.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 1,
        Error::Instance { source, .. } => exit_code(source),
        Error::Json(e) if e.is_io() => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Verify(args) => cmd_verify(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("tss: {e}");
        ExitCode::from(exit_code(&e))
    })
}
