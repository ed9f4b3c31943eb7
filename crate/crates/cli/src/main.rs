//! `mapf`: solve, verify, generate and benchmark multi-agent path finding
//! instances.
//!
//! Exit codes: 0 solved (or valid), 2 no solution (or invalid plan),
//! 3 timeout, 1 usage or I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mapf::experiment::{aggregate, format_aggregate, run_algorithm, run_experiment, write_csv, Algorithm, ExperimentConfig, RunOptions};
use mapf::io::{
    generate_random_instance, generate_wellformed_instance, parse_graph_fixture, parse_map, parse_scen, parse_solution,
    scen_entries_for, write_map, write_scen, write_solution,
};
use mapf::{flowtime, makespan, validate_solution, Execution, Instance, Limits, PriorityOrdering, Semantics, SolveResult};

#[derive(Parser)]
#[command(name = "mapf", version, about = "Multi-agent path finding with searched priority orderings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print statistics.
    Solve(SolveArgs),
    /// Run a benchmark sweep described by a config file.
    Bench(BenchArgs),
    /// Check a solution file against an instance.
    Verify(VerifyArgs),
    /// Generate a random grid instance as .map and .scen files.
    Gen(GenArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Graph fixture file (alternative to --map/--scen).
    #[arg(long, conflicts_with_all = ["map", "scen"])]
    instance: Option<PathBuf>,
    /// movingai .map file.
    #[arg(long, requires = "scen")]
    map: Option<PathBuf>,
    /// movingai .scen file (version 1).
    #[arg(long, requires = "map")]
    scen: Option<PathBuf>,
    /// Number of scenario entries to use (default: all).
    #[arg(long)]
    agents: Option<usize>,
    /// Overrides the instance's semantics: stay or disappear.
    #[arg(long, value_parser = parse_semantics)]
    semantics: Option<Semantics>,
}

#[derive(Args)]
struct SolveArgs {
    /// cbs, cbswp, pbs, fix, lh, sh or rnd.
    #[arg(long, value_parser = parse_algorithm)]
    algo: Algorithm,
    #[command(flatten)]
    input: InstanceArgs,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Total priority order, highest first, 1-based (fix and pbs only).
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
    /// Seed of rnd's random orderings.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of rnd runs.
    #[arg(long, default_value_t = 10)]
    rnd_runs: usize,
    /// Cap on high-level expansions (reported as a timeout).
    #[arg(long)]
    hl_limit: Option<u64>,
    /// Write the plan here in the solution format.
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    width: u32,
    #[arg(long)]
    height: u32,
    /// Percentage of blocked cells.
    #[arg(long, default_value_t = 0.0)]
    obstacles: f64,
    #[arg(long)]
    agents: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Resample until every agent can avoid all other endpoints.
    #[arg(long)]
    well_formed: bool,
    /// Write PREFIX.map and PREFIX.scen instead of printing both.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    Semantics::parse(s).ok_or_else(|| format!("expected stay or disappear, got `{s}`"))
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    Algorithm::parse(s).ok_or_else(|| format!("unknown algorithm `{s}` (cbs, cbswp, pbs, fix, lh, sh, rnd)"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(args: &InstanceArgs) -> Result<Instance> {
    let instance = match (&args.instance, &args.map, &args.scen) {
        (Some(fixture), _, _) => parse_graph_fixture(&read(fixture)?)?,
        (None, Some(map), Some(scen)) => {
            let grid = parse_map(&read(map)?)?;
            let text = read(scen)?;
            let m = match args.agents {
                Some(m) => m,
                None => mapf::io::parse_scen_entries(&text)?.len(),
            };
            parse_scen(&text, &grid, m)?
        }
        _ => bail!("give either --instance FILE or --map FILE --scen FILE"),
    };
    Ok(match args.semantics {
        Some(s) => instance.with_semantics(s),
        None => instance,
    })
}

fn exit_code(result: SolveResult) -> u8 {
    match result {
        SolveResult::Solved => 0,
        SolveResult::NoSolution => 2,
        SolveResult::Timeout => 3,
    }
}

fn solve(args: SolveArgs) -> Result<u8> {
    let instance = load(&args.input)?;
    let m = instance.num_agents();
    if !(args.timeout > 0.0 && args.timeout.is_finite()) {
        bail!("--timeout must be a positive number of seconds");
    }
    let order = match &args.order {
        None => None,
        Some(order) => {
            if !matches!(args.algo, Algorithm::Fix | Algorithm::Pbs) {
                bail!("--order applies to fix and pbs only");
            }
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if !sorted.iter().copied().eq(1..=m) {
                bail!("--order must list each agent 1..{m} exactly once");
            }
            Some(order.iter().map(|i| i - 1).collect::<Vec<_>>())
        }
    };
    let limits = Limits {
        timeout: Some(Duration::from_secs_f64(args.timeout)),
        high_level_limit: args.hl_limit,
        ..Limits::default()
    };
    let outcome = match (args.algo, &order) {
        (Algorithm::Pbs, Some(order)) => {
            let initial = PriorityOrdering::total(m, order).expect("a permutation is acyclic");
            mapf::solve_pbs(&instance, &initial, &limits)
        }
        _ => {
            let options = RunOptions {
                order,
                seed: args.seed,
                rnd_runs: args.rnd_runs,
                execution: Execution::Parallel,
            };
            run_algorithm(&instance, args.algo, &limits, &options)
        }
    };
    let stats = &outcome.stats;
    println!("algorithm: {}", args.algo);
    println!("agents: {m}");
    println!("result: {}", stats.result);
    if let Some(plan) = &outcome.plan {
        println!("flowtime: {}", flowtime(plan));
        println!("makespan: {}", makespan(plan));
    }
    println!("runtime_s: {:.6}", stats.runtime.as_secs_f64());
    println!("hl_expansions: {}", stats.high_level_expansions);
    println!("ll_expansions: {}", stats.low_level_expansions);
    if let Some(ordering) = &outcome.ordering {
        println!("ordering: {ordering}");
    }
    if let (Some(path), Some(plan)) = (&args.solution, &outcome.plan) {
        fs::write(path, write_solution(&instance, plan)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(exit_code(stats.result))
}

fn bench(args: BenchArgs) -> Result<u8> {
    let base = args.config.parent().unwrap_or(Path::new("."));
    let config = ExperimentConfig::parse(&read(&args.config)?, base)?;
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let records = run_experiment(&config, execution)?;
    let file = fs::File::create(&args.out).with_context(|| format!("cannot write {}", args.out.display()))?;
    write_csv(&records, file)?;
    print!("{}", format_aggregate(&aggregate(&records, &config.compare)));
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let instance = load(&args.input)?;
    let plan = parse_solution(&read(&args.solution)?, &instance)?;
    match validate_solution(&instance, &plan) {
        Ok(()) => {
            println!("valid: flowtime {} makespan {}", flowtime(&plan), makespan(&plan));
            Ok(0)
        }
        Err(violations) => {
            for v in &violations {
                println!("violation: {v:?}");
            }
            println!("invalid: {} violations", violations.len());
            Ok(2)
        }
    }
}

fn gen(args: GenArgs) -> Result<u8> {
    let generate = if args.well_formed {
        generate_wellformed_instance
    } else {
        generate_random_instance
    };
    let g = generate(args.width, args.height, args.obstacles, args.agents, args.seed)?;
    let map_text = write_map(&g.map);
    match &args.out {
        Some(prefix) => {
            let map_path = prefix.with_extension("map");
            let scen_path = prefix.with_extension("scen");
            let map_name = map_path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let scen_text = write_scen(&scen_entries_for(&g.instance, &map_name, &g.map));
            fs::write(&map_path, map_text).with_context(|| format!("cannot write {}", map_path.display()))?;
            fs::write(&scen_path, scen_text).with_context(|| format!("cannot write {}", scen_path.display()))?;
            println!("wrote {} and {}", map_path.display(), scen_path.display());
        }
        None => {
            print!("{map_text}");
            print!("{}", write_scen(&scen_entries_for(&g.instance, "generated.map", &g.map)));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
