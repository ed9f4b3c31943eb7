//! Benchmark sweeps: an algorithm matrix over generated or movingai
//! instances, one CSV record per run, and success-rate / mean tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path as FsPath, PathBuf};
use std::time::Duration;

use crate::cbs::{solve_cbs, CbsMode};
use crate::error::MapfError;
use crate::instance::{flowtime, makespan, Instance, Semantics};
use crate::io::{generate_random_instance, generate_wellformed_instance, parse_map, parse_scen};
use crate::ordering::PriorityOrdering;
use crate::par::{par_map, Execution};
use crate::pbs::{solve_pbs, solve_prioritized, solve_rnd, OrderingStrategy};
use crate::stats::{Limits, SolveOutcome, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Cbs,
    CbsWithPriorities,
    Pbs,
    Fix,
    LongestFirst,
    ShortestFirst,
    Rnd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Cbs,
        Algorithm::CbsWithPriorities,
        Algorithm::Pbs,
        Algorithm::Fix,
        Algorithm::LongestFirst,
        Algorithm::ShortestFirst,
        Algorithm::Rnd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Cbs => "cbs",
            Algorithm::CbsWithPriorities => "cbswp",
            Algorithm::Pbs => "pbs",
            Algorithm::Fix => "fix",
            Algorithm::LongestFirst => "lh",
            Algorithm::ShortestFirst => "sh",
            Algorithm::Rnd => "rnd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Algorithm::ALL.into_iter().find(|a| a.as_str() == s)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Extra inputs some algorithms take.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Total order for `fix` (highest priority first); identity when absent.
    pub order: Option<Vec<usize>>,
    /// Seed of `rnd`'s orderings.
    pub seed: u64,
    pub rnd_runs: usize,
    pub execution: Execution,
}

/// Solves `instance` with `algorithm`.
pub fn run_algorithm(instance: &Instance, algorithm: Algorithm, limits: &Limits, options: &RunOptions) -> SolveOutcome {
    let m = instance.num_agents();
    match algorithm {
        Algorithm::Cbs => solve_cbs(instance, CbsMode::Plain, limits),
        Algorithm::CbsWithPriorities => solve_cbs(instance, CbsMode::WithPriorities, limits),
        Algorithm::Pbs => solve_pbs(instance, &PriorityOrdering::empty(m), limits),
        Algorithm::Fix => {
            let order = options.order.clone().unwrap_or_else(|| (0..m).collect());
            solve_prioritized(instance, &OrderingStrategy::Fixed(order), limits)
        }
        Algorithm::LongestFirst => solve_prioritized(instance, &OrderingStrategy::LongestFirst, limits),
        Algorithm::ShortestFirst => solve_prioritized(instance, &OrderingStrategy::ShortestFirst, limits),
        Algorithm::Rnd => solve_rnd(instance, options.rnd_runs.max(1), limits, options.seed, options.execution),
    }
}

/// Where a sweep's instances come from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Generated {
        width: u32,
        height: u32,
        obstacle_pct: f64,
        well_formed: bool,
    },
    /// One map and a list of scenario files; the `seed` of a record is the
    /// index of its scenario file.
    MovingAi { map: PathBuf, scens: Vec<PathBuf> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub source: InstanceSource,
    pub agents: Vec<usize>,
    pub seeds: Vec<u64>,
    pub semantics: Semantics,
    pub timeout: Duration,
    pub high_level_limit: Option<u64>,
    pub rnd_runs: usize,
    /// Algorithms whose commonly solved instances the summary averages over.
    pub compare: Vec<Algorithm>,
}

impl ExperimentConfig {
    /// Parses the line-oriented `key = value` format. Relative file paths are
    /// resolved against `base`.
    ///
    /// ```text
    /// algorithms = pbs, fix, rnd
    /// source = generate          # or movingai
    /// width = 20
    /// height = 20
    /// obstacle_pct = 10
    /// well_formed = false
    /// agents = 20, 30, 40
    /// seeds = 0..50              # or a list
    /// semantics = stay
    /// timeout = 60               # seconds per run
    /// high_level_limit = 100000  # optional
    /// rnd_runs = 10
    /// compare = pbs, fix         # defaults to `algorithms`
    /// map = maps/arena.map       # movingai only
    /// scens = a.scen, b.scen     # movingai only
    /// ```
    pub fn parse(text: &str, base: &FsPath) -> Result<Self, MapfError> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected key = value", k + 1)))?;
            let key = key.trim().to_string();
            if kv.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(invalid(format!("line {}: `{key}` given twice", k + 1)));
            }
        }
        let mut take = |key: &str| kv.remove(key);

        let algorithms = parse_algorithms(&take("algorithms").ok_or_else(|| invalid("missing `algorithms`"))?)?;
        let compare = match take("compare") {
            Some(v) => parse_algorithms(&v)?,
            None => algorithms.clone(),
        };
        let agents = list(&take("agents").ok_or_else(|| invalid("missing `agents`"))?, "agents")?;
        let seeds = match take("seeds") {
            Some(v) => parse_seeds(&v)?,
            None => vec![0],
        };
        let semantics = match take("semantics") {
            Some(v) => Semantics::parse(&v).ok_or_else(|| invalid(format!("bad semantics `{v}`")))?,
            None => Semantics::StayAtTarget,
        };
        let timeout = match take("timeout") {
            Some(v) => {
                let secs: f64 = number(&v, "timeout")?;
                if !(secs > 0.0 && secs.is_finite()) {
                    return Err(invalid("timeout must be positive"));
                }
                Duration::from_secs_f64(secs)
            }
            None => Duration::from_secs(60),
        };
        let high_level_limit = take("high_level_limit").map(|v| number(&v, "high_level_limit")).transpose()?;
        let rnd_runs = take("rnd_runs").map(|v| number(&v, "rnd_runs")).transpose()?.unwrap_or(10);
        let source = match take("source").as_deref().unwrap_or("generate") {
            "generate" => InstanceSource::Generated {
                width: number(&take("width").unwrap_or_else(|| "20".into()), "width")?,
                height: number(&take("height").unwrap_or_else(|| "20".into()), "height")?,
                obstacle_pct: number(&take("obstacle_pct").unwrap_or_else(|| "0".into()), "obstacle_pct")?,
                well_formed: match take("well_formed").as_deref() {
                    None | Some("false") => false,
                    Some("true") => true,
                    Some(v) => return Err(invalid(format!("bad well_formed `{v}`"))),
                },
            },
            "movingai" => {
                let map = base.join(take("map").ok_or_else(|| invalid("movingai source needs `map`"))?);
                let scens: Vec<PathBuf> = take("scens")
                    .ok_or_else(|| invalid("movingai source needs `scens`"))?
                    .split(',')
                    .map(|s| base.join(s.trim()))
                    .collect();
                InstanceSource::MovingAi { map, scens }
            }
            other => return Err(invalid(format!("unknown source `{other}`"))),
        };
        if let Some(key) = kv.keys().next() {
            return Err(invalid(format!("unknown key `{key}`")));
        }
        if let InstanceSource::MovingAi { scens, .. } = &source {
            if let Some(&s) = seeds.iter().find(|&&s| s as usize >= scens.len()) {
                return Err(invalid(format!("seed {s} has no scenario file")));
            }
        }
        Ok(ExperimentConfig {
            algorithms,
            source,
            agents,
            seeds,
            semantics,
            timeout,
            high_level_limit,
            rnd_runs,
            compare,
        })
    }

    pub fn limits(&self) -> Limits {
        Limits {
            timeout: Some(self.timeout),
            high_level_limit: self.high_level_limit,
            ..Limits::default()
        }
    }
}

fn invalid(msg: impl Into<String>) -> MapfError {
    MapfError::InvalidConfig(msg.into())
}

fn number<T: std::str::FromStr>(s: &str, key: &str) -> Result<T, MapfError> {
    s.trim().parse().map_err(|_| invalid(format!("bad value `{s}` for `{key}`")))
}

fn list<T: std::str::FromStr>(s: &str, key: &str) -> Result<Vec<T>, MapfError> {
    s.split(',').map(|x| number(x, key)).collect()
}

fn parse_algorithms(s: &str) -> Result<Vec<Algorithm>, MapfError> {
    s.split(',')
        .map(|a| Algorithm::parse(a.trim()).ok_or_else(|| invalid(format!("unknown algorithm `{}`", a.trim()))))
        .collect()
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, MapfError> {
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi): (u64, u64) = (number(lo, "seeds")?, number(hi, "seeds")?);
            Ok((lo..hi).collect())
        }
        None => list(s, "seeds"),
    }
}

/// One (algorithm, instance) run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub map: String,
    pub seed: u64,
    pub m: usize,
    pub obstacle_pct: f64,
    pub semantics: Semantics,
    pub result: SolveResult,
    pub runtime_s: f64,
    pub flowtime: Option<u64>,
    pub makespan: Option<u32>,
    pub hl_expansions: u64,
    pub ll_expansions: u64,
}

impl RunRecord {
    /// Identifies the instance independently of the algorithm.
    pub fn instance_key(&self) -> (String, u64, usize, u64, Semantics) {
        (self.map.clone(), self.seed, self.m, self.obstacle_pct.to_bits(), self.semantics)
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "algorithm",
    "map",
    "seed",
    "m",
    "obstacle_pct",
    "semantics",
    "result",
    "runtime_s",
    "flowtime",
    "makespan",
    "hl_expansions",
    "ll_expansions",
];

pub fn write_csv<W: std::io::Write>(records: &[RunRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.algorithm.as_str().to_string(),
            r.map.clone(),
            r.seed.to_string(),
            r.m.to_string(),
            r.obstacle_pct.to_string(),
            r.semantics.as_str().to_string(),
            r.result.as_str().to_string(),
            format!("{:.6}", r.runtime_s),
            r.flowtime.map(|f| f.to_string()).unwrap_or_default(),
            r.makespan.map(|f| f.to_string()).unwrap_or_default(),
            r.hl_expansions.to_string(),
            r.ll_expansions.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

struct InstanceSpec {
    map: String,
    seed: u64,
    m: usize,
    obstacle_pct: f64,
}

fn load_instance(config: &ExperimentConfig, seed: u64, m: usize) -> Result<(InstanceSpec, Instance), MapfError> {
    let read = |p: &PathBuf| {
        std::fs::read_to_string(p).map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))
    };
    match &config.source {
        InstanceSource::Generated {
            width,
            height,
            obstacle_pct,
            well_formed,
        } => {
            let generate = if *well_formed {
                generate_wellformed_instance
            } else {
                generate_random_instance
            };
            let g = generate(*width, *height, *obstacle_pct, m, seed)?;
            let name = format!("random-{width}x{height}{}", if *well_formed { "-wf" } else { "" });
            let spec = InstanceSpec {
                map: name,
                seed,
                m,
                obstacle_pct: *obstacle_pct,
            };
            Ok((spec, g.instance.with_semantics(config.semantics)))
        }
        InstanceSource::MovingAi { map, scens } => {
            let grid = parse_map(&read(map)?)?;
            let inst = parse_scen(&read(&scens[seed as usize])?, &grid, m)?;
            let cells = (grid.width() * grid.height()) as f64;
            let spec = InstanceSpec {
                map: map.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned()),
                seed,
                m,
                obstacle_pct: 100.0 * (cells - grid.free_count() as f64) / cells,
            };
            Ok((spec, inst.with_semantics(config.semantics)))
        }
    }
}

/// Runs every algorithm on every instance of the config. Records come back in
/// config order (agent count, then seed, then algorithm) whatever order the
/// runs finish in.
pub fn run_experiment(config: &ExperimentConfig, execution: Execution) -> Result<Vec<RunRecord>, MapfError> {
    let mut instances = Vec::new();
    for &m in &config.agents {
        for &seed in &config.seeds {
            instances.push(load_instance(config, seed, m)?);
        }
    }
    let jobs: Vec<(usize, Algorithm)> = (0..instances.len())
        .flat_map(|k| config.algorithms.iter().map(move |&a| (k, a)))
        .collect();
    let limits = config.limits();
    let records = par_map(&jobs, execution, |&(k, algorithm)| {
        let (spec, instance) = &instances[k];
        let options = RunOptions {
            order: None,
            seed: spec.seed,
            rnd_runs: config.rnd_runs,
            execution: Execution::Sequential,
        };
        let outcome = run_algorithm(instance, algorithm, &limits, &options);
        RunRecord {
            algorithm,
            map: spec.map.clone(),
            seed: spec.seed,
            m: spec.m,
            obstacle_pct: spec.obstacle_pct,
            semantics: instance.semantics(),
            result: outcome.result(),
            runtime_s: outcome.stats.runtime.as_secs_f64(),
            flowtime: outcome.plan.as_ref().map(flowtime),
            makespan: outcome.plan.as_ref().map(makespan),
            hl_expansions: outcome.stats.high_level_expansions,
            ll_expansions: outcome.stats.low_level_expansions,
        }
    });
    Ok(records)
}

/// Summary of one algorithm at one agent count.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: Algorithm,
    pub m: usize,
    pub instances: usize,
    pub solved: usize,
    pub success_rate: f64,
    /// Mean runtime over all instances, timeouts included at their runtime.
    pub mean_runtime_s: f64,
    /// Means over the instances solved by every compared algorithm.
    pub common_instances: usize,
    pub mean_flowtime: Option<f64>,
    pub mean_hl_expansions: Option<f64>,
    pub mean_ll_expansions: Option<f64>,
}

/// Per-(algorithm, m) rows. Success rates count every instance; means are
/// restricted to instances that every algorithm in `comparison_set` solved.
pub fn aggregate(records: &[RunRecord], comparison_set: &[Algorithm]) -> Vec<AggregateRow> {
    let mut solved_by: BTreeMap<_, BTreeSet<Algorithm>> = BTreeMap::new();
    for r in records {
        let entry = solved_by.entry(r.instance_key()).or_default();
        if r.result == SolveResult::Solved {
            entry.insert(r.algorithm);
        }
    }
    let common: BTreeSet<_> = solved_by
        .iter()
        .filter(|(_, algs)| comparison_set.iter().all(|a| algs.contains(a)))
        .map(|(k, _)| k.clone())
        .collect();

    let mut groups: BTreeMap<(Algorithm, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.algorithm, r.m)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((algorithm, m), rs)| {
            let solved = rs.iter().filter(|r| r.result == SolveResult::Solved).count();
            let mut runtimes: Vec<f64> = rs.iter().map(|r| r.runtime_s).collect();
            runtimes.sort_by(f64::total_cmp);
            let shared: Vec<&&RunRecord> = rs
                .iter()
                .filter(|r| r.result == SolveResult::Solved && common.contains(&r.instance_key()))
                .collect();
            let n = shared.len();
            let mean = |f: &dyn Fn(&RunRecord) -> u64| {
                (n > 0).then(|| shared.iter().map(|r| f(r)).sum::<u64>() as f64 / n as f64)
            };
            AggregateRow {
                algorithm,
                m,
                instances: rs.len(),
                solved,
                success_rate: solved as f64 / rs.len() as f64,
                mean_runtime_s: runtimes.iter().sum::<f64>() / rs.len() as f64,
                common_instances: n,
                mean_flowtime: mean(&|r| r.flowtime.unwrap_or(0)),
                mean_hl_expansions: mean(&|r| r.hl_expansions),
                mean_ll_expansions: mean(&|r| r.ll_expansions),
            }
        })
        .collect()
}

/// The summary as an aligned text table.
pub fn format_aggregate(rows: &[AggregateRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
    let mut out = format!(
        "{:<6} {:>5} {:>8} {:>9} {:>7} {:>11} {:>12} {:>14}\n",
        "algo", "m", "success", "runtime", "common", "flowtime", "hl_exp", "ll_exp"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<6} {:>5} {:>8.3} {:>9.3} {:>7} {:>11} {:>12} {:>14}\n",
            r.algorithm.as_str(),
            r.m,
            r.success_rate,
            r.mean_runtime_s,
            r.common_instances,
            opt(r.mean_flowtime),
            opt(r.mean_hl_expansions),
            opt(r.mean_ll_expansions)
        ));
    }
    out
}
