//! Benchmark sweeps over instance families.
//!
//! A sweep is described by a TOML config: which families at which sizes,
//! how many seeded instances each, which methods, and a per-run time limit.
//! Every (instance, method) pair becomes one CSV row; failures are recorded
//! in their row and never abort the sweep. Instance seeds derive from the
//! config seed, so re-running a sweep reproduces the value columns exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Deserialize;
use thiserror::Error;

use crate::gen::{gen_complete, gen_cubic, gen_cycle, gen_path, gen_star, gen_watts_strogatz};
use crate::graph::Graph;
use crate::io::load_graph_path;
use crate::milp::{ExternalBackend, InternalBackend, MilpBackend};
use crate::models::{
    solve_bounded_timestep, solve_extended, solve_fort_cover, solve_infection, ConnectivityMode,
    FortSource,
};
use crate::outcome::{SolveOutcome, SolveStatus};
use crate::solvers::{bnb_connected, brute_force_czf, brute_force_zf, wavefront, WavefrontConfig};

/// First line of every bench CSV; appending to a file with a different
/// schema line is refused instead of silently mixing columns.
pub const CSV_SCHEMA: &str = "# zf-bench schema 1";

const CSV_HEADER: &str =
    "instance,family,n,m,method,status,value,lower,upper,time_s,seed,sets_examined,nodes,cuts_added,pool_peak";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("{0} begins with `{1}`, not the expected bench schema line")]
    Schema(PathBuf, String),
}

fn default_seed() -> u64 {
    7
}

fn default_instances() -> usize {
    5
}

fn default_time_limit() -> f64 {
    60.0
}

/// One family block of a sweep config.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    /// path | cycle | star | complete | cubic | watts | file
    pub name: String,
    #[serde(default)]
    pub sizes: Vec<usize>,
    /// Graph files, for the `file` family.
    #[serde(default)]
    pub paths: Vec<PathBuf>,
    /// Overrides the sweep-wide instance count for random families.
    #[serde(default)]
    pub instances: Option<usize>,
    /// Ring degree for `watts`.
    #[serde(default)]
    pub k: Option<usize>,
    /// Rewiring probability for `watts`.
    #[serde(default)]
    pub beta: Option<f64>,
}

/// A whole sweep: families x sizes x instances x methods.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Instances per (random family, size); deterministic families always
    /// produce exactly one.
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_time_limit")]
    pub time_limit_s: f64,
    pub methods: Vec<String>,
    /// External solver argument template with `{lp}`/`{sol}`/`{limit}`
    /// placeholders; the built-in backend when absent.
    #[serde(default)]
    pub solver: Option<Vec<String>>,
    #[serde(rename = "family")]
    pub families: Vec<FamilySpec>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<BenchConfig, BenchError> {
        let config: BenchConfig =
            toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        if config.families.is_empty() {
            return Err(BenchError::Config("no [[family]] blocks".into()));
        }
        if config.methods.is_empty() {
            return Err(BenchError::Config("empty method list".into()));
        }
        if let Some(cmd) = &config.solver {
            ExternalBackend::new(cmd.clone()).map_err(|e| BenchError::Config(e.to_string()))?;
        }
        for m in &config.methods {
            parse_method(m).map_err(BenchError::Config)?;
        }
        Ok(config)
    }

    pub fn time_limit(&self) -> Option<Duration> {
        if self.time_limit_s > 0.0 {
            Some(Duration::from_secs_f64(self.time_limit_s))
        } else {
            None
        }
    }

    fn backend(&self) -> Box<dyn MilpBackend> {
        match &self.solver {
            // Validated in from_toml; rebuilding per worker keeps the
            // backend off the shared state.
            Some(cmd) => Box::new(ExternalBackend::new(cmd.clone()).expect("validated template")),
            None => Box::new(InternalBackend),
        }
    }
}

/// One generated (or loaded) instance, ready to run every method on.
pub struct BenchTask {
    pub instance: String,
    pub family: String,
    pub seed: u64,
    /// The graph, or the reason it could not be produced.
    pub graph: Result<Graph, String>,
}

/// One (instance, method) result row.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub instance: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub method: String,
    pub status: String,
    pub value: Option<usize>,
    pub lower: Option<usize>,
    pub upper: Option<usize>,
    pub time_s: f64,
    pub seed: u64,
    pub sets_examined: u64,
    pub nodes: u64,
    pub cuts_added: u64,
    pub pool_peak: u64,
}

fn instance_seed(base: u64, family_idx: usize, size: usize, index: usize) -> u64 {
    base.wrapping_add((family_idx as u64) << 40)
        .wrapping_add((size as u64) << 20)
        .wrapping_add(index as u64)
}

/// Expand a config into the ordered task list. Deterministic families get
/// one instance per size; random families get `instances` seeded copies.
/// Generation failures become tasks that carry the error, so the sweep
/// still emits their rows.
pub fn expand_tasks(config: &BenchConfig) -> Result<Vec<BenchTask>, BenchError> {
    let mut tasks = Vec::new();
    for (fi, family) in config.families.iter().enumerate() {
        let count = family.instances.unwrap_or(config.instances).max(1);
        match family.name.as_str() {
            "path" | "cycle" | "star" | "complete" => {
                require_sizes(family)?;
                for &n in &family.sizes {
                    let graph = match family.name.as_str() {
                        "path" => gen_path(n),
                        "cycle" => gen_cycle(n),
                        "star" => gen_star(n),
                        _ => gen_complete(n),
                    };
                    tasks.push(BenchTask {
                        instance: format!("{}_n{}", family.name, n),
                        family: family.name.clone(),
                        seed: 0,
                        graph: graph.map_err(|e| e.to_string()),
                    });
                }
            }
            "cubic" => {
                require_sizes(family)?;
                for &n in &family.sizes {
                    for i in 0..count {
                        let seed = instance_seed(config.seed, fi, n, i);
                        tasks.push(BenchTask {
                            instance: format!("cubic_n{n}_i{i}"),
                            family: "cubic".into(),
                            seed,
                            graph: gen_cubic(n, seed).map_err(|e| e.to_string()),
                        });
                    }
                }
            }
            "watts" => {
                require_sizes(family)?;
                let k = family
                    .k
                    .ok_or_else(|| BenchError::Config("watts family needs k".into()))?;
                let beta = family
                    .beta
                    .ok_or_else(|| BenchError::Config("watts family needs beta".into()))?;
                for &n in &family.sizes {
                    for i in 0..count {
                        let seed = instance_seed(config.seed, fi, n, i);
                        tasks.push(BenchTask {
                            instance: format!("watts_n{n}_k{k}_i{i}"),
                            family: "watts".into(),
                            seed,
                            graph: gen_watts_strogatz(n, k, beta, seed).map_err(|e| e.to_string()),
                        });
                    }
                }
            }
            "file" => {
                if family.paths.is_empty() {
                    return Err(BenchError::Config("file family needs paths".into()));
                }
                for path in &family.paths {
                    let stem = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.display().to_string());
                    tasks.push(BenchTask {
                        instance: stem,
                        family: "file".into(),
                        seed: 0,
                        graph: load_graph_path(path).map_err(|e| e.to_string()),
                    });
                }
            }
            other => {
                return Err(BenchError::Config(format!("unknown family `{other}`")));
            }
        }
    }
    Ok(tasks)
}

fn require_sizes(family: &FamilySpec) -> Result<(), BenchError> {
    if family.sizes.is_empty() {
        Err(BenchError::Config(format!(
            "family `{}` needs sizes",
            family.name
        )))
    } else {
        Ok(())
    }
}

/// The method registry: every solver reachable by name. `bounded:T` takes
/// the timestep budget after the colon.
fn parse_method(name: &str) -> Result<(), String> {
    match name {
        "wavefront" | "brute" | "brute-connected" | "bnb" | "infection" | "extended"
        | "fort-cover" | "fort-cover-mtz" | "fort-cover-absep" => Ok(()),
        _ => match name.strip_prefix("bounded:") {
            Some(t) => t
                .parse::<usize>()
                .ok()
                .filter(|&t| t >= 1)
                .map(|_| ())
                .ok_or_else(|| format!("bad timestep bound in `{name}`")),
            None => Err(format!("unknown method `{name}`")),
        },
    }
}

/// Run one named method. Errors come back as strings so sweeps can record
/// them per-row.
pub fn solve_by_name(
    name: &str,
    g: &Graph,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match name {
        "wavefront" => Ok(wavefront(
            g,
            WavefrontConfig {
                time_limit,
                max_pool_bytes: None,
            },
        )),
        "brute" => Ok(brute_force_zf(g, time_limit)),
        "brute-connected" => brute_force_czf(g, time_limit).map_err(|e| err(&e)),
        "bnb" => bnb_connected(g, time_limit).map_err(|e| err(&e)),
        "infection" => solve_infection(g, backend, time_limit).map_err(|e| err(&e)),
        "extended" => solve_extended(g, backend, time_limit).map_err(|e| err(&e)),
        "fort-cover" => {
            solve_fort_cover(g, FortSource::default(), ConnectivityMode::None, backend, time_limit)
                .map_err(|e| err(&e))
        }
        "fort-cover-mtz" => {
            solve_fort_cover(g, FortSource::default(), ConnectivityMode::Mtz, backend, time_limit)
                .map_err(|e| err(&e))
        }
        "fort-cover-absep" => solve_fort_cover(
            g,
            FortSource::default(),
            ConnectivityMode::AbSeparator,
            backend,
            time_limit,
        )
        .map_err(|e| err(&e)),
        _ => match name.strip_prefix("bounded:").and_then(|t| t.parse::<usize>().ok()) {
            Some(t) if t >= 1 => solve_bounded_timestep(g, t, backend, time_limit).map_err(|e| err(&e)),
            _ => Err(format!("unknown method `{name}`")),
        },
    }
}

fn status_label(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Timeout => "timeout",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::MemoryExceeded => "memory",
    }
}

fn record_for(task: &BenchTask, method: &str, config: &BenchConfig) -> BenchRecord {
    let mut record = BenchRecord {
        instance: task.instance.clone(),
        family: task.family.clone(),
        n: 0,
        m: 0,
        method: method.to_string(),
        status: "error".into(),
        value: None,
        lower: None,
        upper: None,
        time_s: 0.0,
        seed: task.seed,
        sets_examined: 0,
        nodes: 0,
        cuts_added: 0,
        pool_peak: 0,
    };
    let g = match &task.graph {
        Ok(g) => g,
        Err(_) => return record,
    };
    record.n = g.n();
    record.m = g.m();
    let backend = config.backend();
    let started = Instant::now();
    match solve_by_name(method, g, backend.as_ref(), config.time_limit()) {
        Ok(out) => {
            record.status = status_label(out.status).into();
            record.value = if out.status == SolveStatus::Optimal {
                out.best_value
            } else {
                None
            };
            record.lower = Some(out.lower_bound);
            record.upper = out.best_value;
            record.time_s = out.wall.as_secs_f64();
            record.sets_examined = out.stats.sets_examined;
            record.nodes = out.stats.nodes;
            record.cuts_added = out.stats.cuts_added;
            record.pool_peak = out.stats.pool_peak;
        }
        Err(_) => {
            record.time_s = started.elapsed().as_secs_f64();
        }
    }
    record
}

/// Run the whole sweep. Rows execute in parallel up to `jobs`, but the
/// returned order is always tasks x methods in config order.
pub fn run_bench(config: &BenchConfig, jobs: usize) -> Result<Vec<BenchRecord>, BenchError> {
    let tasks = expand_tasks(config)?;
    let pairs: Vec<(usize, usize)> = (0..tasks.len())
        .flat_map(|t| (0..config.methods.len()).map(move |m| (t, m)))
        .collect();
    let jobs = jobs.max(1).min(pairs.len().max(1));
    let mut slots: Vec<Option<BenchRecord>> = vec![None; pairs.len()];
    if jobs == 1 {
        for (slot, &(t, m)) in slots.iter_mut().zip(&pairs) {
            *slot = Some(record_for(&tasks[t], &config.methods[m], config));
        }
    } else {
        let next = Mutex::new(0usize);
        let done: Mutex<Vec<(usize, BenchRecord)>> = Mutex::new(Vec::with_capacity(pairs.len()));
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let i = {
                        let mut guard = next.lock().unwrap();
                        let i = *guard;
                        *guard += 1;
                        i
                    };
                    let Some(&(t, m)) = pairs.get(i) else { break };
                    let record = record_for(&tasks[t], &config.methods[m], config);
                    done.lock().unwrap().push((i, record));
                });
            }
        });
        for (i, record) in done.into_inner().unwrap() {
            slots[i] = Some(record);
        }
    }
    Ok(slots.into_iter().map(|r| r.expect("every pair ran")).collect())
}

fn csv_cell_opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_line(r: &BenchRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{:.6},{},{},{},{},{}",
        r.instance,
        r.family,
        r.n,
        r.m,
        r.method,
        r.status,
        csv_cell_opt(r.value),
        csv_cell_opt(r.lower),
        csv_cell_opt(r.upper),
        r.time_s,
        r.seed,
        r.sets_examined,
        r.nodes,
        r.cuts_added,
        r.pool_peak
    )
}

/// Append records to a CSV file, creating it with the schema and header
/// lines when new. An existing file must open with the same schema line.
pub fn append_csv(path: &Path, records: &[BenchRecord]) -> Result<(), BenchError> {
    let fresh = match fs::metadata(path) {
        Ok(meta) => meta.len() == 0,
        Err(_) => true,
    };
    if !fresh {
        let text = fs::read_to_string(path)?;
        let first = text.lines().next().unwrap_or("").to_string();
        if first != CSV_SCHEMA {
            return Err(BenchError::Schema(path.to_path_buf(), first));
        }
    }
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(file, "{CSV_SCHEMA}")?;
        writeln!(file, "{CSV_HEADER}")?;
    }
    for r in records {
        writeln!(file, "{}", csv_line(r))?;
    }
    Ok(())
}

/// Per (family, n, method) aggregate, averaged over the rows that solved.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub family: String,
    pub n: usize,
    pub method: String,
    pub solved: usize,
    pub total: usize,
    pub avg_value: Option<f64>,
    pub avg_time_s: Option<f64>,
}

/// Group records and average value and time over solved rows only, in
/// first-seen group order.
pub fn summarize(records: &[BenchRecord]) -> Vec<BenchSummary> {
    let mut order: Vec<(String, usize, String)> = Vec::new();
    let mut groups: Vec<Vec<&BenchRecord>> = Vec::new();
    for r in records {
        let key = (r.family.clone(), r.n, r.method.clone());
        match order.iter().position(|k| *k == key) {
            Some(i) => groups[i].push(r),
            None => {
                order.push(key);
                groups.push(vec![r]);
            }
        }
    }
    order
        .into_iter()
        .zip(groups)
        .map(|((family, n, method), rows)| {
            let solved: Vec<&&BenchRecord> =
                rows.iter().filter(|r| r.status == "optimal").collect();
            let avg = |f: &dyn Fn(&BenchRecord) -> f64| {
                if solved.is_empty() {
                    None
                } else {
                    Some(solved.iter().map(|r| f(r)).sum::<f64>() / solved.len() as f64)
                }
            };
            BenchSummary {
                family,
                n,
                method,
                solved: solved.len(),
                total: rows.len(),
                avg_value: avg(&|r| r.value.unwrap_or(0) as f64),
                avg_time_s: avg(&|r| r.time_s),
            }
        })
        .collect()
}

/// Plain-text table of a summary, one line per group.
pub fn render_summary(summaries: &[BenchSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>5} {:<18} {:>8} {:>10} {:>12}",
        "family", "n", "method", "solved", "avg_value", "avg_time_s"
    );
    for s in summaries {
        let value = s
            .avg_value
            .map(|v| format!("{v:.2}"))
            .unwrap_or_else(|| "-".into());
        let time = s
            .avg_time_s
            .map(|t| format!("{t:.4}"))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<10} {:>5} {:<18} {:>8} {:>10} {:>12}",
            s.family,
            s.n,
            s.method,
            format!("{}/{}", s.solved, s.total),
            value,
            time
        );
    }
    out
}
