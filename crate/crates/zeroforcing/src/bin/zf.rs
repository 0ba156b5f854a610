//! Command-line front end: solve, generate, inspect forts, sweep, check.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use zeroforcing::bench::{append_csv, render_summary, run_bench, solve_by_name, summarize, BenchConfig};
use zeroforcing::fort::enumerate_forts;
use zeroforcing::gen::{gen_complete, gen_cubic, gen_cycle, gen_path, gen_star, gen_watts_strogatz};
use zeroforcing::io::{load_graph_path, save_graph, save_graph_path, GraphFormat};
use zeroforcing::milp::{ExternalBackend, InternalBackend, MilpBackend};
use zeroforcing::models::{
    find_min_fort_ip, solve_bounded_timestep, solve_fort_cover, ConnectivityMode, FacetMode,
    FortSource, FortStrategy, SubSearch,
};
use zeroforcing::outcome::{SolveOutcome, SolveStatus};
use zeroforcing::Graph;

#[derive(Parser)]
#[command(name = "zf", version, about = "Exact solvers for zero forcing numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a forcing number and print the outcome as JSON.
    Solve(SolveArgs),
    /// Generate a graph from a named family.
    Gen(GenArgs),
    /// Print a minimum fort, or every fort.
    Forts(FortsArgs),
    /// Run a benchmark sweep from a TOML config and append CSV rows.
    Bench(BenchArgs),
    /// Run every applicable exact method and fail loudly on disagreement.
    Check(CheckArgs),
    /// Solve an LP-format model with the built-in backend and write a
    /// solution file; lets `zf` stand in as an external solver.
    Milp(MilpArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Wavefront,
    Brute,
    BruteConnected,
    Bnb,
    Infection,
    Extended,
    FortCover,
    Bounded,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    MinIp,
    Closure,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum FacetArg {
    Off,
    Simplified,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConnectArg {
    None,
    Mtz,
    Absep,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Graph file: `.el` edge list, `.dimacs`/`.col` DIMACS.
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::FortCover)]
    method: MethodArg,
    /// Fort source for fort-cover.
    #[arg(long, value_enum, default_value_t = StrategyArg::MinIp)]
    strategy: StrategyArg,
    /// Facet screening for fort-cover.
    #[arg(long, value_enum, default_value_t = FacetArg::Off)]
    facets: FacetArg,
    /// Connectivity handling for fort-cover; mtz and absep solve Zc.
    #[arg(long, value_enum, default_value_t = ConnectArg::None)]
    connect: ConnectArg,
    /// Timestep budget, required by `--method bounded`.
    #[arg(long = "T", value_name = "T")]
    t: Option<usize>,
    /// Seconds per solve; 0 disables the limit.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// External MILP solver template, e.g. "mysolver {lp} {sol} {limit}".
    #[arg(long)]
    solver: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Path,
    Cycle,
    Star,
    Complete,
    Cubic,
    Watts,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Ring degree for watts.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Rewiring probability for watts.
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Output file (format by extension); stdout edge list when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct FortsArgs {
    path: PathBuf,
    /// Enumerate every fort instead of solving for a minimum one.
    #[arg(long)]
    all: bool,
    /// Largest n accepted by --all before refusing to enumerate.
    #[arg(long, default_value_t = 16)]
    limit: usize,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Sweep description (TOML).
    config: PathBuf,
    /// CSV file to append to.
    #[arg(long, short, default_value = "bench.csv")]
    out: PathBuf,
    /// Parallel rows.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(clap::Args)]
struct CheckArgs {
    path: PathBuf,
    /// Seconds per method; 0 disables the limit.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
}

#[derive(clap::Args)]
struct MilpArgs {
    /// Model in LP format.
    lp: PathBuf,
    /// Solution file to write: a status line, then `name value` lines.
    sol: PathBuf,
    /// Seconds; 0 disables the limit.
    #[arg(long, default_value_t = 0.0)]
    time_limit: f64,
}

fn time_limit(seconds: f64) -> Option<Duration> {
    (seconds > 0.0).then(|| Duration::from_secs_f64(seconds))
}

fn backend_for(solver: &Option<String>) -> anyhow::Result<Box<dyn MilpBackend>> {
    match solver {
        Some(template) => {
            let args: Vec<String> = template.split_whitespace().map(String::from).collect();
            Ok(Box::new(ExternalBackend::new(args)?))
        }
        None => Ok(Box::new(InternalBackend)),
    }
}

fn main() -> anyhow::Result<()> {
    let result = match Cli::parse().cmd {
        Cmd::Solve(args) => solve_cmd(args),
        Cmd::Gen(args) => gen_cmd(args),
        Cmd::Forts(args) => forts_cmd(args),
        Cmd::Bench(args) => bench_cmd(args),
        Cmd::Check(args) => check_cmd(args),
        Cmd::Milp(args) => milp_cmd(args),
    };
    match result {
        // Dying pipes (`zf forts --all g.el | head`) are not errors.
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            Ok(())
        }
        other => other,
    }
}

fn solve_cmd(args: SolveArgs) -> anyhow::Result<()> {
    let g = load_graph_path(&args.path)?;
    let backend = backend_for(&args.solver)?;
    let limit = time_limit(args.time_limit);
    if args.t.is_some() && args.method != MethodArg::Bounded {
        bail!("--T only applies to --method bounded");
    }
    let out = match args.method {
        MethodArg::FortCover => {
            let strategy = match args.strategy {
                StrategyArg::MinIp => FortStrategy::MinFortIp,
                StrategyArg::Closure => FortStrategy::ClosureComplement,
                StrategyArg::Greedy => FortStrategy::GreedyMinimal,
            };
            let facets = match args.facets {
                FacetArg::Off => FacetMode::Off,
                FacetArg::Simplified => FacetMode::Simplified,
                FacetArg::Full => FacetMode::Full,
            };
            let connect = match args.connect {
                ConnectArg::None => ConnectivityMode::None,
                ConnectArg::Mtz => ConnectivityMode::Mtz,
                ConnectArg::Absep => ConnectivityMode::AbSeparator,
            };
            solve_fort_cover(&g, FortSource::new(strategy, facets), connect, backend.as_ref(), limit)?
        }
        MethodArg::Bounded => {
            let t = args.t.context("--method bounded needs --T")?;
            if t == 0 {
                bail!("--T must be at least 1");
            }
            solve_bounded_timestep(&g, t, backend.as_ref(), limit)?
        }
        other => {
            let name = match other {
                MethodArg::Wavefront => "wavefront",
                MethodArg::Brute => "brute",
                MethodArg::BruteConnected => "brute-connected",
                MethodArg::Bnb => "bnb",
                MethodArg::Infection => "infection",
                MethodArg::Extended => "extended",
                MethodArg::FortCover | MethodArg::Bounded => unreachable!(),
            };
            solve_by_name(name, &g, backend.as_ref(), limit).map_err(|e| anyhow!(e))?
        }
    };
    println!("{}", serde_json::to_string_pretty(&out.to_json())?);
    Ok(())
}

fn gen_cmd(args: GenArgs) -> anyhow::Result<()> {
    let g = match args.family {
        FamilyArg::Path => gen_path(args.n)?,
        FamilyArg::Cycle => gen_cycle(args.n)?,
        FamilyArg::Star => gen_star(args.n)?,
        FamilyArg::Complete => gen_complete(args.n)?,
        FamilyArg::Cubic => gen_cubic(args.n, args.seed)?,
        FamilyArg::Watts => gen_watts_strogatz(args.n, args.k, args.beta, args.seed)?,
    };
    match &args.out {
        Some(path) => save_graph_path(&g, path)?,
        None => save_graph(&g, std::io::stdout().lock(), GraphFormat::EdgeList)?,
    }
    Ok(())
}

fn forts_cmd(args: FortsArgs) -> anyhow::Result<()> {
    let g = load_graph_path(&args.path)?;
    let mut stdout = std::io::stdout().lock();
    if args.all {
        let mut forts = enumerate_forts(&g, args.limit)
            .map_err(|n| anyhow!("{n} vertices exceeds --limit {}", args.limit))?;
        forts.sort_by_key(|f| (f.card(), f.set().to_vec()));
        for f in &forts {
            writeln!(stdout, "{}", join_ids(&f.set().to_vec()))?;
        }
        eprintln!("{} forts", forts.len());
        return Ok(());
    }
    match find_min_fort_ip(&g, &zeroforcing::VertexSet::empty(g.n()), &InternalBackend, None)? {
        SubSearch::Found(f) => {
            writeln!(stdout, "{}", join_ids(&f.set().to_vec()))?;
            eprintln!("minimum fort, {} vertices", f.card());
        }
        SubSearch::Exhausted => eprintln!("no forts (empty graph)"),
        SubSearch::TimedOut => bail!("fort search timed out"),
    }
    Ok(())
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn bench_cmd(args: BenchArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let config = BenchConfig::from_toml(&text)?;
    let records = run_bench(&config, args.jobs)?;
    append_csv(&args.out, &records)?;
    print!("{}", render_summary(&summarize(&records)));
    eprintln!("{} rows appended to {}", records.len(), args.out.display());
    Ok(())
}

/// All methods that should agree on this instance, by variant.
fn check_methods(g: &Graph) -> (Vec<&'static str>, Vec<&'static str>) {
    let mut z = vec!["wavefront", "infection", "fort-cover", "extended"];
    let mut zc = Vec::new();
    if g.n() <= 15 {
        z.push("brute");
    }
    if g.is_connected() && g.n() >= 2 {
        zc.extend(["bnb", "fort-cover-mtz", "fort-cover-absep"]);
        if g.n() <= 15 {
            zc.push("brute-connected");
        }
    }
    (z, zc)
}

fn check_cmd(args: CheckArgs) -> anyhow::Result<()> {
    let g = load_graph_path(&args.path)?;
    let limit = time_limit(args.time_limit);
    let (z_methods, zc_methods) = check_methods(&g);
    let mut failed = false;
    let mut agree = |label: &str, methods: &[&str]| -> Option<usize> {
        let mut proven: Vec<(&str, usize)> = Vec::new();
        for &name in methods {
            match solve_by_name(name, &g, &InternalBackend, limit) {
                Ok(out) => {
                    report(label, name, &out);
                    if out.status == SolveStatus::Optimal {
                        proven.push((name, out.best_value.unwrap()));
                    }
                }
                Err(e) => {
                    println!("{label:<3} {name:<18} error: {e}");
                    failed = true;
                }
            }
        }
        if proven.is_empty() {
            if !methods.is_empty() {
                println!("{label:<3} nothing proven optimal");
                failed = true;
            }
            return None;
        }
        let value = proven[0].1;
        if proven.iter().any(|&(_, v)| v != value) {
            println!("{label:<3} DISAGREEMENT: {proven:?}");
            failed = true;
            return None;
        }
        Some(value)
    };
    let z = agree("Z", &z_methods);
    let zc = agree("Zc", &zc_methods);
    if let (Some(z), Some(zc)) = (z, zc) {
        if zc < z {
            println!("Zc = {zc} < Z = {z}: connected forcing can never be cheaper");
            failed = true;
        }
    }
    if failed {
        std::process::exit(2);
    }
    match (z, zc) {
        (Some(z), Some(zc)) => println!("agreement: Z = {z}, Zc = {zc}"),
        (Some(z), None) => println!("agreement: Z = {z}"),
        _ => {}
    }
    Ok(())
}

fn milp_cmd(args: MilpArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.lp)
        .with_context(|| format!("reading {}", args.lp.display()))?;
    let model = zeroforcing::milp::parse_lp(&text).map_err(|e| anyhow!("{e}"))?;
    let out = InternalBackend.solve(&model, None, time_limit(args.time_limit))?;
    let mut body = String::new();
    use std::fmt::Write as _;
    match out.status {
        zeroforcing::milp::MilpStatus::Optimal => writeln!(body, "optimal")?,
        zeroforcing::milp::MilpStatus::Timeout => writeln!(body, "timeout")?,
        zeroforcing::milp::MilpStatus::Infeasible => writeln!(body, "infeasible")?,
    }
    if let Some(values) = &out.values {
        for (var, value) in model.vars().iter().zip(values) {
            writeln!(body, "{} {}", var.name, value)?;
        }
    }
    std::fs::write(&args.sol, body)?;
    Ok(())
}

fn report(label: &str, name: &str, out: &SolveOutcome) {
    let value = match (out.status, out.best_value) {
        (SolveStatus::Optimal, Some(v)) => format!("{v}"),
        (_, Some(v)) => format!("[{}, {v}]", out.lower_bound),
        (_, None) => format!("[{}, ?]", out.lower_bound),
    };
    println!(
        "{label:<3} {name:<18} {:<10} {value:<10} {:.3}s",
        format!("{:?}", out.status).to_lowercase(),
        out.wall.as_secs_f64()
    );
}
