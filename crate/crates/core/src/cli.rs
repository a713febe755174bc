//! Command-line front end: `anf`, `metrics` and `bench`.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 input error, 3 an
//! undefined metric under `--strict`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{load_edge_list_path, Graph, LoadReport};
use crate::hyperball::{run_hyperball, BallMode, BallTable, HyperBallConfig};
use crate::metrics::{
    avg_clustering, dispersion_index, distance_distribution, small_world_coefficient, DistanceDistribution,
    SmallWorldConfig,
};
use crate::oracle::{bfs_balls, exact_distance_counts, OracleConfig};
use crate::Mode;

pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hyperball", version, about = "Neighbourhood-function estimation with HyperBall")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute per-node ball sizes and report the wall-clock time.
    Anf(CommonArgs),
    /// Average path length, distance distribution, dispersion, clustering and small-world coefficient.
    Metrics(CommonArgs),
    /// Time BFS, sequential HyperBall and parallel HyperBall on the same graph.
    Bench(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    /// Binary ball table (`anf` only).
    Binary,
}

#[derive(Clone, Debug, Args)]
struct CommonArgs {
    /// Edge list, plain or gzip.
    input: PathBuf,
    /// Treat arcs as directed instead of symmetrizing.
    #[arg(long)]
    directed: bool,
    /// HyperLogLog precision bits.
    #[arg(short = 'p', long, default_value_t = 14)]
    precision: u8,
    /// MinHash signature size.
    #[arg(long, default_value_t = crate::sketch::DEFAULT_K)]
    minhash_k: usize,
    /// Radius cap for HyperBall and truncated BFS.
    #[arg(long, default_value_t = 10)]
    max_depth: usize,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Estimate)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Where to write the machine-readable artifact.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Wall-clock budget per timed run.
    #[arg(long, default_value_t = 3600.0)]
    budget_secs: f64,
    /// Exit with code 3 when any metric is undefined.
    #[arg(long)]
    strict: bool,
    /// Run oracle BFS sources in parallel (ignored by `bench`).
    #[arg(long)]
    parallel_oracle: bool,
    /// Write each HyperBall round's ball sizes under this directory.
    #[arg(long)]
    spill_dir: Option<PathBuf>,
}

/// Resolved run configuration; echoed into every artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub input: PathBuf,
    pub directed: bool,
    pub precision: u8,
    pub minhash_k: usize,
    pub max_depth: usize,
    pub threads: usize,
    pub seed: u64,
    pub mode: Mode,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub budget_secs: f64,
    pub strict: bool,
    pub parallel_oracle: bool,
    pub spill_dir: Option<PathBuf>,
}

impl RunConfig {
    fn from_args(command: &str, a: CommonArgs) -> Self {
        let threads = a
            .threads
            .filter(|&t| t > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Self {
            command: command.to_owned(),
            input: a.input,
            directed: a.directed,
            precision: a.precision,
            minhash_k: a.minhash_k,
            max_depth: a.max_depth,
            threads,
            seed: a.seed,
            mode: a.mode,
            format: a.format,
            output: a.output,
            budget_secs: a.budget_secs,
            strict: a.strict,
            parallel_oracle: a.parallel_oracle,
            spill_dir: a.spill_dir,
        }
    }

    pub fn budget(&self) -> Duration {
        Duration::from_secs_f64(self.budget_secs.max(0.0))
    }

    pub fn hyperball(&self, mode: BallMode, threads: usize) -> HyperBallConfig {
        HyperBallConfig {
            precision: self.precision,
            max_depth: self.max_depth,
            mode,
            seed: self.seed,
            threads,
            spill_dir: self.spill_dir.clone(),
            budget: Some(self.budget()),
        }
    }

    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// `h:mm:ss.µµµµµµ`.
pub fn format_duration(d: Duration) -> String {
    let total = d.as_secs();
    format!("{}:{:02}:{:02}.{:06}", total / 3600, (total / 60) % 60, total % 60, d.subsec_micros())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Config(_) | Error::Capacity { .. } => EXIT_USAGE,
        Error::UndefinedMetric(_) => EXIT_UNDEFINED,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Anf(a) => cmd_anf(&RunConfig::from_args("anf", a)),
        Command::Metrics(a) => cmd_metrics(&RunConfig::from_args("metrics", a)),
        Command::Bench(a) => cmd_bench(&RunConfig::from_args("bench", a)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load(config: &RunConfig) -> Result<(Graph, LoadReport)> {
    let (g, report) = load_edge_list_path(&config.input, config.directed)?;
    log::info!("loaded {} nodes, {} edges from {}", g.num_nodes(), g.num_edges(), config.input.display());
    Ok((g, report))
}

fn open_output(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn check_params(config: &RunConfig) -> Result<()> {
    crate::sketch::check_precision(config.precision)?;
    if config.max_depth == 0 {
        return Err(Error::Parameter("--max-depth must be at least 1".into()));
    }
    if config.minhash_k == 0 {
        return Err(Error::Parameter("--minhash-k must be positive".into()));
    }
    Ok(())
}

fn ball_table(g: &Graph, config: &RunConfig) -> Result<BallTable> {
    match config.mode {
        Mode::Estimate => run_hyperball(g, &config.hyperball(BallMode::Estimate, config.threads)),
        Mode::Exact => run_hyperball(g, &config.hyperball(BallMode::Exact, config.threads)),
        Mode::Oracle => {
            let threads = if config.parallel_oracle { config.threads } else { 1 };
            let oracle = OracleConfig { max_depth: config.max_depth, threads, budget: Some(config.budget()) };
            Ok(bfs_balls(g, &oracle)?.to_ball_table(false))
        }
    }
}

/// Ball sizes for every node, timed.
pub fn cmd_anf(config: &RunConfig) -> Result<i32> {
    check_params(config)?;
    let (g, _) = load(config)?;
    let start = Instant::now();
    let table = ball_table(&g, config)?;
    let elapsed = start.elapsed();

    let mut out = io::stdout().lock();
    writeln!(out, "nodes {}  edges {}  radii {}", g.num_nodes(), g.num_edges(), table.num_radii())?;
    writeln!(out, "t\tsum_v |B(v,t)|")?;
    for (t, s) in table.aggregate().iter().enumerate() {
        writeln!(out, "{t}\t{s:.3}")?;
    }
    writeln!(out, "time {}", format_duration(elapsed))?;

    if let Some(path) = &config.output {
        let config_json = config.to_json().to_string();
        let mut w = open_output(path)?;
        match config.format {
            OutputFormat::Csv => {
                table.write_csv(&mut w, &[format!("format_version={FORMAT_VERSION}"), format!("config={config_json}")])?
            }
            OutputFormat::Binary => {
                let meta = json!({ "format_version": FORMAT_VERSION, "config": config.to_json() }).to_string();
                table.write_binary(&mut w, &meta)?
            }
            OutputFormat::Json => {
                let rows: Vec<&[f64]> = (0..table.num_nodes()).map(|v| table.row(v)).collect();
                let doc = json!({
                    "format_version": FORMAT_VERSION,
                    "config": config.to_json(),
                    "nodes": table.num_nodes(),
                    "num_radii": table.num_radii(),
                    "converged": table.converged(),
                    "aggregate": table.aggregate(),
                    "ball_sizes": rows,
                });
                serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::from)?;
                writeln!(w)?;
            }
        }
        w.flush()?;
    }
    Ok(EXIT_OK)
}

fn metric<T: Serialize>(r: &Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("metric serializes"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Distance metrics and the small-world report as one JSON document.
pub fn metrics_report(g: &Graph, report: &LoadReport, config: &RunConfig) -> Result<(Value, bool)> {
    let distribution: Result<DistanceDistribution> = match config.mode {
        Mode::Oracle => {
            let threads = if config.parallel_oracle { config.threads } else { 1 };
            exact_distance_counts(g, threads).map(|c| DistanceDistribution::from_exact(&c))
        }
        mode => {
            let ball = if mode == Mode::Exact { BallMode::Exact } else { BallMode::Estimate };
            let mut hb = config.hyperball(ball, config.threads);
            hb.budget = None;
            run_hyperball(g, &hb).map(|t| distance_distribution(&t))
        }
    };
    let apl = distribution.as_ref().map_err(clone_err).and_then(DistanceDistribution::mean);
    let dispersion = distribution.as_ref().map_err(clone_err).and_then(dispersion_index);
    let clustering = avg_clustering(g);
    let sw_config = SmallWorldConfig {
        mode: config.mode,
        hyperball: HyperBallConfig { budget: None, spill_dir: None, ..config.hyperball(BallMode::Estimate, config.threads) },
        random_seed: config.seed,
        ..Default::default()
    };
    let small_world = small_world_coefficient(g, &sw_config);
    let any_undefined = [apl.is_err(), dispersion.is_err(), clustering.is_err(), small_world.is_err()]
        .into_iter()
        .any(|e| e);
    let doc = json!({
        "format_version": FORMAT_VERSION,
        "config": config.to_json(),
        "graph": { "nodes": g.num_nodes(), "edges": g.num_edges(), "directed": g.is_directed(), "load": report },
        "average_path_length": metric(&apl),
        "distance_distribution": metric(&distribution),
        "dispersion_index": metric(&dispersion),
        "clustering": metric(&clustering),
        "small_world": metric(&small_world),
    });
    Ok((doc, any_undefined))
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::UndefinedMetric(m) => Error::UndefinedMetric(m.clone()),
        other => Error::UndefinedMetric(other.to_string()),
    }
}

pub fn cmd_metrics(config: &RunConfig) -> Result<i32> {
    check_params(config)?;
    let (g, report) = load(config)?;
    let (doc, any_undefined) = metrics_report(&g, &report, config)?;
    let write = |w: &mut dyn Write| -> Result<()> {
        match config.format {
            OutputFormat::Csv => {
                writeln!(w, "metric,value")?;
                for key in ["average_path_length", "dispersion_index", "clustering"] {
                    writeln!(w, "{key},{}", doc[key].as_f64().map_or("NaN".into(), |v| v.to_string()))?;
                }
                for key in ["l", "c", "omega"] {
                    let v = doc["small_world"][key].as_f64().map_or("NaN".into(), |v| v.to_string());
                    writeln!(w, "small_world.{key},{v}")?;
                }
            }
            _ => {
                serde_json::to_writer_pretty(&mut *w, &doc).map_err(io::Error::from)?;
                writeln!(w)?;
            }
        }
        Ok(())
    };
    match &config.output {
        Some(path) => {
            let mut w = open_output(path)?;
            write(&mut w)?;
            w.flush()?;
        }
        None => write(&mut io::stdout().lock())?,
    }
    Ok(if any_undefined && config.strict { EXIT_UNDEFINED } else { EXIT_OK })
}

/// Outcome of one timed benchmark column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum BenchCell {
    Done { seconds: f64 },
    Exceeded { budget_seconds: f64 },
}

impl BenchCell {
    fn time<T>(f: impl FnOnce() -> Result<T>) -> Result<Self> {
        let start = Instant::now();
        match f() {
            Ok(_) => Ok(Self::Done { seconds: start.elapsed().as_secs_f64() }),
            Err(Error::BudgetExceeded(b)) => Ok(Self::Exceeded { budget_seconds: b }),
            Err(e) => Err(e),
        }
    }

    pub fn seconds(&self) -> Option<f64> {
        match self {
            Self::Done { seconds } => Some(*seconds),
            Self::Exceeded { .. } => None,
        }
    }

    fn display(&self) -> String {
        match self {
            Self::Done { seconds } => format_duration(Duration::from_secs_f64(*seconds)),
            Self::Exceeded { budget_seconds } => format!("> {}", format_duration(Duration::from_secs_f64(*budget_seconds))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub graph: String,
    pub nodes: usize,
    pub edges: usize,
    pub bfs_sequential: BenchCell,
    pub hyperball_sequential: BenchCell,
    pub hyperball_parallel: BenchCell,
}

/// Times BFS, sequential HyperBall and parallel HyperBall on `g`.
pub fn bench_graph(name: &str, g: &Graph, config: &RunConfig) -> Result<BenchRow> {
    let oracle = OracleConfig { max_depth: config.max_depth, threads: 1, budget: Some(config.budget()) };
    let bfs_sequential = BenchCell::time(|| bfs_balls(g, &oracle))?;
    let hyperball_sequential =
        BenchCell::time(|| run_hyperball(g, &HyperBallConfig { spill_dir: None, ..config.hyperball(BallMode::Estimate, 1) }))?;
    let hyperball_parallel = BenchCell::time(|| {
        run_hyperball(g, &HyperBallConfig { spill_dir: None, ..config.hyperball(BallMode::Estimate, config.threads) })
    })?;
    Ok(BenchRow {
        graph: name.to_owned(),
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        bfs_sequential,
        hyperball_sequential,
        hyperball_parallel,
    })
}

pub fn render_bench_table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    s.push_str("|          |        |          | Bfs               | HyperBall         |                   |\n");
    s.push_str("| Graph    | Nodes  | Edges    | Sequential        | Sequential        | Parallel          |\n");
    s.push_str("|----------|--------|----------|-------------------|-------------------|-------------------|\n");
    for r in rows {
        s.push_str(&format!(
            "| {:<8} | {:>6} | {:>8} | {:<17} | {:<17} | {:<17} |\n",
            r.graph,
            r.nodes,
            r.edges,
            r.bfs_sequential.display(),
            r.hyperball_sequential.display(),
            r.hyperball_parallel.display()
        ));
    }
    s
}

pub fn cmd_bench(config: &RunConfig) -> Result<i32> {
    check_params(config)?;
    let (g, _) = load(config)?;
    let name = config.input.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
    let name = name.trim_end_matches(".txt").to_owned();
    let row = bench_graph(&name, &g, config)?;
    print!("{}", render_bench_table(std::slice::from_ref(&row)));
    if let Some(path) = &config.output {
        let doc = json!({ "format_version": FORMAT_VERSION, "config": config.to_json(), "rows": [row] });
        let mut w = open_output(path)?;
        serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::from)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(EXIT_OK)
}
