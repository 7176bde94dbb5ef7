//! `ilmsa` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or schema error, 3 no path (including a
//! blocked start or goal), 4 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ilmsa::bench::plot::{bar_chart_svg, path_svg, sweep_chart_svg, write_svg};
use ilmsa::bench::stats::{kruskal_wallis, mann_whitney_u_labeled, Alternative, StatResult};
use ilmsa::bench::{
    export_csv, group_by_algorithm, import_csv, plan, planned_path_to_json, run_trials, summarize, Algorithm,
    BenchError, Metric, PlanFailure, PlanningScene, Suite, TrialOptions,
};
use ilmsa::config::{ConfigError, RunConfig};
use ilmsa::environment::{
    environment2d_to_json, environment_to_json, generate_scenario, load_any_environment, load_environment,
    project_to_xoz, EnvError, ScenarioSpec,
};
use ilmsa::io::write_atomic;
use ilmsa::planner3d::ObstacleProjection;

#[derive(Debug, Parser)]
#[command(name = "ilmsa", version, about = "Local-minima search path planning among box obstacles, with baselines and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded scenario of stem-extended fruit boxes.
    GenEnv(GenEnvArgs),
    /// Plan one path and write it as JSON.
    Plan(PlanArgs),
    /// Project a 3D environment onto its x-z side view.
    Project(ProjectArgs),
    /// Run every (scenario, algorithm, trial) of a suite and write CSV records.
    Bench(BenchArgs),
    /// Compare algorithms on one metric of a results CSV; prints JSON.
    Stats(StatsArgs),
    /// Draw a results CSV as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct GenEnvArgs {
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of fruit boxes.
    #[arg(long, default_value_t = 13)]
    fruits: usize,
    /// Workspace bounds XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX in mm.
    #[arg(long, value_parser = parse_floats::<6>, default_value = "0,500,0,300,0,500")]
    bounds: [f64; 6],
    /// Start point X,Y,Z in mm.
    #[arg(long, value_parser = parse_floats::<3>, default_value = "40,120,280", allow_hyphen_values = true)]
    start: [f64; 3],
    /// Goal point X,Y,Z in mm.
    #[arg(long, value_parser = parse_floats::<3>, default_value = "465,145,330", allow_hyphen_values = true)]
    end: [f64; 3],
    /// Fruit box size DX,DY,DZ in mm before stem extension.
    #[arg(long, value_parser = parse_floats::<3>, default_value = "40,40,40")]
    fruit_size: [f64; 3],
    /// Clearance kept between boxes, start and goal, in mm.
    #[arg(long, default_value_t = 5.0)]
    margin: f64,
    /// Also keep start and goal clear in the x-z side view.
    #[arg(long)]
    planar_clearance: bool,
    /// Output environment JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProjectionArg {
    Section,
    Intersecting,
    All,
}

impl From<ProjectionArg> for ObstacleProjection {
    fn from(p: ProjectionArg) -> Self {
        match p {
            ProjectionArg::Section => ObstacleProjection::Section,
            ProjectionArg::Intersecting => ObstacleProjection::Intersecting,
            ProjectionArg::All => ObstacleProjection::All,
        }
    }
}

/// Settings shared by `plan` and `bench`. Flags override the config file,
/// which overrides the built-in defaults.
#[derive(Debug, Args)]
struct ConfigArgs {
    /// JSON run configuration (sections: planner, sweep, spline, weights, baseline, outputs).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Safe distance e in mm for every planner [default: 5].
    #[arg(long)]
    safe_distance: Option<f64>,
    /// Plane-sweep step in degrees [default: 5].
    #[arg(long)]
    delta_theta: Option<f64>,
    /// Obstacle shape seen by each swept plane [default: section].
    #[arg(long, value_enum)]
    projection: Option<ProjectionArg>,
    /// Plan the swept planes in parallel.
    #[arg(long)]
    parallel_sweep: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p).map_err(Failure::from)?,
            None => RunConfig::default(),
        };
        if let Some(e) = self.safe_distance {
            cfg.planner.safe_distance = e;
            cfg.baseline.clearance_e = e;
        }
        if let Some(d) = self.delta_theta {
            cfg.sweep.delta_theta = d;
        }
        if let Some(p) = self.projection {
            cfg.sweep.projection = p.into();
        }
        if self.parallel_sweep {
            cfg.sweep.parallel = true;
        }
        cfg.validate().map_err(Failure::from)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Environment JSON (3D or 2D).
    #[arg(long)]
    env: PathBuf,
    /// ilmsa3d, ilmsa2d, astar, rrt, rrt-connect, rrt3d or lps.
    #[arg(long, default_value = "ilmsa3d")]
    algo: String,
    /// Seed for the sampling planners.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path JSON.
    #[arg(long)]
    out: PathBuf,
    /// Also draw the path in the x-z side view [default: config outputs.svg].
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    /// 3D environment JSON.
    #[arg(long)]
    env: PathBuf,
    /// Output 2D environment JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Suite JSON: {"scenarios": [{"id", "env": path} | {"id", "generate": spec}]}.
    #[arg(long)]
    suite: PathBuf,
    /// Comma-separated algorithms.
    #[arg(long, default_value = "ilmsa3d,lps,rrt3d")]
    algos: String,
    /// Trials per scenario and algorithm.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
    /// Run trials concurrently (record order is unchanged; timings interfere).
    #[arg(long)]
    parallel: bool,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TestArg {
    MannWhitney,
    KruskalWallis,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlternativeArg {
    TwoSided,
    Less,
    Greater,
}

impl From<AlternativeArg> for Alternative {
    fn from(a: AlternativeArg) -> Self {
        match a {
            AlternativeArg::TwoSided => Alternative::TwoSided,
            AlternativeArg::Less => Alternative::Less,
            AlternativeArg::Greater => Alternative::Greater,
        }
    }
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Results CSV written by `bench`.
    #[arg(long)]
    results: PathBuf,
    /// length, time, nodes, key-nodes, clearance, smoothness or score.
    #[arg(long, default_value = "length")]
    metric: String,
    #[arg(long, value_enum, default_value = "mann-whitney")]
    test: TestArg,
    /// Comma-separated algorithm labels; Mann-Whitney takes exactly two.
    #[arg(long)]
    groups: String,
    /// Alternative hypothesis for Mann-Whitney, stated for the first group.
    #[arg(long, value_enum, default_value = "two-sided")]
    alternative: AlternativeArg,
    /// Also write the JSON result to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlotKind {
    /// Mean ± standard deviation per algorithm.
    Bars,
    /// Mean per obstacle count, one panel per metric.
    Sweep,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Results CSV written by `bench`.
    #[arg(long)]
    results: PathBuf,
    /// Metric, or comma-separated metrics for a sweep plot.
    #[arg(long, default_value = "length")]
    metric: String,
    #[arg(long, value_enum, default_value = "bars")]
    kind: PlotKind,
    /// Output SVG.
    #[arg(long)]
    out: PathBuf,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; N] = vals.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))?;
    if arr.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(arr)
}

/// A failure with its exit code.
#[derive(Debug)]
enum Failure {
    Schema(String),
    NoPath(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Schema(_) => 2,
            Failure::NoPath(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Schema(m) | Failure::NoPath(m) | Failure::Io(m) => m,
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }
}

impl From<EnvError> for Failure {
    fn from(e: EnvError) -> Self {
        match e {
            EnvError::Io { .. } => Failure::Io(e.to_string()),
            EnvError::EndpointBlocked { .. } => Failure::NoPath(e.to_string()),
            other => Failure::Schema(other.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Schema(other.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Schema(other.to_string()),
        }
    }
}

impl From<PlanFailure> for Failure {
    fn from(e: PlanFailure) -> Self {
        if e.is_no_path() {
            Failure::NoPath(e.to_string())
        } else {
            Failure::Schema(e.to_string())
        }
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    write_atomic(path, bytes).map_err(|e| Failure::io(path, e))
}

fn gen_env(a: GenEnvArgs) -> Result<(), Failure> {
    let spec = ScenarioSpec {
        seed: a.seed,
        fruits: a.fruits,
        bounds: a.bounds,
        start: a.start,
        end: a.end,
        fruit_size: a.fruit_size,
        margin: a.margin,
        planar_clearance: a.planar_clearance,
    };
    let env = generate_scenario(&spec)?;
    write_output(&a.out, environment_to_json(&env).as_bytes())
}

fn plan_cmd(a: PlanArgs) -> Result<(), Failure> {
    let algorithm: Algorithm = a.algo.parse()?;
    let config = a.config.resolve()?;
    let scene = PlanningScene::new(load_any_environment(&a.env)?);
    let t0 = Instant::now();
    let planned = plan(algorithm, &scene, &config, a.seed)?;
    let planning_time_ms = t0.elapsed().as_secs_f64() * 1e3;
    let summary = summarize(&planned, &scene);
    let json = planned_path_to_json(&planned, &summary, planning_time_ms);
    write_output(&a.out, json.as_bytes())?;
    if let Some(svg) = a.svg.or(config.outputs.svg) {
        write_output(&svg, path_svg(&scene, &planned).as_bytes())?;
    }
    eprintln!(
        "{}: length {:.1} mm, clearance {:.2} mm, {} key nodes, {:.3} ms",
        algorithm,
        summary.metrics.length,
        summary.metrics.min_clearance,
        summary.key_node_count,
        planning_time_ms
    );
    Ok(())
}

fn project_cmd(a: ProjectArgs) -> Result<(), Failure> {
    let env = load_environment(&a.env)?;
    let planar = project_to_xoz(&env);
    if let Err(e) = planar.validate_with_margin(RunConfig::default().planner.safe_distance) {
        eprintln!("warning: projected environment is not plannable as is: {e}");
    }
    write_output(&a.out, environment2d_to_json(&planar).as_bytes())
}

fn bench_cmd(a: BenchArgs) -> Result<(), Failure> {
    let algos = Algorithm::parse_list(&a.algos)?;
    let config = a.config.resolve()?;
    let suite = Suite::load(&a.suite)?;
    let records = run_trials(&suite, &algos, a.trials, a.seed, &config, TrialOptions { parallel: a.parallel })?;
    export_csv(&records, &a.out)?;
    for algo in &algos {
        let g = group_by_algorithm(&records, Metric::Length, algo.label());
        let mean = ilmsa::bench::mean(&g.values).map_or("-".to_string(), |m| format!("{m:.1}"));
        eprintln!("{:<16} success {:>5.1}%  mean length {mean} mm", algo.label(), 100.0 * g.success_rate());
    }
    Ok(())
}

fn stats_cmd(a: StatsArgs) -> Result<(), Failure> {
    let metric: Metric = a.metric.parse()?;
    let labels: Vec<&str> = a.groups.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let records = import_csv(&a.results)?;
    let groups: Vec<_> = labels.iter().map(|l| group_by_algorithm(&records, metric, l)).collect();
    let values: Vec<&[f64]> = groups.iter().map(|g| g.values.as_slice()).collect();
    let stat_err = |e: ilmsa::bench::stats::StatsError| Failure::Schema(e.to_string());
    let mut result: StatResult = match a.test {
        TestArg::MannWhitney => {
            let [x, y] = values[..] else {
                return Err(Failure::Schema(format!("mann-whitney needs exactly two groups, got {}", labels.len())));
            };
            mann_whitney_u_labeled(x, y, a.alternative.into(), [labels[0], labels[1]]).map_err(stat_err)?
        }
        TestArg::KruskalWallis => kruskal_wallis(&values, &labels).map_err(stat_err)?,
    };
    result.success_rate = Some(groups.iter().map(|g| g.success_rate()).collect());
    let json = serde_json::to_string_pretty(&result).expect("stat results serialize") + "\n";
    if let Some(out) = &a.out {
        write_output(out, json.as_bytes())?;
    }
    print!("{json}");
    Ok(())
}

fn plot_cmd(a: PlotArgs) -> Result<(), Failure> {
    let metrics = Metric::parse_list(&a.metric)?;
    let records = import_csv(&a.results)?;
    let svg = match a.kind {
        PlotKind::Bars => {
            let [metric] = metrics[..] else {
                return Err(Failure::Schema("a bar plot takes exactly one metric".into()));
            };
            bar_chart_svg(&records, metric)?
        }
        PlotKind::Sweep => sweep_chart_svg(&records, &metrics)?,
    };
    Ok(write_svg(&svg, &a.out)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GenEnv(a) => gen_env(a),
        Command::Plan(a) => plan_cmd(a),
        Command::Project(a) => project_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Plot(a) => plot_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
