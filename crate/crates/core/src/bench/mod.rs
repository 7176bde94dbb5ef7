//! Benchmark harness: a uniform entry point over every planner, seeded
//! scenario suites, the trial runner and CSV persistence of its records.
//!
//! Statistics over the records live in [`stats`], SVG figures in [`plot`].

pub mod plot;
pub mod stats;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{self, BaselineConfig, BaselineError, RRT3D_LABEL};
use crate::config::RunConfig;
use crate::environment::{
    generate_scenario, load_any_environment, project_to_xoz, AnyEnvironment, EnvError, Environment, Environment2D,
    ScenarioSpec,
};
use crate::evaluation::{densified_count, measure_path, PathMetrics, DENSIFY_STEP_MM};
use crate::ilmsa2d::{plan_environment_2d, Path2D, PlanError};
use crate::planner3d::{plan_3d, Path3D, Plan3DError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown algorithm `{0}` (expected one of ilmsa2d, ilmsa3d, astar, rrt, rrt-connect, rrt3d, lps)")]
    UnknownAlgorithm(String),
    #[error("unknown metric `{0}` (expected one of length, time, nodes, key-nodes, clearance, smoothness, score)")]
    UnknownMetric(String),
    #[error("n_trials must be at least 1")]
    NoTrials,
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("scenario `{id}`: {message}")]
    Scenario { id: String, message: String },
    #[error("suite schema violation at `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("no records to process")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

// ------------------------------------------------------------ planners ----

/// Every planner the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ilmsa2d,
    Ilmsa3d,
    Astar,
    Rrt,
    RrtConnect,
    /// Goal-biased 3D RRT, the stand-in for the target-directed 3D-RRT.
    Rrt3d,
    Lps,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Ilmsa2d,
        Algorithm::Ilmsa3d,
        Algorithm::Astar,
        Algorithm::Rrt,
        Algorithm::RrtConnect,
        Algorithm::Rrt3d,
        Algorithm::Lps,
    ];

    /// Name written to outputs.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Ilmsa2d => "ilmsa2d",
            Algorithm::Ilmsa3d => "ilmsa3d",
            Algorithm::Astar => "astar",
            Algorithm::Rrt => "rrt",
            Algorithm::RrtConnect => "rrt-connect",
            Algorithm::Rrt3d => RRT3D_LABEL,
            Algorithm::Lps => "lps",
        }
    }

    /// Planners that work in the `x-z` side view.
    pub fn is_planar(self) -> bool {
        matches!(self, Algorithm::Ilmsa2d | Algorithm::Astar | Algorithm::Rrt | Algorithm::RrtConnect)
    }

    /// Whether the seed changes the result.
    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::Rrt | Algorithm::RrtConnect | Algorithm::Rrt3d)
    }

    /// Parses a comma-separated list such as `ilmsa3d,lps,rrt3d`.
    pub fn parse_list(s: &str) -> Result<Vec<Algorithm>, BenchError> {
        let algos = s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect::<Result<Vec<_>, _>>()?;
        if algos.is_empty() {
            return Err(BenchError::NoAlgorithms);
        }
        Ok(algos)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ilmsa2d" => Algorithm::Ilmsa2d,
            "ilmsa3d" | "ilmsa" => Algorithm::Ilmsa3d,
            "astar" | "a*" => Algorithm::Astar,
            "rrt" => Algorithm::Rrt,
            "rrt-connect" | "rrtconnect" => Algorithm::RrtConnect,
            "rrt3d" | "rrt3d-goalbias" => Algorithm::Rrt3d,
            "lps" => Algorithm::Lps,
            _ => return Err(BenchError::UnknownAlgorithm(s.into())),
        })
    }
}

/// An environment prepared for every planner: 3D scenes also carry their
/// side-view projection so planar planners need no work inside the timed
/// region.
#[derive(Debug, Clone)]
pub struct PlanningScene {
    spatial: Option<Environment>,
    planar: Environment2D,
}

impl PlanningScene {
    pub fn new(env: AnyEnvironment) -> Self {
        match env {
            AnyEnvironment::Spatial(e) => Self { planar: project_to_xoz(&e), spatial: Some(e) },
            AnyEnvironment::Planar(p) => Self { spatial: None, planar: p },
        }
    }

    pub fn spatial(&self) -> Option<&Environment> {
        self.spatial.as_ref()
    }

    pub fn planar(&self) -> &Environment2D {
        &self.planar
    }
}

/// Raw planner output.
#[derive(Debug, Clone, PartialEq)]
pub enum PlannedPath {
    Planar { algorithm: Algorithm, path: Path2D },
    Spatial(Path3D),
}

/// Why a planner produced no path.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanFailure {
    #[error("{which} point is blocked by obstacle `{obstacle_id}`")]
    EndpointBlocked { which: &'static str, obstacle_id: String },
    #[error("no path: {0}")]
    NoPath(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{algorithm} needs a 3D environment")]
    NeedsSpatial { algorithm: Algorithm },
}

impl PlanFailure {
    /// Failures caused by the scene rather than by bad input.
    pub fn is_no_path(&self) -> bool {
        matches!(self, PlanFailure::EndpointBlocked { .. } | PlanFailure::NoPath(_))
    }
}

impl From<BaselineError> for PlanFailure {
    fn from(e: BaselineError) -> Self {
        match e {
            BaselineError::StartOrGoalBlocked { which, obstacle_id } => PlanFailure::EndpointBlocked { which, obstacle_id },
            BaselineError::InvalidConfig(m) => PlanFailure::InvalidConfig(m),
            other => PlanFailure::NoPath(other.to_string()),
        }
    }
}

impl From<Plan3DError> for PlanFailure {
    fn from(e: Plan3DError) -> Self {
        match e {
            Plan3DError::StartOrGoalBlocked { which, obstacle_id } => PlanFailure::EndpointBlocked { which, obstacle_id },
            Plan3DError::InvalidConfig(m) => PlanFailure::InvalidConfig(m),
            other => PlanFailure::NoPath(other.to_string()),
        }
    }
}

fn planar_failure(env: &Environment2D, e: PlanError) -> PlanFailure {
    match e {
        PlanError::StartOrGoalBlocked { which, obstacle } => PlanFailure::EndpointBlocked {
            which,
            obstacle_id: env.obstacles.get(obstacle).map_or_else(|| format!("#{obstacle}"), |o| o.id.clone()),
        },
        PlanError::InvalidConfig(m) => PlanFailure::InvalidConfig(m),
        other => PlanFailure::NoPath(other.to_string()),
    }
}

/// Runs one planner. `seed` drives every random choice of the sampling
/// planners and is ignored by the deterministic ones.
pub fn plan(algorithm: Algorithm, scene: &PlanningScene, config: &RunConfig, seed: u64) -> Result<PlannedPath, PlanFailure> {
    let baseline = BaselineConfig { rng_seed: seed, ..config.baseline };
    let spatial = || scene.spatial().ok_or(PlanFailure::NeedsSpatial { algorithm });
    let planar = scene.planar();
    let wrap = |path: Path2D| PlannedPath::Planar { algorithm, path };
    Ok(match algorithm {
        Algorithm::Ilmsa2d => wrap(plan_environment_2d(planar, &config.planner).map_err(|e| planar_failure(planar, e))?),
        Algorithm::Astar => wrap(baselines::astar_2d(planar, &baseline)?),
        Algorithm::Rrt => wrap(baselines::rrt_2d(planar, &baseline)?),
        Algorithm::RrtConnect => wrap(baselines::rrt_connect_2d(planar, &baseline)?),
        Algorithm::Ilmsa3d => PlannedPath::Spatial(plan_3d(spatial()?, &config.sweep_config())?.best),
        Algorithm::Rrt3d => PlannedPath::Spatial(baselines::rrt_3d(spatial()?, &baseline)?),
        Algorithm::Lps => PlannedPath::Spatial(baselines::lps_3d(spatial()?, &baseline)?),
    })
}

/// Metrics of a planned path as reported by the harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSummary {
    pub metrics: PathMetrics,
    /// Points of the executed path densified at 1 mm.
    pub node_count: usize,
    pub key_node_count: usize,
    /// Quality score; only the plane sweep ranks candidates.
    pub score: Option<f64>,
}

/// Measures a planned path against the raw (uninflated) obstacles.
pub fn summarize(path: &PlannedPath, scene: &PlanningScene) -> PathSummary {
    match path {
        PlannedPath::Spatial(p) => PathSummary {
            metrics: p.metrics,
            node_count: p.node_count(),
            key_node_count: p.key_node_count,
            score: p.score,
        },
        PlannedPath::Planar { algorithm, path } => {
            let metrics = measure_path(&path.nodes, None, &scene.planar().raw_polygons())
                .expect("planners return at least two nodes");
            let key_node_count = match algorithm {
                Algorithm::Ilmsa2d => path.key_nodes.len(),
                _ => path.nodes.len().saturating_sub(2),
            };
            PathSummary { metrics, node_count: densified_count(&path.nodes, DENSIFY_STEP_MM), key_node_count, score: None }
        }
    }
}

#[derive(Serialize)]
struct MetricsJson {
    length_mm: f64,
    clearance_mm: f64,
    smoothness_rad: f64,
    score: Option<f64>,
    planning_time_ms: f64,
    node_count: usize,
}

#[derive(Serialize)]
struct Path2DJson<'a> {
    version: u32,
    units: &'static str,
    algorithm: &'a str,
    /// The side view the nodes live in: `[x, z]` pairs.
    plane: &'static str,
    nodes: Vec<[f64; 2]>,
    key_node_count: usize,
    metrics: MetricsJson,
}

/// Path JSON document for either kind of path.
pub fn planned_path_to_json(path: &PlannedPath, summary: &PathSummary, planning_time_ms: f64) -> String {
    match path {
        PlannedPath::Spatial(p) => crate::planner3d::path_to_json(p, planning_time_ms),
        PlannedPath::Planar { algorithm, path } => {
            let doc = Path2DJson {
                version: 1,
                units: "mm",
                algorithm: algorithm.label(),
                plane: "xoz",
                nodes: path.nodes.iter().map(|q| [q.x, q.z]).collect(),
                key_node_count: summary.key_node_count,
                metrics: MetricsJson {
                    length_mm: summary.metrics.length,
                    clearance_mm: summary.metrics.min_clearance,
                    smoothness_rad: summary.metrics.smoothness,
                    score: summary.score,
                    planning_time_ms,
                    node_count: summary.node_count,
                },
            };
            serde_json::to_string_pretty(&doc).expect("path documents always serialize") + "\n"
        }
    }
}

// --------------------------------------------------------------- suites ----

/// One entry of a suite file: either an environment file (relative to the
/// suite file) or a generator specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<ScenarioSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub scenarios: Vec<ScenarioEntry>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub scene: PlanningScene,
}

/// Scenarios with their environments loaded and validated.
#[derive(Debug, Clone, Default)]
pub struct Suite {
    pub scenarios: Vec<Scenario>,
}

impl Suite {
    pub fn push(&mut self, id: impl Into<String>, env: AnyEnvironment) {
        self.scenarios.push(Scenario { id: id.into(), scene: PlanningScene::new(env) });
    }

    /// Generates each `(id, spec)` scene.
    pub fn generated<I, S>(specs: I) -> Result<Self, BenchError>
    where
        I: IntoIterator<Item = (S, ScenarioSpec)>,
        S: Into<String>,
    {
        let mut suite = Suite::default();
        for (id, spec) in specs {
            let id = id.into();
            let env = generate_scenario(&spec).map_err(|e| BenchError::Scenario { id: id.clone(), message: e.to_string() })?;
            suite.push(id, AnyEnvironment::Spatial(env));
        }
        Ok(suite)
    }

    /// Obstacle-count sweep: `layouts` random scenes per count, seeded
    /// `base.seed`, `base.seed + 1`, ..., with ids `layout<i>-fruits-<count>`.
    pub fn obstacle_sweep(
        base: &ScenarioSpec,
        counts: impl IntoIterator<Item = usize>,
        layouts: u64,
    ) -> Result<Self, BenchError> {
        Self::generated(counts.into_iter().flat_map(|k| {
            (0..layouts).map(move |i| {
                let spec = ScenarioSpec { seed: base.seed + i, ..base.clone() }.with_fruits(k);
                (format!("layout{i}-fruits-{k}"), spec)
            })
        }))
    }

    /// Resolves a parsed suite file; relative `env` paths are taken from
    /// `base_dir`.
    pub fn from_file_contents(file: &SuiteFile, base_dir: &Path) -> Result<Self, BenchError> {
        let mut suite = Suite::default();
        for entry in &file.scenarios {
            let fail = |message: String| BenchError::Scenario { id: entry.id.clone(), message };
            let env = match (&entry.env, &entry.generate) {
                (Some(p), None) => load_any_environment(&base_dir.join(p)).map_err(|e| match e {
                    EnvError::Io { path, source } => BenchError::Io { path, message: source.to_string() },
                    other => fail(other.to_string()),
                })?,
                (None, Some(spec)) => AnyEnvironment::Spatial(generate_scenario(spec).map_err(|e| fail(e.to_string()))?),
                _ => return Err(fail("exactly one of `env` and `generate` must be given".into())),
            };
            suite.push(entry.id.clone(), env);
        }
        Ok(suite)
    }

    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, BenchError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: SuiteFile = serde_path_to_error::deserialize(de)
            .map_err(|e| BenchError::Schema { field: e.path().to_string(), message: e.inner().to_string() })?;
        Self::from_file_contents(&file, base_dir)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Io { path: path.into(), message: e.to_string() })?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

// --------------------------------------------------------------- trials ----

/// One planner run. Failed runs leave every path metric empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRecord {
    pub scenario_id: String,
    pub seed: u64,
    pub algorithm: String,
    pub trial_index: usize,
    pub success: bool,
    pub node_count: Option<usize>,
    pub key_node_count: Option<usize>,
    /// Wall clock around the planner call, recorded for failures too.
    pub planning_time_ms: f64,
    pub length_mm: Option<f64>,
    pub clearance_mm: Option<f64>,
    pub smoothness_rad: Option<f64>,
    pub score: Option<f64>,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "scenario_id",
    "seed",
    "algorithm",
    "trial_index",
    "success",
    "node_count",
    "key_node_count",
    "planning_time_ms",
    "length_mm",
    "clearance_mm",
    "smoothness_rad",
    "score",
];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrialOptions {
    /// Run trials on the rayon pool. Record order is unchanged, but timings
    /// of concurrently running trials interfere.
    pub parallel: bool,
}

/// Runs one trial and records it.
pub fn run_trial(scenario: &Scenario, algorithm: Algorithm, trial_index: usize, seed: u64, config: &RunConfig) -> TrialRecord {
    let t0 = Instant::now();
    let result = plan(algorithm, &scenario.scene, config, seed);
    let planning_time_ms = t0.elapsed().as_secs_f64() * 1e3;
    let summary = result.as_ref().ok().map(|p| summarize(p, &scenario.scene));
    TrialRecord {
        scenario_id: scenario.id.clone(),
        seed,
        algorithm: algorithm.label().into(),
        trial_index,
        success: summary.is_some(),
        node_count: summary.map(|s| s.node_count),
        key_node_count: summary.map(|s| s.key_node_count),
        planning_time_ms,
        length_mm: summary.map(|s| s.metrics.length),
        clearance_mm: summary.map(|s| s.metrics.min_clearance),
        smoothness_rad: summary.map(|s| s.metrics.smoothness),
        score: summary.and_then(|s| s.score),
    }
}

/// Runs every `(scenario, algorithm, trial)` combination, in that nesting
/// order, with `seed = base_seed + trial`. Planner failures become
/// unsuccessful records; only invalid inputs abort the run.
pub fn run_trials(
    suite: &Suite,
    algorithms: &[Algorithm],
    n_trials: usize,
    base_seed: u64,
    config: &RunConfig,
    options: TrialOptions,
) -> Result<Vec<TrialRecord>, BenchError> {
    if n_trials == 0 {
        return Err(BenchError::NoTrials);
    }
    if algorithms.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    config.validate().map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
    for s in &suite.scenarios {
        if let Some(a) = algorithms.iter().find(|a| !a.is_planar() && s.scene.spatial().is_none()) {
            return Err(BenchError::Scenario { id: s.id.clone(), message: format!("{a} needs a 3D environment") });
        }
    }
    let jobs: Vec<(&Scenario, Algorithm, usize)> = suite
        .scenarios
        .iter()
        .flat_map(|s| algorithms.iter().flat_map(move |&a| (0..n_trials).map(move |t| (s, a, t))))
        .collect();
    let run = |&(s, a, t): &(&Scenario, Algorithm, usize)| run_trial(s, a, t, base_seed.wrapping_add(t as u64), config);
    Ok(if options.parallel { jobs.par_iter().map(run).collect() } else { jobs.iter().map(run).collect() })
}

// ------------------------------------------------------------------ CSV ----

/// Serializes records as RFC 4180 CSV with a header row. Floats use the
/// shortest representation that parses back to the same value.
pub fn records_to_csv(records: &[TrialRecord]) -> Result<Vec<u8>, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    }
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| BenchError::InvalidConfig(e.to_string()))
}

pub fn records_from_csv(bytes: &[u8]) -> Result<Vec<TrialRecord>, BenchError> {
    let mut r = csv::Reader::from_reader(bytes);
    let headers = r.headers().map_err(csv_error)?.clone();
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(BenchError::Schema {
            field: "header".into(),
            message: format!("expected columns {}", CSV_COLUMNS.join(",")),
        });
    }
    r.deserialize().collect::<Result<Vec<TrialRecord>, _>>().map_err(csv_error)
}

fn csv_error(e: csv::Error) -> BenchError {
    let field = e.position().map_or_else(|| "csv".to_string(), |p| format!("line {}", p.line()));
    BenchError::Schema { field, message: e.to_string() }
}

/// Writes the CSV atomically.
pub fn export_csv(records: &[TrialRecord], path: &Path) -> Result<(), BenchError> {
    let bytes = records_to_csv(records)?;
    crate::io::write_atomic(path, &bytes).map_err(|e| BenchError::Io { path: path.into(), message: e.to_string() })
}

pub fn import_csv(path: &Path) -> Result<Vec<TrialRecord>, BenchError> {
    let bytes = std::fs::read(path).map_err(|e| BenchError::Io { path: path.into(), message: e.to_string() })?;
    records_from_csv(&bytes)
}

// -------------------------------------------------------------- metrics ----

/// A per-record quantity that statistics and plots can be computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Length,
    PlanningTime,
    NodeCount,
    KeyNodeCount,
    Clearance,
    Smoothness,
    Score,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Length => "length",
            Metric::PlanningTime => "time",
            Metric::NodeCount => "nodes",
            Metric::KeyNodeCount => "key-nodes",
            Metric::Clearance => "clearance",
            Metric::Smoothness => "smoothness",
            Metric::Score => "score",
        }
    }

    /// Axis label including units.
    pub fn axis_label(self) -> &'static str {
        match self {
            Metric::Length => "path length (mm)",
            Metric::PlanningTime => "planning time (ms)",
            Metric::NodeCount => "node count (1 mm densified)",
            Metric::KeyNodeCount => "key nodes",
            Metric::Clearance => "clearance (mm)",
            Metric::Smoothness => "smoothness (rad)",
            Metric::Score => "score",
        }
    }

    /// Value for a successful record; `None` for failures.
    pub fn value(self, r: &TrialRecord) -> Option<f64> {
        if !r.success {
            return None;
        }
        match self {
            Metric::Length => r.length_mm,
            Metric::PlanningTime => Some(r.planning_time_ms),
            Metric::NodeCount => r.node_count.map(|n| n as f64),
            Metric::KeyNodeCount => r.key_node_count.map(|n| n as f64),
            Metric::Clearance => r.clearance_mm,
            Metric::Smoothness => r.smoothness_rad,
            Metric::Score => r.score,
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Metric>, BenchError> {
        s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
    }
}

impl FromStr for Metric {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "length" | "length_mm" => Metric::Length,
            "time" | "planning_time" | "planning_time_ms" => Metric::PlanningTime,
            "nodes" | "node_count" => Metric::NodeCount,
            "key-nodes" | "key_nodes" | "key_node_count" => Metric::KeyNodeCount,
            "clearance" | "clearance_mm" => Metric::Clearance,
            "smoothness" | "smoothness_rad" => Metric::Smoothness,
            "score" => Metric::Score,
            _ => return Err(BenchError::UnknownMetric(s.into())),
        })
    }
}

/// Values of `metric` over the successful records of one algorithm, with
/// the number of attempted and successful trials.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub label: String,
    pub values: Vec<f64>,
    pub attempted: usize,
}

impl Group {
    pub fn success_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.values.len() as f64 / self.attempted as f64
        }
    }
}

/// Whether a record belongs to the group named `label`; algorithm aliases
/// such as `rrt3d` match their canonical label.
fn matches_label(record: &TrialRecord, label: &str) -> bool {
    record.algorithm == label || label.parse::<Algorithm>().is_ok_and(|a| a.label() == record.algorithm)
}

pub fn group_by_algorithm(records: &[TrialRecord], metric: Metric, label: &str) -> Group {
    let members: Vec<&TrialRecord> = records.iter().filter(|r| matches_label(r, label)).collect();
    Group {
        label: label.into(),
        values: members.iter().filter_map(|r| metric.value(r)).collect(),
        attempted: members.len(),
    }
}

/// Algorithm labels in first-appearance order.
pub fn algorithms_in(records: &[TrialRecord]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in records {
        if !out.contains(&r.algorithm) {
            out.push(r.algorithm.clone());
        }
    }
    out
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than two values.
pub fn std_dev(values: &[f64]) -> f64 {
    let Some(m) = mean(values) else { return 0.0 };
    if values.len() < 2 {
        return 0.0;
    }
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}
