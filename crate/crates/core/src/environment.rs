//! Planning environments: the 3D box world, its planar `xoz` projection, JSON
//! persistence, seeded scenario generation and harvest ordering.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Aabb3, Point2, Point3, Polygon2, Segment2};
use crate::io::write_atomic;

/// Safety margin used when an environment is validated without an explicit one.
pub const DEFAULT_SAFE_DISTANCE: f64 = 5.0;
/// Fruit body edge lengths before stem extension.
pub const DEFAULT_FRUIT_SIZE: [f64; 3] = [40.0, 40.0, 40.0];
/// Rejection attempts per fruit before generation gives up.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("schema violation at `{field}`: {message}")]
    SchemaViolation { field: String, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("{which} point lies inside inflated obstacle `{obstacle_id}`")]
    EndpointBlocked { which: &'static str, obstacle_id: String },
    #[error("could not place fruit {placed} of {requested} after {attempts} attempts")]
    PlacementFailure { placed: usize, requested: usize, attempts: usize },
    #[error("stem top {z_top} mm is below the box top {box_top} mm")]
    InvalidExtension { z_top: f64, box_top: f64 },
}

/// Strawberry bounding box, optionally extended upward to cover the stem.
#[derive(Debug, Clone, PartialEq)]
pub struct Sbbox {
    pub id: String,
    pub min: Point3,
    pub max: Point3,
    pub stem_extended: bool,
}

impl Sbbox {
    pub fn aabb(&self) -> Aabb3 {
        Aabb3::new(self.min, self.max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub id: String,
    pub center: Point3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub bounds_min: Point3,
    pub bounds_max: Point3,
    pub start: Point3,
    pub end: Point3,
    pub obstacles: Vec<Sbbox>,
    pub targets: Vec<Target>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle2 {
    pub id: String,
    pub polygon: Polygon2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment2D {
    pub bounds_min: Point2,
    pub bounds_max: Point2,
    pub start: Point2,
    pub end: Point2,
    pub obstacles: Vec<Obstacle2>,
}

impl Environment {
    pub fn bounds(&self) -> Aabb3 {
        Aabb3::new(self.bounds_min, self.bounds_max)
    }

    /// Obstacle boxes grown by `margin` on every side.
    pub fn inflated_boxes(&self, margin: f64) -> Vec<Aabb3> {
        self.obstacles.iter().map(|o| o.aabb().inflate(margin)).collect()
    }

    pub fn raw_boxes(&self) -> Vec<Aabb3> {
        self.obstacles.iter().map(Sbbox::aabb).collect()
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        self.validate_with_margin(DEFAULT_SAFE_DISTANCE)
    }

    pub fn validate_with_margin(&self, margin: f64) -> Result<(), EnvError> {
        let all = [self.bounds_min, self.bounds_max, self.start, self.end];
        if all.iter().any(|p| !p.is_finite()) {
            return Err(EnvError::InvariantViolation("non-finite coordinate".into()));
        }
        if !(self.bounds_min.x < self.bounds_max.x
            && self.bounds_min.y < self.bounds_max.y
            && self.bounds_min.z < self.bounds_max.z)
        {
            return Err(EnvError::InvariantViolation("bounds.min must be below bounds.max".into()));
        }
        let bounds = self.bounds();
        for (which, p) in [("start", self.start), ("end", self.end)] {
            if !bounds.contains(p) {
                return Err(EnvError::InvariantViolation(format!("{which} lies outside bounds")));
            }
        }
        for o in &self.obstacles {
            if !o.min.is_finite() || !o.max.is_finite() {
                return Err(EnvError::InvariantViolation(format!("obstacle `{}` is not finite", o.id)));
            }
            if !(o.min.x < o.max.x && o.min.y < o.max.y && o.min.z < o.max.z) {
                return Err(EnvError::InvariantViolation(format!("obstacle `{}` has min >= max", o.id)));
            }
            if o.stem_extended && o.max.z != self.bounds_max.z {
                return Err(EnvError::InvariantViolation(format!(
                    "obstacle `{}` is stem-extended but its top {} differs from bounds top {}",
                    o.id, o.max.z, self.bounds_max.z
                )));
            }
        }
        for (which, p) in [("start", self.start), ("end", self.end)] {
            if let Some(o) = self.obstacles.iter().find(|o| o.aabb().inflate(margin).contains_strict(p)) {
                return Err(EnvError::EndpointBlocked { which, obstacle_id: o.id.clone() });
            }
        }
        Ok(())
    }
}

impl Environment2D {
    pub fn inflated_polygons(&self, margin: f64) -> Vec<Polygon2> {
        self.obstacles.iter().map(|o| o.polygon.inflate(margin)).collect()
    }

    pub fn raw_polygons(&self) -> Vec<Polygon2> {
        self.obstacles.iter().map(|o| o.polygon.clone()).collect()
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.bounds_min.x && p.x <= self.bounds_max.x && p.z >= self.bounds_min.z && p.z <= self.bounds_max.z
    }

    pub fn validate_with_margin(&self, margin: f64) -> Result<(), EnvError> {
        if !(self.bounds_min.x < self.bounds_max.x && self.bounds_min.z < self.bounds_max.z) {
            return Err(EnvError::InvariantViolation("bounds.min must be below bounds.max".into()));
        }
        for (which, p) in [("start", self.start), ("end", self.end)] {
            if !p.is_finite() || !self.contains(p) {
                return Err(EnvError::InvariantViolation(format!("{which} lies outside bounds")));
            }
        }
        for o in &self.obstacles {
            let poly = &o.polygon;
            if poly.len() >= 3 && poly.signed_area() <= 0.0 {
                return Err(EnvError::InvariantViolation(format!("obstacle `{}` is not counter-clockwise", o.id)));
            }
            if !is_simple(poly) {
                return Err(EnvError::InvariantViolation(format!("obstacle `{}` is self-intersecting", o.id)));
            }
        }
        for (which, p) in [("start", self.start), ("end", self.end)] {
            if let Some(o) = self.obstacles.iter().find(|o| o.polygon.inflate(margin).contains_strict(p)) {
                return Err(EnvError::EndpointBlocked { which, obstacle_id: o.id.clone() });
            }
        }
        Ok(())
    }
}

fn is_simple(poly: &Polygon2) -> bool {
    let edges: Vec<Segment2> = poly.edges().collect();
    let n = edges.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && crate::geometry::segments_intersect(&edges[i], &edges[j]) {
                return false;
            }
        }
    }
    true
}

/// Returns a copy of `sbbox` reaching up to `z_top`.
pub fn extend_stem(sbbox: &Sbbox, z_top: f64) -> Result<Sbbox, EnvError> {
    if !(z_top >= sbbox.max.z) {
        return Err(EnvError::InvalidExtension { z_top, box_top: sbbox.max.z });
    }
    let mut out = sbbox.clone();
    out.max.z = z_top;
    out.stem_extended = true;
    Ok(out)
}

/// Side view: every box becomes its `x-z` rectangle and `y` is dropped.
pub fn project_to_xoz(env: &Environment) -> Environment2D {
    Environment2D {
        bounds_min: env.bounds_min.xz(),
        bounds_max: env.bounds_max.xz(),
        start: env.start.xz(),
        end: env.end.xz(),
        obstacles: env
            .obstacles
            .iter()
            .map(|o| Obstacle2 {
                id: o.id.clone(),
                polygon: Polygon2::rectangle(o.min.x, o.min.z, o.max.x, o.max.z),
            })
            .collect(),
    }
}

/// Bottom-to-top picking order: ascending `z`, then `x`, then `y`.
pub fn harvest_sequence(targets: &[Point3]) -> Vec<Point3> {
    let mut out = targets.to_vec();
    out.sort_by(|a, b| a.z.total_cmp(&b.z).then(a.x.total_cmp(&b.x)).then(a.y.total_cmp(&b.y)));
    out
}

/// Parameters of a seeded scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub seed: u64,
    pub fruits: usize,
    /// `[xmin, xmax, ymin, ymax, zmin, zmax]`
    pub bounds: [f64; 6],
    pub start: [f64; 3],
    pub end: [f64; 3],
    #[serde(default = "default_fruit_size")]
    pub fruit_size: [f64; 3],
    #[serde(default = "default_margin")]
    pub margin: f64,
    /// Also keep start and end clear of every box in the `xoz` side view, so
    /// the scene stays valid after [`project_to_xoz`].
    #[serde(default)]
    pub planar_clearance: bool,
}

fn default_fruit_size() -> [f64; 3] {
    DEFAULT_FRUIT_SIZE
}

fn default_margin() -> f64 {
    DEFAULT_SAFE_DISTANCE
}

impl ScenarioSpec {
    /// Five-fruit scene in a 400 mm wide workspace.
    pub fn environment_1(seed: u64) -> Self {
        Self {
            seed,
            fruits: 5,
            bounds: [0.0, 400.0, 0.0, 300.0, 0.0, 500.0],
            start: [40.0, 120.0, 280.0],
            end: [395.0, 145.0, 330.0],
            fruit_size: DEFAULT_FRUIT_SIZE,
            margin: DEFAULT_SAFE_DISTANCE,
            planar_clearance: false,
        }
    }

    /// Thirteen-fruit scene in a 500 mm wide workspace.
    pub fn environment_2(seed: u64) -> Self {
        Self {
            seed,
            fruits: 13,
            bounds: [0.0, 500.0, 0.0, 300.0, 0.0, 500.0],
            start: [40.0, 120.0, 280.0],
            end: [465.0, 145.0, 330.0],
            fruit_size: DEFAULT_FRUIT_SIZE,
            margin: DEFAULT_SAFE_DISTANCE,
            planar_clearance: false,
        }
    }

    pub fn with_fruits(mut self, fruits: usize) -> Self {
        self.fruits = fruits;
        self
    }

    pub fn with_planar_clearance(mut self) -> Self {
        self.planar_clearance = true;
        self
    }
}

/// Places `spec.fruits` stem-extended fruit boxes uniformly at random, rejecting
/// placements whose inflated box covers the start or end or overlaps an
/// already placed inflated box.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Environment, EnvError> {
    let [x0, x1, y0, y1, z0, z1] = spec.bounds;
    let bounds_min = Point3::new(x0, y0, z0);
    let bounds_max = Point3::new(x1, y1, z1);
    let half = Point3::from_array(spec.fruit_size) * 0.5;
    if !(half.x > 0.0 && half.y > 0.0 && half.z > 0.0) {
        return Err(EnvError::InvariantViolation("fruit_size must be positive".into()));
    }
    if x1 - x0 < 2.0 * half.x || y1 - y0 < 2.0 * half.y || z1 - z0 < 2.0 * half.z {
        return Err(EnvError::InvariantViolation("fruit does not fit inside bounds".into()));
    }
    let start = Point3::from_array(spec.start);
    let end = Point3::from_array(spec.end);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut obstacles: Vec<Sbbox> = Vec::with_capacity(spec.fruits);
    let mut inflated: Vec<Aabb3> = Vec::with_capacity(spec.fruits);
    let mut targets = Vec::with_capacity(spec.fruits);

    for k in 0..spec.fruits {
        let mut placed = false;
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            let center = Point3::new(
                rng.gen_range(x0 + half.x..=x1 - half.x),
                rng.gen_range(y0 + half.y..=y1 - half.y),
                rng.gen_range(z0 + half.z..=z1 - half.z),
            );
            let id = format!("f{:02}", k + 1);
            let body = Sbbox { id: id.clone(), min: center - half, max: center + half, stem_extended: false };
            let sbbox = extend_stem(&body, z1)?;
            let grown = sbbox.aabb().inflate(spec.margin);
            if grown.contains(start) || grown.contains(end) || inflated.iter().any(|b| b.overlaps(&grown)) {
                continue;
            }
            let covers_xz =
                |p: Point3| (grown.min.x..=grown.max.x).contains(&p.x) && (grown.min.z..=grown.max.z).contains(&p.z);
            if spec.planar_clearance && (covers_xz(start) || covers_xz(end)) {
                continue;
            }
            inflated.push(grown);
            obstacles.push(sbbox);
            targets.push(Target { id, center });
            placed = true;
            break;
        }
        if !placed {
            return Err(EnvError::PlacementFailure {
                placed: k,
                requested: spec.fruits,
                attempts: MAX_PLACEMENT_ATTEMPTS,
            });
        }
    }

    let env = Environment { bounds_min, bounds_max, start, end, obstacles, targets };
    env.validate_with_margin(spec.margin)?;
    Ok(env)
}

// ---------------------------------------------------------------------------
// JSON schema

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsJson<const N: usize> {
    #[serde(with = "serde_arrays")]
    min: [f64; N],
    #[serde(with = "serde_arrays")]
    max: [f64; N],
}

mod serde_arrays {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(v: &[f64; N], s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(d: D) -> Result<[f64; N], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        v.try_into()
            .map_err(|v: Vec<f64>| serde::de::Error::invalid_length(v.len(), &format!("an array of {N} numbers").as_str()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleJson {
    id: String,
    min: [f64; 3],
    max: [f64; 3],
    #[serde(default)]
    stem_extended: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetJson {
    id: String,
    center: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvJson {
    version: u32,
    units: String,
    bounds: BoundsJson<3>,
    start: [f64; 3],
    end: [f64; 3],
    obstacles: Vec<ObstacleJson>,
    #[serde(default)]
    targets: Vec<TargetJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Obstacle2Json {
    id: String,
    vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Env2Json {
    version: u32,
    units: String,
    bounds: BoundsJson<2>,
    start: [f64; 2],
    end: [f64; 2],
    obstacles: Vec<Obstacle2Json>,
}

/// Either flavour of environment file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyEnvironment {
    Spatial(Environment),
    Planar(Environment2D),
}

fn check_header(version: u32, units: &str) -> Result<(), EnvError> {
    if version != 1 {
        return Err(EnvError::SchemaViolation { field: "version".into(), message: format!("unsupported version {version}") });
    }
    if units != "mm" {
        return Err(EnvError::SchemaViolation { field: "units".into(), message: format!("expected \"mm\", got {units:?}") });
    }
    Ok(())
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, EnvError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| EnvError::SchemaViolation {
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

impl From<EnvJson> for Environment {
    fn from(j: EnvJson) -> Self {
        Environment {
            bounds_min: Point3::from_array(j.bounds.min),
            bounds_max: Point3::from_array(j.bounds.max),
            start: Point3::from_array(j.start),
            end: Point3::from_array(j.end),
            obstacles: j
                .obstacles
                .into_iter()
                .map(|o| Sbbox {
                    id: o.id,
                    min: Point3::from_array(o.min),
                    max: Point3::from_array(o.max),
                    stem_extended: o.stem_extended,
                })
                .collect(),
            targets: j.targets.into_iter().map(|t| Target { id: t.id, center: Point3::from_array(t.center) }).collect(),
        }
    }
}

impl From<&Environment> for EnvJson {
    fn from(env: &Environment) -> Self {
        EnvJson {
            version: 1,
            units: "mm".into(),
            bounds: BoundsJson { min: env.bounds_min.to_array(), max: env.bounds_max.to_array() },
            start: env.start.to_array(),
            end: env.end.to_array(),
            obstacles: env
                .obstacles
                .iter()
                .map(|o| ObstacleJson {
                    id: o.id.clone(),
                    min: o.min.to_array(),
                    max: o.max.to_array(),
                    stem_extended: o.stem_extended,
                })
                .collect(),
            targets: env.targets.iter().map(|t| TargetJson { id: t.id.clone(), center: t.center.to_array() }).collect(),
        }
    }
}

fn env2_from_json(j: Env2Json) -> Result<Environment2D, EnvError> {
    let p = |a: [f64; 2]| Point2::new(a[0], a[1]);
    let mut obstacles = Vec::with_capacity(j.obstacles.len());
    for (i, o) in j.obstacles.into_iter().enumerate() {
        let verts: Vec<Point2> = o.vertices.iter().copied().map(p).collect();
        if verts.len() < 3 {
            return Err(EnvError::SchemaViolation {
                field: format!("obstacles[{i}].vertices"),
                message: "a polygon needs at least 3 vertices".into(),
            });
        }
        if verts.iter().any(|v| !v.is_finite()) {
            return Err(EnvError::InvariantViolation(format!("obstacle `{}` is not finite", o.id)));
        }
        obstacles.push(Obstacle2 { id: o.id, polygon: Polygon2::from_vertices_unchecked(verts) });
    }
    Ok(Environment2D {
        bounds_min: p(j.bounds.min),
        bounds_max: p(j.bounds.max),
        start: p(j.start),
        end: p(j.end),
        obstacles,
    })
}

fn env2_to_json(env: &Environment2D) -> Env2Json {
    let a = |p: Point2| [p.x, p.z];
    Env2Json {
        version: 1,
        units: "mm".into(),
        bounds: BoundsJson { min: a(env.bounds_min), max: a(env.bounds_max) },
        start: a(env.start),
        end: a(env.end),
        obstacles: env
            .obstacles
            .iter()
            .map(|o| Obstacle2Json { id: o.id.clone(), vertices: o.polygon.vertices().iter().copied().map(a).collect() })
            .collect(),
    }
}

fn read(path: &Path) -> Result<String, EnvError> {
    std::fs::read_to_string(path).map_err(|source| EnvError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: String) -> Result<(), EnvError> {
    write_atomic(path, text.as_bytes()).map_err(|source| EnvError::Io { path: path.to_path_buf(), source })
}

pub fn environment_from_json(text: &str) -> Result<Environment, EnvError> {
    let j: EnvJson = parse(text)?;
    check_header(j.version, &j.units)?;
    let env = Environment::from(j);
    env.validate()?;
    Ok(env)
}

pub fn environment_to_json(env: &Environment) -> String {
    serde_json::to_string_pretty(&EnvJson::from(env)).expect("environment serializes") + "\n"
}

pub fn environment2d_from_json(text: &str) -> Result<Environment2D, EnvError> {
    let j: Env2Json = parse(text)?;
    check_header(j.version, &j.units)?;
    let env = env2_from_json(j)?;
    env.validate_with_margin(DEFAULT_SAFE_DISTANCE)?;
    Ok(env)
}

pub fn environment2d_to_json(env: &Environment2D) -> String {
    serde_json::to_string_pretty(&env2_to_json(env)).expect("environment serializes") + "\n"
}

pub fn load_environment(path: &Path) -> Result<Environment, EnvError> {
    environment_from_json(&read(path)?)
}

pub fn save_environment(env: &Environment, path: &Path) -> Result<(), EnvError> {
    write(path, environment_to_json(env))
}

pub fn load_environment2d(path: &Path) -> Result<Environment2D, EnvError> {
    environment2d_from_json(&read(path)?)
}

pub fn save_environment2d(env: &Environment2D, path: &Path) -> Result<(), EnvError> {
    write(path, environment2d_to_json(env))
}

/// Loads a file of either dimensionality, telling them apart by the length of
/// `bounds.min`.
pub fn load_any_environment(path: &Path) -> Result<AnyEnvironment, EnvError> {
    let text = read(path)?;
    let probe: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| EnvError::SchemaViolation { field: ".".into(), message: e.to_string() })?;
    let dims = probe.pointer("/bounds/min").and_then(|v| v.as_array()).map(Vec::len);
    match dims {
        Some(2) => environment2d_from_json(&text).map(AnyEnvironment::Planar),
        _ => environment_from_json(&text).map(AnyEnvironment::Spatial),
    }
}
