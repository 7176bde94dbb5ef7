//! Spatial planning by plane sweep.
//!
//! Planes through start and end are rotated about the start→end axis in
//! `delta_theta` steps over `[0°, 180°)`. On each plane every inflated box is
//! projected to a convex polygon, the planar planner runs in the plane's
//! chart, and the result is lifted back, re-checked against the 3D boxes,
//! smoothed and scored. The lowest-scoring candidate wins.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environment::{Environment, Sbbox};
use crate::evaluation::{
    densified_count, measure_path, score_candidates, EvalError, EvaluationWeights, PathMetrics, DENSIFY_STEP_MM,
};
use crate::geometry::{build_plane, convex_hull_2d, Aabb3, GeometryError, Plane, Point2, Point3, Polygon2};
use crate::ilmsa2d::{generate_path_2d_within, Path2D, PlanError, PlannerConfig};
use crate::smoothing::{generate_bspline_3d, validate_smoothed, SmoothingError, SplineConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Plan3DError {
    #[error("no plane out of {candidates} yields a collision-free path")]
    NoFeasiblePlane { candidates: usize },
    #[error("{which} point is inside inflated obstacle `{obstacle_id}`")]
    StartOrGoalBlocked { which: &'static str, obstacle_id: String },
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Evaluation(#[from] EvalError),
}

impl From<PlanError> for Plan3DError {
    fn from(e: PlanError) -> Self {
        Plan3DError::InvalidConfig(e.to_string())
    }
}

impl From<SmoothingError> for Plan3DError {
    fn from(e: SmoothingError) -> Self {
        Plan3DError::InvalidConfig(e.to_string())
    }
}

/// Which boxes reach the planar planner, and in what shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstacleProjection {
    /// Every box, as the hull of its projected corners.
    All,
    /// Boxes the plane cuts, as the hull of their projected corners.
    Intersecting,
    /// Boxes the plane cuts, as their exact cross-section with the plane.
    #[default]
    Section,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Angular step between candidate planes (degrees).
    pub delta_theta: f64,
    pub planner: PlannerConfig,
    pub weights: EvaluationWeights,
    pub spline: SplineConfig,
    pub projection: ObstacleProjection,
    /// Evaluate planes on the rayon pool. Results do not depend on it.
    pub parallel: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            delta_theta: 5.0,
            planner: PlannerConfig::default(),
            weights: EvaluationWeights::default(),
            spline: SplineConfig::default(),
            projection: ObstacleProjection::default(),
            parallel: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), Plan3DError> {
        if !(self.delta_theta > 0.0 && self.delta_theta <= 90.0) {
            return Err(Plan3DError::InvalidConfig(format!("delta_theta must be in (0, 90], got {}", self.delta_theta)));
        }
        self.planner.validate()?;
        self.weights.validate()?;
        self.spline.validate()?;
        Ok(())
    }

    /// Sweep angles `k·Δθ` below 180°.
    pub fn angles(&self) -> Vec<f64> {
        (0..).map(|k| k as f64 * self.delta_theta).take_while(|t| *t < 180.0).collect()
    }
}

/// Why a plane produced no usable path.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateFailure {
    Planner(PlanError),
    /// The lifted polyline enters an inflated box in 3D.
    Collision3D,
}

impl std::fmt::Display for CandidateFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CandidateFailure::Planner(e) => write!(f, "{e}"),
            CandidateFailure::Collision3D => write!(f, "lifted path collides with a 3D obstacle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCandidate {
    pub plane: Plane,
    pub raw_path: Option<Path2D>,
    pub lifted_path: Vec<Point3>,
    pub feasible: bool,
    pub failure_reason: Option<CandidateFailure>,
    /// Smoothed samples; empty when smoothing was rejected or not attempted.
    pub smoothed: Vec<Point3>,
    pub metrics: Option<PathMetrics>,
}

impl PlaneCandidate {
    /// The path a robot would follow: the smoothed curve when it was
    /// accepted, else the lifted polyline.
    pub fn executed(&self) -> &[Point3] {
        if self.smoothed.is_empty() {
            &self.lifted_path
        } else {
            &self.smoothed
        }
    }
}

/// A spatial path with its metrics, as produced by any 3D planner.
#[derive(Debug, Clone, PartialEq)]
pub struct Path3D {
    pub algorithm: String,
    pub plane_theta_deg: Option<f64>,
    pub nodes: Vec<Point3>,
    pub smoothed: Vec<Point3>,
    /// Nodes inserted to avoid obstacles (interior polyline nodes).
    pub key_node_count: usize,
    pub metrics: PathMetrics,
    /// Present for plane-sweep results only.
    pub score: Option<f64>,
}

impl Path3D {
    pub fn executed(&self) -> &[Point3] {
        if self.smoothed.is_empty() {
            &self.nodes
        } else {
            &self.smoothed
        }
    }

    /// Point count after densifying the executed path at 1 mm.
    pub fn node_count(&self) -> usize {
        densified_count(self.executed(), DENSIFY_STEP_MM)
    }
}

/// Result of a full sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub best: Path3D,
    pub candidates: Vec<PlaneCandidate>,
}

/// Projects each box's corners onto the plane and returns their convex hull
/// in plane coordinates, in input order. Boxes seen edge-on collapse to a
/// two-vertex segment obstacle.
pub fn project_obstacles_on_plane(plane: &Plane, obstacles: &[Aabb3]) -> Vec<Polygon2> {
    obstacles.iter().map(|b| project_box(plane, b)).collect()
}

/// Whether the plane passes through the open interior of the box.
pub fn plane_cuts_box(plane: &Plane, b: &Aabb3) -> bool {
    let (lo, hi) = b
        .corners()
        .iter()
        .map(|&c| plane.evaluate(c))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    lo < 0.0 && hi > 0.0
}

/// The box's cross-section with the plane in plane coordinates, or `None`
/// when the plane misses the open interior. A path inside the plane meets
/// the box exactly when it meets this polygon.
pub fn section_of_box(plane: &Plane, b: &Aabb3) -> Option<Polygon2> {
    if !plane_cuts_box(plane, b) {
        return None;
    }
    let corners = b.corners();
    let values: Vec<f64> = corners.iter().map(|&c| plane.evaluate(c)).collect();
    let mut pts = Vec::with_capacity(12);
    for i in 0..8 {
        if values[i] == 0.0 {
            pts.push(plane.chart_of(corners[i]));
        }
        // Edges join corners whose indices differ in exactly one bit.
        for bit in [1, 2, 4] {
            let j = i | bit;
            if j == i {
                continue;
            }
            let (vi, vj) = (values[i], values[j]);
            if (vi < 0.0 && vj > 0.0) || (vi > 0.0 && vj < 0.0) {
                let t = vi / (vi - vj);
                pts.push(plane.chart_of(corners[i].lerp(corners[j], t)));
            }
        }
    }
    convex_hull_2d(&pts).ok()
}

/// Planar obstacles for `plane` under the chosen projection mode.
pub fn plane_obstacles(plane: &Plane, obstacles: &[Aabb3], mode: ObstacleProjection) -> Vec<Polygon2> {
    match mode {
        ObstacleProjection::All => project_obstacles_on_plane(plane, obstacles),
        ObstacleProjection::Intersecting => {
            obstacles.iter().filter(|b| plane_cuts_box(plane, b)).map(|b| project_box(plane, b)).collect()
        }
        ObstacleProjection::Section => obstacles.iter().filter_map(|b| section_of_box(plane, b)).collect(),
    }
}

fn project_box(plane: &Plane, b: &Aabb3) -> Polygon2 {
    let pts: Vec<Point2> = b.corners().iter().map(|&c| plane.chart_of(c)).collect();
    convex_hull_2d(&pts).unwrap_or_else(|_| {
        // All corners project onto a line: keep its two extreme points.
        let dir = pts[1..].iter().map(|&p| p - pts[0]).max_by(|a, c| a.norm().total_cmp(&c.norm())).unwrap_or(Point2::new(1.0, 0.0));
        let key = |p: &Point2| (*p - pts[0]).dot(dir);
        let lo = *pts.iter().min_by(|a, c| key(a).total_cmp(&key(c))).expect("8 corners");
        let hi = *pts.iter().max_by(|a, c| key(a).total_cmp(&key(c))).expect("8 corners");
        Polygon2::from_vertices_unchecked(vec![lo, hi])
    })
}

/// Plans on the plane at `theta` (degrees). Failures are recorded in the
/// candidate rather than returned.
pub fn plan_on_plane(env: &Environment, theta: f64, config: &SweepConfig) -> Result<PlaneCandidate, Plan3DError> {
    let inflated = env.inflated_boxes(config.planner.safe_distance);
    plan_on_plane_with(env, &inflated, theta, config)
}

fn plan_on_plane_with(
    env: &Environment,
    inflated: &[Aabb3],
    theta: f64,
    config: &SweepConfig,
) -> Result<PlaneCandidate, Plan3DError> {
    let plane = build_plane(env.start, env.end, theta)?;
    let polygons = plane_obstacles(&plane, inflated, config.projection);
    let start = plane.to_plane_coords(env.start)?;
    let end = plane.to_plane_coords(env.end)?;
    let bounds = env.bounds();
    let failed = |reason| PlaneCandidate {
        plane,
        raw_path: None,
        lifted_path: vec![],
        feasible: false,
        failure_reason: Some(reason),
        smoothed: vec![],
        metrics: None,
    };

    let raw = match generate_path_2d_within(start, end, &polygons, &config.planner, |q| {
        bounds.contains(plane.from_plane_coords(q))
    }) {
        Ok(p) => p,
        Err(e) => return Ok(failed(CandidateFailure::Planner(e))),
    };
    let mut lifted: Vec<Point3> = raw.nodes.iter().map(|&q| plane.from_plane_coords(q)).collect();
    // Pin the endpoints to the exact inputs; the chart round trip is only
    // accurate to rounding.
    let last = lifted.len() - 1;
    lifted[0] = env.start;
    lifted[last] = env.end;

    if lifted.windows(2).any(|w| inflated.iter().any(|b| b.segment_blocks(w[0], w[1]))) {
        let mut c = failed(CandidateFailure::Collision3D);
        c.raw_path = Some(raw);
        c.lifted_path = lifted;
        return Ok(c);
    }
    Ok(PlaneCandidate {
        plane,
        raw_path: Some(raw),
        lifted_path: lifted,
        feasible: true,
        failure_reason: None,
        smoothed: vec![],
        metrics: None,
    })
}

/// Smooths a feasible candidate (keeping the curve only if it stays clear of
/// the inflated boxes) and fills in its metrics.
fn finish_candidate(c: &mut PlaneCandidate, raw_boxes: &[Aabb3], config: &SweepConfig) -> Result<(), Plan3DError> {
    let curve = generate_bspline_3d(&c.lifted_path, &config.spline);
    let smoothed_ok = curve.len() > c.lifted_path.len() && validate_smoothed(&curve, raw_boxes, config.planner.safe_distance);
    c.smoothed = if smoothed_ok { curve } else { vec![] };
    let samples = smoothed_ok.then_some(c.smoothed.as_slice());
    c.metrics = Some(measure_path(&c.lifted_path, samples, raw_boxes)?);
    Ok(())
}

/// Runs the full sweep and returns the minimum-score path together with
/// every candidate, ordered by angle.
pub fn plan_3d(env: &Environment, config: &SweepConfig) -> Result<SweepResult, Plan3DError> {
    config.validate()?;
    let e = config.planner.safe_distance;
    for (which, p) in [("start", env.start), ("end", env.end)] {
        if let Some(o) = env.obstacles.iter().find(|o| o.aabb().inflate(e).contains_strict(p)) {
            return Err(Plan3DError::StartOrGoalBlocked { which, obstacle_id: o.id.clone() });
        }
    }
    let inflated = env.inflated_boxes(e);
    let raw_boxes: Vec<Aabb3> = env.obstacles.iter().map(Sbbox::aabb).collect();
    let angles = config.angles();

    let run = |theta: f64| -> Result<PlaneCandidate, Plan3DError> {
        let mut c = plan_on_plane_with(env, &inflated, theta, config)?;
        if c.feasible {
            finish_candidate(&mut c, &raw_boxes, config)?;
        }
        Ok(c)
    };
    let mut candidates: Vec<PlaneCandidate> = if config.parallel {
        angles.par_iter().map(|&t| run(t)).collect::<Result<_, _>>()?
    } else {
        angles.iter().map(|&t| run(t)).collect::<Result<_, _>>()?
    };

    let feasible: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i].feasible).collect();
    if feasible.is_empty() {
        return Err(Plan3DError::NoFeasiblePlane { candidates: candidates.len() });
    }
    let metrics: Vec<PathMetrics> = feasible.iter().map(|&i| candidates[i].metrics.expect("feasible")).collect();
    let scores = score_candidates(&metrics, &config.weights)?;
    for (&i, &s) in feasible.iter().zip(&scores) {
        if let Some(m) = candidates[i].metrics.as_mut() {
            m.score = s;
        }
    }
    let best_idx = feasible
        .iter()
        .zip(&scores)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(&i, _)| i)
        .expect("at least one feasible candidate");
    let b = &candidates[best_idx];
    let best = Path3D {
        algorithm: "ilmsa3d".into(),
        plane_theta_deg: Some(b.plane.theta_deg),
        nodes: b.lifted_path.clone(),
        smoothed: b.smoothed.clone(),
        key_node_count: b.raw_path.as_ref().map_or(0, |r| r.key_nodes.len()),
        metrics: b.metrics.expect("feasible"),
        score: b.metrics.map(|m| m.score),
    };
    Ok(SweepResult { best, candidates })
}

/// Times [`plan_3d`], returning the elapsed wall-clock milliseconds.
pub fn plan_3d_timed(env: &Environment, config: &SweepConfig) -> (Result<SweepResult, Plan3DError>, f64) {
    let t0 = Instant::now();
    let r = plan_3d(env, config);
    (r, t0.elapsed().as_secs_f64() * 1e3)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricsJson {
    length_mm: f64,
    clearance_mm: f64,
    smoothness_rad: f64,
    score: Option<f64>,
    planning_time_ms: f64,
    node_count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathJson {
    version: u32,
    units: String,
    algorithm: String,
    plane_theta_deg: Option<f64>,
    nodes: Vec<[f64; 3]>,
    smoothed: Vec<[f64; 3]>,
    metrics: MetricsJson,
}

/// Path JSON document. `planning_time_ms` is the only non-deterministic
/// field.
pub fn path_to_json(path: &Path3D, planning_time_ms: f64) -> String {
    let doc = PathJson {
        version: 1,
        units: "mm".into(),
        algorithm: path.algorithm.clone(),
        plane_theta_deg: path.plane_theta_deg,
        nodes: path.nodes.iter().map(|p| p.to_array()).collect(),
        smoothed: path.smoothed.iter().map(|p| p.to_array()).collect(),
        metrics: MetricsJson {
            length_mm: path.metrics.length,
            clearance_mm: path.metrics.min_clearance,
            smoothness_rad: path.metrics.smoothness,
            score: path.score,
            planning_time_ms,
            node_count: path.node_count(),
        },
    };
    serde_json::to_string_pretty(&doc).expect("path documents always serialize") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::Environment;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    fn env_with(obstacles: Vec<Sbbox>) -> Environment {
        Environment {
            bounds_min: p(0., 0., 0.),
            bounds_max: p(200., 200., 200.),
            start: p(0., 100., 100.),
            end: p(200., 100., 100.),
            obstacles,
            targets: vec![],
        }
    }

    fn sbbox(id: &str, min: Point3, max: Point3) -> Sbbox {
        Sbbox { id: id.into(), min, max, stem_extended: false }
    }

    #[test]
    fn projection_onto_vertical_plane_is_face_rectangle() {
        let plane = build_plane(p(0., 0., 0.), p(1., 0., 0.), 0.0).unwrap();
        let b = Aabb3::new(p(10., -5., 20.), p(30., 5., 40.));
        let polys = project_obstacles_on_plane(&plane, &[b]);
        assert_eq!(polys[0].bounds(), (Point2::new(10., 20.), Point2::new(30., 40.)));
        assert_eq!(polys[0].len(), 4);
        assert!(project_obstacles_on_plane(&plane, &[]).is_empty());
    }

    #[test]
    fn tilted_projection_is_hexagon_or_less() {
        let plane = build_plane(p(0., 0., 0.), p(1., 1., 0.3), 45.0).unwrap();
        let b = Aabb3::new(p(10., -5., 20.), p(30., 5., 40.));
        let poly = &project_obstacles_on_plane(&plane, &[b])[0];
        assert!(poly.len() <= 6 && poly.len() >= 4);
    }

    #[test]
    fn sweep_has_36_candidates() {
        assert_eq!(SweepConfig::default().angles().len(), 36);
        let res = plan_3d(&env_with(vec![]), &SweepConfig::default()).unwrap();
        assert_eq!(res.candidates.len(), 36);
        assert_eq!(res.best.nodes, vec![p(0., 100., 100.), p(200., 100., 100.)]);
        assert_eq!(res.best.metrics.length, 200.0);
    }

    #[test]
    fn box_between_start_and_end_is_underpassed_at_zero() {
        let env = env_with(vec![sbbox("f0", p(80., 80., 80.), p(120., 120., 200.))]);
        let c = plan_on_plane(&env, 0.0, &SweepConfig::default()).unwrap();
        assert!(c.feasible);
        assert_eq!(c.lifted_path.len(), 4);
        assert!(c.lifted_path[1..3].iter().all(|q| q.z < 80.0));
        for q in &c.lifted_path {
            assert!(c.plane.evaluate(*q).abs() < 1e-6);
        }
    }

    #[test]
    fn walled_plane_is_infeasible() {
        // A slab spanning the full height and width of the bounds.
        let env = env_with(vec![sbbox("wall", p(90., 0., 0.), p(110., 200., 200.))]);
        let c = plan_on_plane(&env, 0.0, &SweepConfig::default()).unwrap();
        assert!(!c.feasible);
        assert!(matches!(c.failure_reason, Some(CandidateFailure::Planner(_))));
        assert!(matches!(plan_3d(&env, &SweepConfig::default()), Err(Plan3DError::NoFeasiblePlane { candidates: 36 })));
    }

    #[test]
    fn parallel_matches_sequential() {
        let env = env_with(vec![
            sbbox("a", p(60., 90., 70.), p(90., 120., 200.)),
            sbbox("b", p(120., 70., 90.), p(150., 110., 200.)),
        ]);
        let seq = plan_3d(&env, &SweepConfig::default()).unwrap();
        let par = plan_3d(&env, &SweepConfig { parallel: true, ..Default::default() }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn blocked_start_is_reported_by_id() {
        let env = env_with(vec![sbbox("f7", p(-10., 90., 90.), p(10., 110., 110.))]);
        assert_eq!(
            plan_3d(&env, &SweepConfig::default()).unwrap_err(),
            Plan3DError::StartOrGoalBlocked { which: "start", obstacle_id: "f7".into() }
        );
    }
}
