//! Planar local-minima search.
//!
//! Starting from the straight segment between start and end, every segment
//! that crosses an obstacle is split by a new node placed a safe distance
//! below the obstacle vertex farthest beneath it. Nodes are kept ordered along
//! the start→end direction and the loop repeats until no segment collides.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environment::Environment2D;
use crate::geometry::{point_segment_line_distance, GeometryError, Point2, Polygon2, Segment2};

/// Nodes closer than this to an existing node are not inserted again.
pub const DEDUP_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("no collision-free path within {iterations} iterations")]
    NoPathWithinBudget { iterations: usize },
    #[error("{which} point is inside obstacle #{obstacle}")]
    StartOrGoalBlocked { which: &'static str, obstacle: usize },
    #[error("candidate vertex set is empty")]
    EmptyVertexSet,
    #[error("new node ({x}, {z}) falls outside the planning bounds")]
    OutOfBounds { x: f64, z: f64 },
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// How equidistant candidate vertices are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Smaller `x`, then smaller `z`.
    #[default]
    LowestX,
    /// Larger `x`, then smaller `z`.
    HighestX,
}

/// Which obstacles contribute candidate vertices for a colliding segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexScope {
    /// Only obstacles the segment actually passes through.
    #[default]
    Colliding,
    /// Every obstacle, colliding or not.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    /// Offset `e` between an obstacle vertex and the node placed under it (mm).
    pub safe_distance: f64,
    pub max_iter: usize,
    pub tie_break: TieBreak,
    pub vertex_scope: VertexScope,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { safe_distance: 5.0, max_iter: 50, tie_break: TieBreak::LowestX, vertex_scope: VertexScope::Colliding }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.safe_distance > 0.0 && self.safe_distance.is_finite()) {
            return Err(PlanError::InvalidConfig(format!("safe_distance must be > 0, got {}", self.safe_distance)));
        }
        if self.max_iter < 1 {
            return Err(PlanError::InvalidConfig("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

/// A planar polyline from start to end.
#[derive(Debug, Clone, PartialEq)]
pub struct Path2D {
    pub nodes: Vec<Point2>,
    /// Indices into `nodes` of the inserted avoidance nodes.
    pub key_nodes: Vec<usize>,
    /// Refinement rounds that found (and handled) at least one collision.
    pub iterations_used: usize,
}

impl Path2D {
    pub fn straight(start: Point2, end: Point2) -> Self {
        Self { nodes: vec![start, end], key_nodes: vec![], iterations_used: 0 }
    }

    pub fn length(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

/// Whether `seg` enters any obstacle. Obstacles are expected to be inflated
/// already.
pub fn collision_detected(seg: &Segment2, obstacles: &[Polygon2]) -> bool {
    obstacles.iter().any(|o| o.blocks(seg))
}

/// `v` lies on or below the line through `s` and `e`, "below" meaning smaller
/// `z` at the same `x`.
fn below_line(v: Point2, s: Point2, e: Point2) -> bool {
    let (l, r) = if s.x <= e.x { (s, e) } else { (e, s) };
    if r.x == l.x {
        return v.z <= l.z.max(r.z);
    }
    (r - l).cross(v - l) <= 0.0
}

/// Outcome of scanning the obstacles for one segment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AvoidanceScan {
    pub collides: bool,
    /// Lowest vertices within the segment's `x` range lying on or below it.
    pub vertices: Vec<Point2>,
    /// Indices of obstacles the segment passes through.
    pub colliding: Vec<usize>,
}

/// Collects the candidate avoidance vertices of every obstacle for the
/// segment `s-e` and reports whether the segment collides.
///
/// The scan always visits every obstacle before returning.
pub fn collision_avoiding(s: Point2, e: Point2, obstacles: &[Polygon2]) -> AvoidanceScan {
    scan_obstacles(s, e, obstacles, VertexScope::All)
}

fn scan_obstacles(s: Point2, e: Point2, obstacles: &[Polygon2], scope: VertexScope) -> AvoidanceScan {
    let (x_min, x_max) = (s.x.min(e.x), s.x.max(e.x));
    let seg = Segment2::new(s, e).ok();
    let mut out = AvoidanceScan::default();
    for (i, obstacle) in obstacles.iter().enumerate() {
        let hit = seg.as_ref().is_some_and(|seg| obstacle.blocks(seg));
        if hit {
            out.collides = true;
            out.colliding.push(i);
        }
        if scope == VertexScope::Colliding && !hit {
            continue;
        }
        out.vertices.extend(
            obstacle.min_z_vertices().filter(|v| (x_min..=x_max).contains(&v.x) && below_line(*v, s, e)),
        );
    }
    out
}

/// The vertex of `candidates` farthest from the line through `s` and `e`.
pub fn max_distance_vertex(candidates: &[Point2], s: Point2, e: Point2, tie: TieBreak) -> Result<Point2, PlanError> {
    let mut best: Option<(f64, Point2)> = None;
    for &v in candidates {
        let d = point_segment_line_distance(v, s, e)?;
        let better = match best {
            None => true,
            Some((bd, bv)) => {
                if d != bd {
                    d > bd
                } else {
                    match tie {
                        TieBreak::LowestX => (v.x, v.z) < (bv.x, bv.z),
                        TieBreak::HighestX => v.x > bv.x || (v.x == bv.x && v.z < bv.z),
                    }
                }
            }
        };
        if better {
            best = Some((d, v));
        }
    }
    best.map(|(_, v)| v).ok_or(PlanError::EmptyVertexSet)
}

/// Places the new node `safe_distance` straight below `v`.
pub fn add_new_node(v: Point2, config: &PlannerConfig, in_bounds: impl Fn(Point2) -> bool) -> Result<Point2, PlanError> {
    let node = Point2::new(v.x, v.z - config.safe_distance);
    if !in_bounds(node) {
        return Err(PlanError::OutOfBounds { x: node.x, z: node.z });
    }
    Ok(node)
}

fn candidate_vertices(s: Point2, e: Point2, obstacles: &[Polygon2], scope: VertexScope) -> Vec<Point2> {
    let scan = scan_obstacles(s, e, obstacles, scope);
    if !scan.vertices.is_empty() {
        return scan.vertices;
    }
    // No lowest vertex sits under the segment (e.g. the obstacle hangs over it,
    // or its lowest vertex was already passed). Widen to every vertex of the
    // colliding obstacles under the segment, then to their lowest vertices.
    let (x_min, x_max) = (s.x.min(e.x), s.x.max(e.x));
    let under: Vec<Point2> = scan
        .colliding
        .iter()
        .flat_map(|&i| obstacles[i].vertices().iter().copied())
        .filter(|v| (x_min..=x_max).contains(&v.x) && below_line(*v, s, e))
        .collect();
    if !under.is_empty() {
        return under;
    }
    scan.colliding.iter().flat_map(|&i| obstacles[i].min_z_vertices()).collect()
}

pub fn generate_path_2d(start: Point2, end: Point2, obstacles: &[Polygon2], config: &PlannerConfig) -> Result<Path2D, PlanError> {
    generate_path_2d_within(start, end, obstacles, config, |_| true)
}

/// As [`generate_path_2d`], rejecting avoidance nodes for which `in_bounds`
/// is false.
pub fn generate_path_2d_within(
    start: Point2,
    end: Point2,
    obstacles: &[Polygon2],
    config: &PlannerConfig,
    in_bounds: impl Fn(Point2) -> bool,
) -> Result<Path2D, PlanError> {
    run(start, end, obstacles, config, in_bounds, |_| {})
}

/// Plans in a planar environment: obstacles are inflated by the safe
/// distance and avoidance nodes must stay inside the bounds.
pub fn plan_environment_2d(env: &Environment2D, config: &PlannerConfig) -> Result<Path2D, PlanError> {
    let obstacles = env.inflated_polygons(config.safe_distance);
    generate_path_2d_within(env.start, env.end, &obstacles, config, |q| env.contains(q))
}

/// Runs the planner and also returns the node list after every refinement
/// round.
pub fn generate_path_2d_traced(
    start: Point2,
    end: Point2,
    obstacles: &[Polygon2],
    config: &PlannerConfig,
) -> (Result<Path2D, PlanError>, Vec<Vec<Point2>>) {
    let mut trace = Vec::new();
    let result = run(start, end, obstacles, config, |_| true, |nodes| trace.push(nodes.to_vec()));
    (result, trace)
}

fn run(
    start: Point2,
    end: Point2,
    obstacles: &[Polygon2],
    config: &PlannerConfig,
    in_bounds: impl Fn(Point2) -> bool,
    mut observe: impl FnMut(&[Point2]),
) -> Result<Path2D, PlanError> {
    config.validate()?;
    Segment2::new(start, end)?;
    for (which, p) in [("start", start), ("end", end)] {
        if let Some(i) = obstacles.iter().position(|o| o.contains_strict(p)) {
            return Err(PlanError::StartOrGoalBlocked { which, obstacle: i });
        }
    }

    let dir = end - start;
    let along = |p: Point2| (p - start).dot(dir);
    let mut nodes = vec![start, end];
    let mut iterations_used = 0;

    for _ in 0..config.max_iter {
        let mut collision_found = false;
        let mut added = 0usize;
        let segments: Vec<(Point2, Point2)> = nodes.windows(2).map(|w| (w[0], w[1])).collect();
        for (s, e) in segments {
            let Ok(seg) = Segment2::new(s, e) else { continue };
            if !collision_detected(&seg, obstacles) {
                continue;
            }
            collision_found = true;
            let candidates = candidate_vertices(s, e, obstacles, config.vertex_scope);
            let v = max_distance_vertex(&candidates, s, e, config.tie_break)?;
            let node = add_new_node(v, config, &in_bounds)?;
            if nodes.iter().any(|n| n.distance(node) < DEDUP_TOL) {
                continue;
            }
            let at = nodes.len() - 1;
            nodes.insert(at, node);
            added += 1;
        }
        if !collision_found {
            return Ok(finish(nodes, iterations_used));
        }
        iterations_used += 1;
        if added == 0 {
            return Err(PlanError::NoPathWithinBudget { iterations: iterations_used });
        }
        let last = nodes.len() - 1;
        nodes[1..last].sort_by(|a, b| along(*a).total_cmp(&along(*b)).then(a.z.total_cmp(&b.z)).then(a.x.total_cmp(&b.x)));
        observe(&nodes);
    }

    let free = nodes
        .windows(2)
        .all(|w| Segment2::new(w[0], w[1]).map_or(true, |seg| !collision_detected(&seg, obstacles)));
    if free {
        Ok(finish(nodes, iterations_used))
    } else {
        Err(PlanError::NoPathWithinBudget { iterations: iterations_used })
    }
}

fn finish(nodes: Vec<Point2>, iterations_used: usize) -> Path2D {
    let key_nodes = (1..nodes.len() - 1).collect();
    Path2D { nodes, key_nodes, iterations_used }
}
