//! Comparison planners: grid A*, RRT and RRT-Connect in the plane, a
//! goal-biased RRT in space, and the lowest-point descent heuristic (LPS).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::environment::{Environment, Environment2D};
use crate::evaluation::{measure_path, PathMetrics, PathPoint};
use crate::geometry::{segments_intersect, Aabb3, Point2, Point3, Polygon2, Segment2};
use crate::ilmsa2d::Path2D;
use crate::planner3d::Path3D;

/// Label of the 3D RRT, which samples the whole volume with goal biasing.
pub const RRT3D_LABEL: &str = "rrt3d-goalbias";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("no path found")]
    NoPath,
    #[error("{which} point is blocked by obstacle `{obstacle_id}`")]
    StartOrGoalBlocked { which: &'static str, obstacle_id: String },
    #[error("travel height {height} is below the floor {floor} or the corridor is obstructed")]
    CorridorBlocked { height: f64, floor: f64 },
    #[error("invalid baseline configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    /// A* cell size (mm).
    pub grid_resolution: f64,
    /// RRT extension length (mm).
    pub step_size: f64,
    pub goal_bias: f64,
    pub max_samples: usize,
    pub rng_seed: u64,
    /// Obstacle inflation (mm).
    pub clearance_e: f64,
    /// Half-width of the LPS corridor around the start→goal footprint (mm).
    pub corridor_radius: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 5.0,
            step_size: 10.0,
            goal_bias: 0.05,
            max_samples: 10_000,
            rng_seed: 0,
            clearance_e: 5.0,
            corridor_radius: 20.0,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<(), BaselineError> {
        let bad = |m: String| Err(BaselineError::InvalidConfig(m));
        if !(self.grid_resolution > 0.0 && self.grid_resolution.is_finite()) {
            return bad(format!("grid_resolution must be > 0, got {}", self.grid_resolution));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad(format!("step_size must be > 0, got {}", self.step_size));
        }
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return bad(format!("goal_bias must be in [0, 1], got {}", self.goal_bias));
        }
        if self.max_samples < 1 {
            return bad("max_samples must be >= 1".into());
        }
        if !(self.clearance_e >= 0.0 && self.corridor_radius >= 0.0) {
            return bad("clearance_e and corridor_radius must be >= 0".into());
        }
        Ok(())
    }
}

fn path2d_from(nodes: Vec<Point2>) -> Path2D {
    let key_nodes = (1..nodes.len().saturating_sub(1)).collect();
    Path2D { nodes, key_nodes, iterations_used: 0 }
}

fn check_endpoints_2d(env: &Environment2D, inflated: &[Polygon2]) -> Result<(), BaselineError> {
    for (which, p) in [("start", env.start), ("end", env.end)] {
        if let Some(i) = inflated.iter().position(|o| o.contains_strict(p)) {
            return Err(BaselineError::StartOrGoalBlocked { which, obstacle_id: env.obstacles[i].id.clone() });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- A* ----

/// Whether the open square `[x0, x1] × [z0, z1]` shares interior with the
/// convex polygon, by separating axes (box axes plus polygon edge normals).
fn cell_overlaps(poly: &Polygon2, x0: f64, z0: f64, x1: f64, z1: f64) -> bool {
    if poly.len() < 3 {
        let Ok(cell) = Segment2::new(Point2::new(x0, z0), Point2::new(x1, z1)) else { return false };
        let diag = Segment2::new(Point2::new(x0, z1), Point2::new(x1, z0)).expect("non-degenerate cell");
        return poly.edges().any(|e| segments_intersect(&e, &cell) || segments_intersect(&e, &diag));
    }
    let (lo, hi) = poly.bounds();
    if hi.x <= x0 || lo.x >= x1 || hi.z <= z0 || lo.z >= z1 {
        return false;
    }
    let corners = [Point2::new(x0, z0), Point2::new(x1, z0), Point2::new(x1, z1), Point2::new(x0, z1)];
    for e in poly.edges() {
        let d = e.end - e.start;
        let n = Point2::new(d.z, -d.x);
        let project = |pts: &mut dyn Iterator<Item = Point2>| {
            pts.map(|p| p.dot(n)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
        };
        let (pa, pb) = project(&mut poly.vertices().iter().copied());
        let (ca, cb) = project(&mut corners.iter().copied());
        if pb <= ca || cb <= pa {
            return false;
        }
    }
    true
}

/// Occupancy grid over the environment bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub origin: Point2,
    pub resolution: f64,
    pub nx: usize,
    pub nz: usize,
    pub blocked: Vec<bool>,
}

impl Grid {
    pub fn build(env: &Environment2D, inflated: &[Polygon2], resolution: f64) -> Self {
        let origin = env.bounds_min;
        let nx = (((env.bounds_max.x - origin.x) / resolution).ceil() as usize).max(1);
        let nz = (((env.bounds_max.z - origin.z) / resolution).ceil() as usize).max(1);
        let mut blocked = vec![false; nx * nz];
        for poly in inflated {
            let (lo, hi) = poly.bounds();
            let i0 = (((lo.x - origin.x) / resolution).floor().max(0.0) as usize).min(nx - 1);
            let i1 = (((hi.x - origin.x) / resolution).floor().max(0.0) as usize).min(nx - 1);
            let j0 = (((lo.z - origin.z) / resolution).floor().max(0.0) as usize).min(nz - 1);
            let j1 = (((hi.z - origin.z) / resolution).floor().max(0.0) as usize).min(nz - 1);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let (x0, z0) = (origin.x + i as f64 * resolution, origin.z + j as f64 * resolution);
                    if !blocked[j * nx + i] && cell_overlaps(poly, x0, z0, x0 + resolution, z0 + resolution) {
                        blocked[j * nx + i] = true;
                    }
                }
            }
        }
        Self { origin, resolution, nx, nz, blocked }
    }

    pub fn cell_of(&self, p: Point2) -> (usize, usize) {
        let i = ((p.x - self.origin.x) / self.resolution).floor().max(0.0) as usize;
        let j = ((p.z - self.origin.z) / self.resolution).floor().max(0.0) as usize;
        (i.min(self.nx - 1), j.min(self.nz - 1))
    }

    pub fn center(&self, (i, j): (usize, usize)) -> Point2 {
        Point2::new(
            self.origin.x + (i as f64 + 0.5) * self.resolution,
            self.origin.z + (j as f64 + 0.5) * self.resolution,
        )
    }

    pub fn is_blocked(&self, (i, j): (usize, usize)) -> bool {
        self.blocked[j * self.nx + i]
    }

    /// 8-connected moves without corner cutting: a diagonal needs both
    /// orthogonal neighbours free. Yields `(cell, is_diagonal)`.
    pub fn neighbours(&self, (i, j): (usize, usize)) -> impl Iterator<Item = ((usize, usize), bool)> + '_ {
        const MOVES: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
        MOVES.iter().filter_map(move |&(di, dj)| {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= self.nx as i64 || nj >= self.nz as i64 {
                return None;
            }
            let cell = (ni as usize, nj as usize);
            if self.is_blocked(cell) {
                return None;
            }
            let diagonal = di != 0 && dj != 0;
            if diagonal && (self.is_blocked((ni as usize, j)) || self.is_blocked((i, nj as usize))) {
                return None;
            }
            Some((cell, diagonal))
        })
    }
}

/// Grid path cost as counts of orthogonal and diagonal moves; compared by
/// `orth + diag·√2`, which is exact because √2 is irrational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GridCost {
    pub orth: u64,
    pub diag: u64,
}

impl GridCost {
    pub fn value(self) -> f64 {
        self.orth as f64 + self.diag as f64 * std::f64::consts::SQRT_2
    }

    pub fn step(self, diagonal: bool) -> Self {
        if diagonal {
            Self { diag: self.diag + 1, ..self }
        } else {
            Self { orth: self.orth + 1, ..self }
        }
    }
}

struct Open {
    f: f64,
    g: GridCost,
    cell: (usize, usize),
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Open {
    // Min-heap on f, ties broken towards larger g (deeper nodes), then cell.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.value().total_cmp(&other.g.value()))
            .then(other.cell.cmp(&self.cell))
    }
}

/// Result of a grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    pub cells: Vec<(usize, usize)>,
    pub cost: GridCost,
}

/// A* from cell to cell with the Euclidean heuristic (in cell units).
pub fn grid_astar(grid: &Grid, from: (usize, usize), to: (usize, usize)) -> Option<GridPath> {
    let n = grid.nx * grid.nz;
    let idx = |(i, j): (usize, usize)| j * grid.nx + i;
    let h = |(i, j): (usize, usize)| ((i as f64 - to.0 as f64).powi(2) + (j as f64 - to.1 as f64).powi(2)).sqrt();
    let mut best: Vec<Option<GridCost>> = vec![None; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    best[idx(from)] = Some(GridCost::default());
    open.push(Open { f: h(from), g: GridCost::default(), cell: from });
    while let Some(Open { g, cell, .. }) = open.pop() {
        if closed[idx(cell)] {
            continue;
        }
        closed[idx(cell)] = true;
        if cell == to {
            let mut cells = vec![cell];
            let mut k = idx(cell);
            while parent[k] != usize::MAX {
                k = parent[k];
                cells.push((k % grid.nx, k / grid.nx));
            }
            cells.reverse();
            return Some(GridPath { cells, cost: g });
        }
        for (nb, diagonal) in grid.neighbours(cell) {
            let k = idx(nb);
            if closed[k] {
                continue;
            }
            let ng = g.step(diagonal);
            if best[k].is_none_or(|old| ng.value() < old.value()) {
                best[k] = Some(ng);
                parent[k] = idx(cell);
                open.push(Open { f: ng.value() + h(nb), g: ng, cell: nb });
            }
        }
    }
    None
}

/// The free cell, among the one containing `p` and its eight neighbours,
/// whose center is nearest to `p` and reachable from it in a straight line.
fn snap_to_grid(grid: &Grid, p: Point2, inflated: &[Polygon2]) -> Option<(usize, usize)> {
    let (i, j) = grid.cell_of(p);
    let mut best: Option<(f64, (usize, usize))> = None;
    for nj in j.saturating_sub(1)..=(j + 1).min(grid.nz - 1) {
        for ni in i.saturating_sub(1)..=(i + 1).min(grid.nx - 1) {
            let cell = (ni, nj);
            if grid.is_blocked(cell) {
                continue;
            }
            let c = grid.center(cell);
            let reachable = match Segment2::new(p, c) {
                Ok(seg) => !inflated.iter().any(|o| o.blocks(&seg)),
                Err(_) => true,
            };
            let d = p.distance(c);
            if reachable && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, cell));
            }
        }
    }
    best.map(|(_, cell)| cell)
}

/// 8-connected grid A* with the Euclidean heuristic. The path runs from the
/// start through the centers of the visited cells to the goal; start and goal
/// attach to the nearest free cell around them that they can see.
pub fn astar_2d(env: &Environment2D, config: &BaselineConfig) -> Result<Path2D, BaselineError> {
    config.validate()?;
    let inflated = env.inflated_polygons(config.clearance_e);
    check_endpoints_2d(env, &inflated)?;
    let grid = Grid::build(env, &inflated, config.grid_resolution);
    let mut ends = [(0, 0); 2];
    for (k, (which, p)) in [("start", env.start), ("end", env.end)].into_iter().enumerate() {
        ends[k] = snap_to_grid(&grid, p, &inflated).ok_or_else(|| {
            let c = grid.center(grid.cell_of(p));
            let i = inflated.iter().enumerate().min_by(|a, b| a.1.distance_to_point(c).total_cmp(&b.1.distance_to_point(c)));
            let obstacle_id = i.map_or_else(String::new, |(i, _)| env.obstacles[i].id.clone());
            BaselineError::StartOrGoalBlocked { which, obstacle_id }
        })?;
    }
    let [from, to] = ends;
    let found = grid_astar(&grid, from, to).ok_or(BaselineError::NoPath)?;
    let mut nodes = vec![env.start];
    nodes.extend(found.cells.iter().map(|&c| grid.center(c)));
    nodes.push(env.end);
    nodes.dedup();
    Ok(path2d_from(nodes))
}

// --------------------------------------------------------- RRT family ----

struct Tree<P> {
    nodes: Vec<P>,
    parent: Vec<usize>,
}

impl<P: PathPoint> Tree<P> {
    fn new(root: P) -> Self {
        Self { nodes: vec![root], parent: vec![usize::MAX] }
    }

    fn nearest(&self, q: P) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, n) in self.nodes.iter().enumerate() {
            let d = n.distance(q);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    fn push(&mut self, p: P, parent: usize) -> usize {
        self.nodes.push(p);
        self.parent.push(parent);
        self.nodes.len() - 1
    }

    /// Root-to-`i` node sequence.
    fn branch(&self, mut i: usize) -> Vec<P> {
        let mut out = vec![self.nodes[i]];
        while self.parent[i] != usize::MAX {
            i = self.parent[i];
            out.push(self.nodes[i]);
        }
        out.reverse();
        out
    }
}

fn steer<P: PathPoint>(from: P, to: P, step: f64) -> P {
    let d = from.distance(to);
    if d <= step {
        to
    } else {
        from.lerp(to, step / d)
    }
}

/// Planning space used by the RRT variants.
trait Space<P> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> P;
    fn free(&self, a: P, b: P) -> bool;
}

struct Plane2<'a> {
    lo: Point2,
    hi: Point2,
    obstacles: &'a [Polygon2],
}

impl Space<Point2> for Plane2<'_> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point2 {
        Point2::new(rng.gen_range(self.lo.x..=self.hi.x), rng.gen_range(self.lo.z..=self.hi.z))
    }
    fn free(&self, a: Point2, b: Point2) -> bool {
        match Segment2::new(a, b) {
            Ok(seg) => !self.obstacles.iter().any(|o| o.blocks(&seg)),
            Err(_) => !self.obstacles.iter().any(|o| o.contains_strict(a)),
        }
    }
}

struct Volume<'a> {
    bounds: Aabb3,
    obstacles: &'a [Aabb3],
}

impl Space<Point3> for Volume<'_> {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point3 {
        let (lo, hi) = (self.bounds.min, self.bounds.max);
        Point3::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y), rng.gen_range(lo.z..=hi.z))
    }
    fn free(&self, a: Point3, b: Point3) -> bool {
        !self.obstacles.iter().any(|o| o.segment_blocks(a, b) || o.contains_strict(a) || o.contains_strict(b))
    }
}

fn rrt<P: PathPoint + PartialEq>(space: &impl Space<P>, start: P, goal: P, config: &BaselineConfig) -> Option<Vec<P>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut tree = Tree::new(start);
    if space.free(start, goal) && start.distance(goal) <= config.step_size {
        return Some(vec![start, goal]);
    }
    for _ in 0..config.max_samples {
        let q = if rng.gen::<f64>() < config.goal_bias { goal } else { space.sample(&mut rng) };
        let near = tree.nearest(q);
        let new = steer(tree.nodes[near], q, config.step_size);
        if new == tree.nodes[near] || !space.free(tree.nodes[near], new) {
            continue;
        }
        let i = tree.push(new, near);
        if new == goal {
            return Some(tree.branch(i));
        }
        if new.distance(goal) <= config.step_size && space.free(new, goal) {
            let g = tree.push(goal, i);
            return Some(tree.branch(g));
        }
    }
    None
}

enum Extend {
    Trapped,
    Advanced(usize),
    Reached(usize),
}

fn extend<P: PathPoint + PartialEq>(space: &impl Space<P>, tree: &mut Tree<P>, q: P, step: f64) -> Extend {
    let near = tree.nearest(q);
    let new = steer(tree.nodes[near], q, step);
    if new == tree.nodes[near] || !space.free(tree.nodes[near], new) {
        return Extend::Trapped;
    }
    let i = tree.push(new, near);
    if new == q {
        Extend::Reached(i)
    } else {
        Extend::Advanced(i)
    }
}

fn rrt_connect<P: PathPoint + PartialEq>(space: &impl Space<P>, start: P, goal: P, config: &BaselineConfig) -> Option<Vec<P>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut a = Tree::new(start);
    let mut b = Tree::new(goal);
    let mut a_is_start = true;
    for _ in 0..config.max_samples {
        let q = space.sample(&mut rng);
        if let Extend::Advanced(i) | Extend::Reached(i) = extend(space, &mut a, q, config.step_size) {
            let target = a.nodes[i];
            loop {
                match extend(space, &mut b, target, config.step_size) {
                    Extend::Advanced(_) => continue,
                    Extend::Trapped => break,
                    Extend::Reached(j) => {
                        let mut from_a = a.branch(i);
                        let mut from_b = b.branch(j);
                        from_b.pop(); // shared meeting point
                        from_b.reverse();
                        from_a.extend(from_b);
                        if !a_is_start {
                            from_a.reverse();
                        }
                        return Some(from_a);
                    }
                }
            }
        }
        std::mem::swap(&mut a, &mut b);
        a_is_start = !a_is_start;
    }
    None
}

fn plane_space<'a>(env: &Environment2D, inflated: &'a [Polygon2]) -> Plane2<'a> {
    Plane2 { lo: env.bounds_min, hi: env.bounds_max, obstacles: inflated }
}

/// Goal-biased RRT in the plane. Deterministic for a fixed `rng_seed`.
pub fn rrt_2d(env: &Environment2D, config: &BaselineConfig) -> Result<Path2D, BaselineError> {
    config.validate()?;
    let inflated = env.inflated_polygons(config.clearance_e);
    check_endpoints_2d(env, &inflated)?;
    rrt(&plane_space(env, &inflated), env.start, env.end, config).map(path2d_from).ok_or(BaselineError::NoPath)
}

/// Bidirectional RRT-Connect in the plane.
pub fn rrt_connect_2d(env: &Environment2D, config: &BaselineConfig) -> Result<Path2D, BaselineError> {
    config.validate()?;
    let inflated = env.inflated_polygons(config.clearance_e);
    check_endpoints_2d(env, &inflated)?;
    rrt_connect(&plane_space(env, &inflated), env.start, env.end, config)
        .map(path2d_from)
        .ok_or(BaselineError::NoPath)
}

fn check_endpoints_3d(env: &Environment, inflated: &[Aabb3]) -> Result<(), BaselineError> {
    for (which, p) in [("start", env.start), ("end", env.end)] {
        if let Some(i) = inflated.iter().position(|o| o.contains_strict(p)) {
            return Err(BaselineError::StartOrGoalBlocked { which, obstacle_id: env.obstacles[i].id.clone() });
        }
    }
    Ok(())
}

fn path3d_from(env: &Environment, algorithm: &str, nodes: Vec<Point3>) -> Path3D {
    let metrics = measure_path(&nodes, None, &env.raw_boxes()).unwrap_or(PathMetrics {
        length: 0.0,
        min_clearance: 0.0,
        smoothness: 0.0,
        score: 0.0,
    });
    Path3D {
        algorithm: algorithm.into(),
        plane_theta_deg: None,
        key_node_count: nodes.len().saturating_sub(2),
        nodes,
        smoothed: vec![],
        metrics,
        score: None,
    }
}

/// Goal-biased RRT in the bounding volume with exact segment-box checks.
pub fn rrt_3d(env: &Environment, config: &BaselineConfig) -> Result<Path3D, BaselineError> {
    config.validate()?;
    let inflated = env.inflated_boxes(config.clearance_e);
    check_endpoints_3d(env, &inflated)?;
    let space = Volume { bounds: env.bounds(), obstacles: &inflated };
    let nodes = rrt(&space, env.start, env.end, config).ok_or(BaselineError::NoPath)?;
    Ok(path3d_from(env, RRT3D_LABEL, nodes))
}

// ---------------------------------------------------------------- LPS ----

/// Distance between a segment and an axis-aligned rectangle in the `x-y`
/// footprint plane (zero when they touch). Points are `(x, y)` stored in
/// [`Point2`]'s `(x, z)` slots.
fn segment_rect_distance(a: Point2, b: Point2, lo: Point2, hi: Point2) -> f64 {
    let inside = |p: Point2| p.x >= lo.x && p.x <= hi.x && p.z >= lo.z && p.z <= hi.z;
    if inside(a) || inside(b) {
        return 0.0;
    }
    let rect = Polygon2::rectangle(lo.x, lo.z, hi.x, hi.z);
    let point_seg = |p: Point2, s: Point2, e: Point2| match Segment2::new(s, e) {
        Ok(seg) => seg.distance_to_point(p),
        Err(_) => p.distance(s),
    };
    if let Ok(seg) = Segment2::new(a, b) {
        if rect.edges().any(|e| segments_intersect(&seg, &e)) {
            return 0.0;
        }
    }
    let to_rect = [a, b].into_iter().map(|p| rect.distance_to_point(p));
    let to_seg = rect.vertices().iter().map(|&v| point_seg(v, a, b));
    to_rect.chain(to_seg).fold(f64::INFINITY, f64::min)
}

/// Travel height of the lowest-point heuristic: just under the lowest
/// inflated box whose footprint meets the corridor, capped by the endpoint
/// heights so the final phase is an ascent.
pub fn lps_travel_height(env: &Environment, config: &BaselineConfig) -> f64 {
    let (a, b) = (Point2::new(env.start.x, env.start.y), Point2::new(env.end.x, env.end.y));
    let h = env
        .inflated_boxes(config.clearance_e)
        .iter()
        .filter(|o| {
            segment_rect_distance(a, b, Point2::new(o.min.x, o.min.y), Point2::new(o.max.x, o.max.y)) < config.corridor_radius
        })
        .map(|o| o.min.z)
        .fold(f64::INFINITY, f64::min);
    h.min(env.start.z).min(env.end.z)
}

/// Lowest-point heuristic: descend to the travel height, move horizontally
/// under the goal, then rise to it.
pub fn lps_3d(env: &Environment, config: &BaselineConfig) -> Result<Path3D, BaselineError> {
    config.validate()?;
    let inflated = env.inflated_boxes(config.clearance_e);
    check_endpoints_3d(env, &inflated)?;
    let t = lps_travel_height(env, config);
    let floor = env.bounds_min.z;
    if t < floor {
        return Err(BaselineError::CorridorBlocked { height: t, floor });
    }
    let mut nodes = vec![env.start];
    for p in [Point3::new(env.start.x, env.start.y, t), Point3::new(env.end.x, env.end.y, t), env.end] {
        if nodes.last() != Some(&p) {
            nodes.push(p);
        }
    }
    if nodes.windows(2).any(|w| inflated.iter().any(|o| o.segment_blocks(w[0], w[1]))) {
        return Err(BaselineError::CorridorBlocked { height: t, floor });
    }
    Ok(path3d_from(env, "lps", nodes))
}
