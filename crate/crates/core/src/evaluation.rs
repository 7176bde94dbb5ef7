//! Path metrics (length, clearance, smoothness) and the weighted quality score
//! used to pick the best plane candidate. Lower scores are better.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Aabb3, Point2, Point3, Polygon2, Segment2};

/// Clearance reported when there is nothing to collide with.
pub const NO_OBSTACLE_CLEARANCE: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("a path needs at least 2 nodes, got {0}")]
    TooShort(usize),
    #[error("no candidates to score")]
    EmptyCandidateSet,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationWeights {
    pub w_length: f64,
    pub w_safety: f64,
    pub w_smoothness: f64,
}

impl Default for EvaluationWeights {
    fn default() -> Self {
        Self { w_length: 0.4, w_safety: 0.4, w_smoothness: 0.2 }
    }
}

impl EvaluationWeights {
    pub fn validate(&self) -> Result<(), EvalError> {
        let w = [self.w_length, self.w_safety, self.w_smoothness];
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
            return Err(EvalError::InvalidWeights(format!("weights must be >= 0 with a positive sum, got {w:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathMetrics {
    pub length: f64,
    pub min_clearance: f64,
    pub smoothness: f64,
    pub score: f64,
}

/// Points that support the metric computations.
pub trait PathPoint: Copy {
    fn distance(self, other: Self) -> f64;
    fn lerp(self, other: Self, t: f64) -> Self;
    /// Angle in `[0, π]` between `b − a` and `c − b`.
    fn turning_angle(a: Self, b: Self, c: Self) -> f64;
}

fn angle_between(dot: f64, n1: f64, n2: f64) -> f64 {
    (dot / (n1 * n2)).clamp(-1.0, 1.0).acos()
}

impl PathPoint for Point2 {
    fn distance(self, other: Self) -> f64 {
        Point2::distance(self, other)
    }
    fn lerp(self, other: Self, t: f64) -> Self {
        Point2::lerp(self, other, t)
    }
    fn turning_angle(a: Self, b: Self, c: Self) -> f64 {
        let (u, v) = (b - a, c - b);
        angle_between(u.dot(v), u.norm(), v.norm())
    }
}

impl PathPoint for Point3 {
    fn distance(self, other: Self) -> f64 {
        Point3::distance(self, other)
    }
    fn lerp(self, other: Self, t: f64) -> Self {
        Point3::lerp(self, other, t)
    }
    fn turning_angle(a: Self, b: Self, c: Self) -> f64 {
        let (u, v) = (b - a, c - b);
        angle_between(u.dot(v), u.norm(), v.norm())
    }
}

/// Obstacles that can report their distance to points and segments (zero
/// on contact).
pub trait Clearance<P> {
    fn clearance_to(&self, p: P) -> f64;
    fn segment_clearance(&self, a: P, b: P) -> f64;
    /// A cheap lower bound on the distance to anything inside the axis-aligned
    /// bounding box of `points`.
    fn lower_bound(&self, points: &[P]) -> f64;
}

impl Clearance<Point3> for Aabb3 {
    fn clearance_to(&self, p: Point3) -> f64 {
        self.distance_to_point(p)
    }
    fn segment_clearance(&self, a: Point3, b: Point3) -> f64 {
        self.segment_distance(a, b)
    }
    fn lower_bound(&self, points: &[Point3]) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]);
        for p in points {
            for (k, v) in p.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let (bmin, bmax) = (self.min.to_array(), self.max.to_array());
        (0..3).map(|k| (bmin[k] - hi[k]).max(lo[k] - bmax[k]).max(0.0).powi(2)).sum::<f64>().sqrt()
    }
}

impl Clearance<Point2> for Polygon2 {
    fn clearance_to(&self, p: Point2) -> f64 {
        self.distance_to_point(p)
    }
    fn segment_clearance(&self, a: Point2, b: Point2) -> f64 {
        match Segment2::new(a, b) {
            Ok(seg) => self.segment_distance(&seg),
            Err(_) => self.distance_to_point(a),
        }
    }
    fn lower_bound(&self, points: &[Point2]) -> f64 {
        let (plo, phi) = self.bounds();
        let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.z.min(p.z));
            hi = Point2::new(hi.x.max(p.x), hi.z.max(p.z));
        }
        let gx = (plo.x - hi.x).max(lo.x - phi.x).max(0.0);
        let gz = (plo.z - hi.z).max(lo.z - phi.z).max(0.0);
        gx.hypot(gz)
    }
}

pub fn path_length<P: PathPoint>(nodes: &[P]) -> Result<f64, EvalError> {
    if nodes.len() < 2 {
        return Err(EvalError::TooShort(nodes.len()));
    }
    Ok(nodes.windows(2).map(|w| w[0].distance(w[1])).sum())
}

/// Minimum distance from any sample to the nearest obstacle, or
/// [`NO_OBSTACLE_CLEARANCE`] without obstacles.
pub fn path_clearance<P: PathPoint, O: Clearance<P>>(samples: &[P], obstacles: &[O]) -> f64 {
    if obstacles.is_empty() {
        return NO_OBSTACLE_CLEARANCE;
    }
    samples
        .iter()
        .flat_map(|&s| obstacles.iter().map(move |o| o.clearance_to(s)))
        .fold(f64::INFINITY, f64::min)
}

/// Sum of turning angles at interior nodes, after dropping repeated
/// consecutive nodes.
pub fn path_smoothness<P: PathPoint>(nodes: &[P]) -> Result<f64, EvalError> {
    if nodes.len() < 2 {
        return Err(EvalError::TooShort(nodes.len()));
    }
    let mut dedup: Vec<P> = Vec::with_capacity(nodes.len());
    for &n in nodes {
        if dedup.last().is_none_or(|l: &P| l.distance(n) > 0.0) {
            dedup.push(n);
        }
    }
    Ok(dedup.windows(3).map(|w| P::turning_angle(w[0], w[1], w[2])).sum())
}

/// Minimum distance from the polyline through `nodes` (every point on it,
/// not only the nodes) to the nearest obstacle, or [`NO_OBSTACLE_CLEARANCE`]
/// without obstacles.
pub fn polyline_clearance<P: PathPoint, O: Clearance<P>>(nodes: &[P], obstacles: &[O]) -> f64 {
    if obstacles.is_empty() {
        return NO_OBSTACLE_CLEARANCE;
    }
    if nodes.len() == 1 {
        return path_clearance(nodes, obstacles);
    }
    let mut order: Vec<(f64, &O)> = obstacles.iter().map(|o| (o.lower_bound(nodes), o)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for (bound, o) in order {
        if bound >= best {
            break;
        }
        for w in nodes.windows(2) {
            if o.lower_bound(w) < best {
                best = best.min(o.segment_clearance(w[0], w[1]));
            }
        }
    }
    best
}

/// Subdivides every segment into `ceil(len / step)` equal pieces. The result
/// keeps all original nodes and has `Σ ceil(len / step) + 1` points.
pub fn densify<P: PathPoint>(nodes: &[P], step: f64) -> Vec<P> {
    let Some(&first) = nodes.first() else { return vec![] };
    let mut out = vec![first];
    for w in nodes.windows(2) {
        let pieces = (w[0].distance(w[1]) / step).ceil() as usize;
        for i in 1..pieces {
            out.push(w[0].lerp(w[1], i as f64 / pieces as f64));
        }
        if pieces > 0 {
            out.push(w[1]);
        }
    }
    out
}

/// Number of points [`densify`] would produce, without allocating them.
pub fn densified_count<P: PathPoint>(nodes: &[P], step: f64) -> usize {
    if nodes.is_empty() {
        return 0;
    }
    1 + nodes.windows(2).map(|w| (w[0].distance(w[1]) / step).ceil() as usize).sum::<usize>()
}

/// Spacing used to densify paths for the node-count metric.
pub const DENSIFY_STEP_MM: f64 = 1.0;

/// Length, clearance and smoothness of an executed path; `score` is left at
/// zero until candidates are compared.
///
/// `samples` are smoothed curve points when smoothing succeeded; otherwise
/// metrics are taken on `polyline`. Clearance is measured exactly along the
/// segments joining consecutive points, the limit of dense sampling.
pub fn measure_path<P: PathPoint, O: Clearance<P>>(
    polyline: &[P],
    samples: Option<&[P]>,
    obstacles: &[O],
) -> Result<PathMetrics, EvalError> {
    let executed = samples.unwrap_or(polyline);
    Ok(PathMetrics {
        length: path_length(executed)?,
        min_clearance: polyline_clearance(executed, obstacles),
        smoothness: path_smoothness(executed)?,
        score: 0.0,
    })
}

fn normalize(values: impl Iterator<Item = f64> + Clone) -> Vec<f64> {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.clone().fold(f64::NEG_INFINITY, f64::max);
    values.map(|v| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 }).collect()
}

/// Scores candidates by min-max normalizing each metric over the set.
/// Larger clearance is better, so the safety term uses `1 − Ĉ`. A constant
/// metric normalizes to 0 for every candidate.
pub fn score_candidates(metrics: &[PathMetrics], weights: &EvaluationWeights) -> Result<Vec<f64>, EvalError> {
    if metrics.is_empty() {
        return Err(EvalError::EmptyCandidateSet);
    }
    weights.validate()?;
    let l = normalize(metrics.iter().map(|m| m.length));
    let c = normalize(metrics.iter().map(|m| m.min_clearance));
    let a = normalize(metrics.iter().map(|m| m.smoothness));
    Ok((0..metrics.len())
        .map(|i| {
            weights.w_length * l[i] + weights.w_safety * (1.0 - c[i]) + weights.w_smoothness * a[i]
        })
        .collect())
}
