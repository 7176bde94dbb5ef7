//! B-spline smoothing of polyline paths by de Boor evaluation.
//!
//! The planner's path nodes are used directly as control points. Clamped
//! knot vectors make the curve interpolate the first and last node, which are
//! hard constraints (start and goal).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Aabb3, Point3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmoothingError {
    #[error("{n_control} control points cannot define a degree-{degree} spline")]
    TooFewControlPoints { n_control: usize, degree: usize },
    #[error("parameter {t} outside the valid range [{lo}, {hi}]")]
    ParameterOutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("invalid spline configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplineConfig {
    pub degree: usize,
    pub samples_per_segment: usize,
    pub clamped: bool,
}

impl Default for SplineConfig {
    fn default() -> Self {
        Self { degree: 3, samples_per_segment: 20, clamped: true }
    }
}

impl SplineConfig {
    pub fn validate(&self) -> Result<(), SmoothingError> {
        if self.degree < 1 {
            return Err(SmoothingError::InvalidConfig("degree must be >= 1".into()));
        }
        if self.samples_per_segment < 2 {
            return Err(SmoothingError::InvalidConfig("samples_per_segment must be >= 2".into()));
        }
        Ok(())
    }
}

/// Knot vector of length `n_control + degree + 1`.
///
/// Clamped: `degree + 1` zeros, uniform interior knots, `degree + 1` ones.
/// Unclamped: uniform knots `i / (n_control + degree)`.
pub fn knot_vector(n_control: usize, degree: usize, clamped: bool) -> Result<Vec<f64>, SmoothingError> {
    if n_control <= degree {
        return Err(SmoothingError::TooFewControlPoints { n_control, degree });
    }
    let m = n_control + degree + 1;
    if !clamped {
        let last = (m - 1) as f64;
        return Ok((0..m).map(|i| i as f64 / last).collect());
    }
    let interior = n_control - degree - 1;
    let mut knots = vec![0.0; degree + 1];
    knots.extend((1..=interior).map(|i| i as f64 / (interior + 1) as f64));
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    Ok(knots)
}

/// Index `k` of the knot span with `knots[k] <= t < knots[k + 1]`, restricted
/// to `degree..n_control`; the right end of the range maps to the last
/// non-empty span.
fn find_span(knots: &[f64], n_control: usize, degree: usize, t: f64) -> usize {
    if t >= knots[n_control] {
        let mut k = n_control - 1;
        while k > degree && knots[k] == knots[k + 1] {
            k -= 1;
        }
        return k;
    }
    let mut k = degree;
    while k + 1 < n_control && knots[k + 1] <= t {
        k += 1;
    }
    k
}

/// Evaluates the spline at `t` with the de Boor recursion.
pub fn de_boor(knots: &[f64], control_points: &[Point3], degree: usize, t: f64) -> Result<Point3, SmoothingError> {
    let n = control_points.len();
    if n <= degree || knots.len() != n + degree + 1 {
        return Err(SmoothingError::TooFewControlPoints { n_control: n, degree });
    }
    let (lo, hi) = (knots[degree], knots[n]);
    if !(lo..=hi).contains(&t) {
        return Err(SmoothingError::ParameterOutOfRange { t, lo, hi });
    }
    let mut scratch = Vec::with_capacity(degree + 1);
    Ok(de_boor_in_span(knots, control_points, degree, t, find_span(knots, n, degree, t), &mut scratch))
}

/// de Boor recursion on span `k`, reusing `d` as the working triangle.
fn de_boor_in_span(knots: &[f64], control_points: &[Point3], degree: usize, t: f64, k: usize, d: &mut Vec<Point3>) -> Point3 {
    d.clear();
    d.extend_from_slice(&control_points[k - degree..=k]);
    for r in 1..=degree {
        for j in (r..=degree).rev() {
            let i = j + k - degree;
            let denom = knots[i + degree + 1 - r] - knots[i];
            let alpha = if denom == 0.0 { 0.0 } else { (t - knots[i]) / denom };
            d[j] = d[j - 1] * (1.0 - alpha) + d[j] * alpha;
        }
    }
    d[degree]
}

/// Samples the smoothed curve, `samples_per_segment` points per non-empty
/// knot span. The last span includes its right end so the final sample is
/// the last control point. Paths with too few control points are returned
/// unchanged.
pub fn generate_bspline_3d(control_points: &[Point3], config: &SplineConfig) -> Vec<Point3> {
    let degree = config.degree;
    let Ok(knots) = knot_vector(control_points.len(), degree, config.clamped) else {
        return control_points.to_vec();
    };
    let n = control_points.len();
    let spans: Vec<usize> = (degree..n).filter(|&k| knots[k + 1] > knots[k]).collect();
    let s = config.samples_per_segment;
    let mut out = Vec::with_capacity(spans.len() * s);
    let mut scratch = Vec::with_capacity(degree + 1);
    for (idx, &k) in spans.iter().enumerate() {
        let (a, b) = (knots[k], knots[k + 1]);
        let last = idx + 1 == spans.len();
        let denom = if last { (s - 1) as f64 } else { s as f64 };
        for i in 0..s {
            let t = if last && i == s - 1 { b } else { a + (b - a) * i as f64 / denom };
            out.push(de_boor_in_span(&knots, control_points, degree, t, k, &mut scratch));
        }
    }
    out
}

/// Whether every consecutive sample segment stays out of the boxes inflated
/// by `margin`. The test is exact (segment-box slab clipping), so it is at
/// least as strict as any fixed-step sampling.
pub fn validate_smoothed(samples: &[Point3], obstacles: &[Aabb3], margin: f64) -> bool {
    let inflated: Vec<Aabb3> = obstacles.iter().map(|b| b.inflate(margin)).collect();
    if samples.len() == 1 {
        return !inflated.iter().any(|b| b.contains_strict(samples[0]));
    }
    samples.windows(2).all(|w| !inflated.iter().any(|b| b.segment_blocks(w[0], w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    /// Cox-de Boor basis function `N_{i,k}(t)` by direct recursion, with the
    /// right end of the parameter range assigned to the last non-empty span.
    fn basis(knots: &[f64], i: usize, k: usize, t: f64, t_end: f64) -> f64 {
        if k == 0 {
            let in_span = knots[i] <= t && t < knots[i + 1];
            let at_end = t == t_end && knots[i] < knots[i + 1] && knots[i + 1] == t_end;
            return if in_span || at_end { 1.0 } else { 0.0 };
        }
        let mut v = 0.0;
        let d1 = knots[i + k] - knots[i];
        if d1 > 0.0 {
            v += (t - knots[i]) / d1 * basis(knots, i, k - 1, t, t_end);
        }
        let d2 = knots[i + k + 1] - knots[i + 1];
        if d2 > 0.0 {
            v += (knots[i + k + 1] - t) / d2 * basis(knots, i + 1, k - 1, t, t_end);
        }
        v
    }

    fn basis_sum(knots: &[f64], ctrl: &[Point3], degree: usize, t: f64) -> Point3 {
        let t_end = knots[ctrl.len()];
        ctrl.iter()
            .enumerate()
            .fold(p(0., 0., 0.), |acc, (i, c)| acc + *c * basis(knots, i, degree, t, t_end))
    }

    #[test]
    fn knot_vector_examples() {
        assert_eq!(knot_vector(4, 3, true).unwrap(), vec![0., 0., 0., 0., 1., 1., 1., 1.]);
        assert_eq!(knot_vector(5, 3, true).unwrap(), vec![0., 0., 0., 0., 0.5, 1., 1., 1., 1.]);
        assert_eq!(knot_vector(3, 3, true), Err(SmoothingError::TooFewControlPoints { n_control: 3, degree: 3 }));
        assert_eq!(knot_vector(4, 3, false).unwrap().len(), 8);
    }

    #[test]
    fn constant_control_points() {
        let c = vec![p(1., 2., 3.); 6];
        let knots = knot_vector(6, 3, true).unwrap();
        for t in [0.0, 0.2, 0.5, 0.99, 1.0] {
            assert_eq!(de_boor(&knots, &c, 3, t).unwrap(), p(1., 2., 3.));
        }
    }

    #[test]
    fn clamped_ends_and_range() {
        let c = vec![p(0., 0., 0.), p(1., 5., 0.), p(3., -2., 1.), p(4., 0., 7.), p(9., 9., 9.)];
        let knots = knot_vector(5, 3, true).unwrap();
        assert_eq!(de_boor(&knots, &c, 3, 0.0).unwrap(), c[0]);
        assert!(de_boor(&knots, &c, 3, 1.0).unwrap().distance(c[4]) < 1e-12);
        assert!(matches!(de_boor(&knots, &c, 3, 1.5), Err(SmoothingError::ParameterOutOfRange { .. })));
    }

    #[test]
    fn sample_counts_and_pass_through() {
        let cfg = SplineConfig::default();
        let two = vec![p(0., 0., 0.), p(1., 1., 1.)];
        assert_eq!(generate_bspline_3d(&two, &cfg), two);
        let four = vec![p(0., 0., 50.), p(40., 0., 35.), p(60., 0., 35.), p(100., 0., 50.)];
        let s = generate_bspline_3d(&four, &cfg);
        assert_eq!(s.len(), 20);
        assert_eq!(s[0], four[0]);
        assert!(s[19].distance(four[3]) < 1e-9);
        let six: Vec<Point3> = (0..6).map(|i| p(i as f64, (i * i) as f64, 0.)).collect();
        assert_eq!(generate_bspline_3d(&six, &cfg).len(), 3 * 20);
    }

    #[test]
    fn validation_catches_corner_cutting() {
        // The polyline grazes the inflated box (clearance exactly e to the raw
        // box); the quadratic spline through the same nodes cuts the corner.
        let raw = Aabb3::new(p(40., -10., 40.), p(60., 10., 60.));
        let poly = vec![p(0., 0., 35.), p(65., 0., 35.), p(65., 0., 100.)];
        assert!(validate_smoothed(&poly, &[raw], 5.0));
        let curve = generate_bspline_3d(&poly, &SplineConfig { degree: 2, ..Default::default() });
        assert!(!validate_smoothed(&curve, &[raw], 5.0));
        assert!(validate_smoothed(&curve, &[], 5.0));
    }

    proptest! {
        #[test]
        fn de_boor_matches_basis_summation(
            raw in proptest::collection::vec((-100.0..100.0f64, -100.0..100.0f64, -100.0..100.0f64), 4..12),
            degree in 1usize..4,
            t in 0.0..=1.0f64,
        ) {
            let ctrl: Vec<Point3> = raw.iter().map(|&(x, y, z)| p(x, y, z)).collect();
            let knots = knot_vector(ctrl.len(), degree, true).unwrap();
            let a = de_boor(&knots, &ctrl, degree, t).unwrap();
            let b = basis_sum(&knots, &ctrl, degree, t);
            prop_assert!(a.distance(b) < 1e-9);
        }

        #[test]
        fn collinear_control_points_stay_on_line(ts in proptest::collection::vec(0.0..1.0f64, 4..10)) {
            let (a, b) = (p(1., 2., 3.), p(11., -4., 8.));
            let ctrl: Vec<Point3> = ts.iter().map(|&t| a.lerp(b, t)).collect();
            let dir = (b - a).normalized().unwrap();
            for q in generate_bspline_3d(&ctrl, &SplineConfig::default()) {
                let w = q - a;
                let off = w - dir * w.dot(dir);
                prop_assert!(off.norm() < 1e-9);
            }
        }
    }
}
