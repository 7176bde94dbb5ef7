//! Geometric primitives shared by every planner.
//!
//! Planar quantities use an `(x, z)` chart: `x` runs along the horizontal (or,
//! on a swept plane, along the start→end direction) and `z` is the in-plane
//! "height" that the local-minima planner detours beneath. All coordinates
//! are millimetres.

mod aabb;
mod hull;
mod plane;
mod polygon;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use aabb::Aabb3;
pub use hull::convex_hull_2d;
pub use plane::{build_plane, project_point, Plane};
pub use polygon::Polygon2;

/// Absolute tolerance for algebraic identities (mm).
pub const ALGEBRAIC_TOL: f64 = 1e-9;
/// Absolute tolerance for plane membership (mm).
pub const ON_PLANE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate segment: start and end coincide at ({x}, {z})")]
    DegenerateSegment { x: f64, z: f64 },
    #[error("point lies {distance} mm off the plane")]
    OffPlanePoint { distance: f64 },
    #[error("convex hull is degenerate ({distinct} distinct points, collinear or too few)")]
    DegenerateHull { distinct: usize },
    #[error("sweep angle {0} deg outside [0, 180)")]
    AngleOutOfRange(f64),
    #[error("non-finite coordinate")]
    NonFinite,
}

/// A point in a planar `(x, z)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub z: f64,
}

/// A point in world space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point2 {
    pub const fn new(x: f64, z: f64) -> Self {
        Self { x, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.z * other.z
    }

    /// z-component of the 3D cross product of `(x, 0, z)` vectors, sign flipped
    /// so that a counter-clockwise turn in the `(x, z)` chart is positive.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.z - self.z * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.z.is_finite()
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        self + (other - self) * t
    }
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        self + (other - self) * t
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Drops the `y` coordinate.
    pub fn xz(self) -> Point2 {
        Point2::new(self.x, self.z)
    }
}

macro_rules! impl_vector_ops {
    ($t:ident { $($f:ident),+ }) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                $t { $($f: self.$f + rhs.$f),+ }
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                $t { $($f: self.$f - rhs.$f),+ }
            }
        }
        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, rhs: f64) -> $t {
                $t { $($f: self.$f * rhs),+ }
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t { $($f: -self.$f),+ }
            }
        }
    };
}

impl_vector_ops!(Point2 { x, z });
impl_vector_ops!(Point3 { x, y, z });

/// A non-degenerate planar segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2 {
    pub start: Point2,
    pub end: Point2,
}

impl Segment2 {
    pub fn new(start: Point2, end: Point2) -> Result<Self, GeometryError> {
        if !start.is_finite() || !end.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if start == end {
            return Err(GeometryError::DegenerateSegment { x: start.x, z: start.z });
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    pub fn midpoint(&self) -> Point2 {
        self.start.lerp(self.end, 0.5)
    }

    /// Euclidean distance from `p` to the closed segment.
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        let d = self.end - self.start;
        let t = ((p - self.start).dot(d) / d.dot(d)).clamp(0.0, 1.0);
        p.distance(self.start + d * t)
    }
}

/// A non-degenerate spatial segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment3 {
    pub start: Point3,
    pub end: Point3,
}

impl Segment3 {
    pub fn new(start: Point3, end: Point3) -> Result<Self, GeometryError> {
        if !start.is_finite() || !end.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if start == end {
            return Err(GeometryError::DegenerateSegment { x: start.x, z: start.z });
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }
}

/// Counter-clockwise orientation predicate in the `(x, z)` chart.
///
/// Strict inequality: collinear triples report `false`.
pub fn ccw(a: Point2, b: Point2, c: Point2) -> bool {
    (c.z - a.z) * (b.x - a.x) > (b.z - a.z) * (c.x - a.x)
}

/// Proper-crossing test built from four orientation predicates.
pub fn segments_intersect(ab: &Segment2, cd: &Segment2) -> bool {
    let (a, b, c, d) = (ab.start, ab.end, cd.start, cd.end);
    ccw(a, c, d) != ccw(b, c, d) && ccw(a, b, c) != ccw(a, b, d)
}

/// Perpendicular distance from `v` to the infinite line through `s` and `e`.
pub fn point_segment_line_distance(v: Point2, s: Point2, e: Point2) -> Result<f64, GeometryError> {
    if s == e {
        return Err(GeometryError::DegenerateSegment { x: s.x, z: s.z });
    }
    let (x1, z1, x2, z2) = (s.x, s.z, e.x, e.z);
    let num = ((z2 - z1) * v.x - (x2 - x1) * v.z + x2 * z1 - z2 * x1).abs();
    let den = ((z2 - z1).powi(2) + (x2 - x1).powi(2)).sqrt();
    Ok(num / den)
}
