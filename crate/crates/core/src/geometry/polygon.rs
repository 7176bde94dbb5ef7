use super::{convex_hull_2d, segments_intersect, GeometryError, Point2, Segment2};

/// A simple polygon with counter-clockwise vertices in the `(x, z)` chart.
///
/// Two-vertex polygons are allowed and stand for segment obstacles (the
/// projection of a box seen exactly edge-on); they have no interior.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2 {
    vertices: Vec<Point2>,
}

impl Polygon2 {
    /// Validates finiteness and orientation; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if vertices.len() < 2 {
            return Err(GeometryError::DegenerateHull { distinct: vertices.len() });
        }
        let poly = Self { vertices: vertices.clone() };
        if poly.signed_area() < 0.0 {
            vertices.reverse();
            return Ok(Self { vertices });
        }
        Ok(poly)
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    /// Axis-aligned rectangle `[x0, x1] × [z0, z1]`.
    pub fn rectangle(x0: f64, z0: f64, x1: f64, z1: f64) -> Self {
        Self {
            vertices: vec![
                Point2::new(x0, z0),
                Point2::new(x1, z0),
                Point2::new(x1, z1),
                Point2::new(x0, z1),
            ],
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2> + '_ {
        let n = self.vertices.len();
        let count = if n == 2 { 1 } else { n };
        (0..count).filter_map(move |i| Segment2::new(self.vertices[i], self.vertices[(i + 1) % n]).ok())
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            * 0.5
    }

    pub fn min_z(&self) -> f64 {
        self.vertices.iter().map(|v| v.z).fold(f64::INFINITY, f64::min)
    }

    /// All vertices attaining the minimum `z`, in vertex order.
    pub fn min_z_vertices(&self) -> impl Iterator<Item = Point2> + '_ {
        let lo = self.min_z();
        self.vertices.iter().copied().filter(move |v| v.z == lo)
    }

    pub fn bounds(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Point2::new(lo.x.min(v.x), lo.z.min(v.z));
            hi = Point2::new(hi.x.max(v.x), hi.z.max(v.z));
        }
        (lo, hi)
    }

    fn on_boundary(&self, p: Point2) -> bool {
        self.edges().any(|e| e.distance_to_point(p) <= 1e-12)
    }

    /// True iff `p` lies in the open interior (boundary points are outside).
    pub fn contains_strict(&self, p: Point2) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        let (lo, hi) = self.bounds();
        if p.x <= lo.x || p.x >= hi.x || p.z <= lo.z || p.z >= hi.z {
            return false;
        }
        if self.on_boundary(p) {
            return false;
        }
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            if (a.z > p.z) != (b.z > p.z) && p.x < (b.x - a.x) * (p.z - a.z) / (b.z - a.z) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    /// Euclidean distance from `p` to the polygon boundary, zero when `p` is
    /// inside.
    pub fn distance_to_point(&self, p: Point2) -> f64 {
        if self.contains_strict(p) {
            return 0.0;
        }
        self.edges().map(|e| e.distance_to_point(p)).fold(f64::INFINITY, f64::min)
    }

    /// Distance between the closed segment and the polygon, zero when they
    /// touch or the segment runs inside.
    pub fn segment_distance(&self, seg: &Segment2) -> f64 {
        if self.contains_strict(seg.start) || self.contains_strict(seg.end) {
            return 0.0;
        }
        if self.edges().any(|e| segments_intersect(seg, &e)) {
            return 0.0;
        }
        let ends = [seg.start, seg.end].into_iter().map(|p| self.distance_to_point(p));
        let verts = self.vertices.iter().map(|&v| seg.distance_to_point(v));
        ends.chain(verts).fold(f64::INFINITY, f64::min)
    }

    /// Grows the polygon by `margin` along both chart axes: the convex hull of
    /// every vertex shifted by `(±margin, ±margin)`. Exact for convex input,
    /// conservative otherwise.
    pub fn inflate(&self, margin: f64) -> Polygon2 {
        if margin == 0.0 && self.vertices.len() >= 3 {
            return self.clone();
        }
        let pts: Vec<Point2> = self
            .vertices
            .iter()
            .flat_map(|v| {
                [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
                    .map(|(sx, sz)| Point2::new(v.x + sx * margin, v.z + sz * margin))
            })
            .collect();
        convex_hull_2d(&pts).unwrap_or_else(|_| self.clone())
    }

    /// Whether the segment passes through the open interior.
    ///
    /// Proper edge crossings and strictly-inside endpoints are caught by the
    /// orientation test. A segment can also enter and leave through vertices
    /// without any proper crossing; those cases are resolved by probing the
    /// midpoints between consecutive vertex contacts.
    pub fn blocks(&self, seg: &Segment2) -> bool {
        if self.vertices.len() < 3 {
            return self.edges().any(|e| segments_intersect(seg, &e));
        }
        let (lo, hi) = self.bounds();
        let (s, e) = (seg.start, seg.end);
        if s.x.max(e.x) <= lo.x || s.x.min(e.x) >= hi.x || s.z.max(e.z) <= lo.z || s.z.min(e.z) >= hi.z {
            return false;
        }
        if self.edges().any(|edge| segments_intersect(seg, &edge)) {
            return true;
        }
        if self.contains_strict(s) || self.contains_strict(e) {
            return true;
        }
        let d = e - s;
        let len2 = d.dot(d);
        let mut contacts: Vec<f64> = self
            .vertices
            .iter()
            .filter(|v| seg.distance_to_point(**v) <= 1e-9)
            .map(|v| ((*v - s).dot(d) / len2).clamp(0.0, 1.0))
            .collect();
        if contacts.is_empty() {
            return false;
        }
        contacts.push(0.0);
        contacts.push(1.0);
        contacts.sort_by(f64::total_cmp);
        contacts
            .windows(2)
            .any(|w| w[1] - w[0] > 1e-12 && self.contains_strict(s.lerp(e, 0.5 * (w[0] + w[1]))))
    }
}
