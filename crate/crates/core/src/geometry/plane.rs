use super::{GeometryError, Point2, Point3, ON_PLANE_TOL};

/// A plane through the planning start and end, rotated about their joining
/// axis by `theta_deg`, together with an orthonormal in-plane chart.
///
/// The chart maps `u_axis` (start→end) to planar `x` and `v_axis` to planar
/// `z`, with `frame_origin` at the planar origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub theta_deg: f64,
    pub frame_origin: Point3,
    pub u_axis: Point3,
    pub v_axis: Point3,
}

impl Plane {
    pub fn normal(&self) -> Point3 {
        Point3::new(self.a, self.b, self.c)
    }

    /// Signed value of the plane equation at `p`.
    pub fn evaluate(&self, p: Point3) -> f64 {
        self.a * p.x + self.b * p.y + self.c * p.z + self.d
    }

    pub fn to_plane_coords(&self, p: Point3) -> Result<Point2, GeometryError> {
        let off = self.evaluate(p).abs() / self.normal().norm();
        if !(off < ON_PLANE_TOL) {
            return Err(GeometryError::OffPlanePoint { distance: off });
        }
        let rel = p - self.frame_origin;
        Ok(Point2::new(rel.dot(self.u_axis), rel.dot(self.v_axis)))
    }

    pub fn from_plane_coords(&self, q: Point2) -> Point3 {
        self.frame_origin + self.u_axis * q.x + self.v_axis * q.z
    }

    /// Orthogonal projection followed by the chart map; never fails.
    pub fn chart_of(&self, p: Point3) -> Point2 {
        let rel = project_point(self, p) - self.frame_origin;
        Point2::new(rel.dot(self.u_axis), rel.dot(self.v_axis))
    }
}

/// Rotation of `v` about the unit `axis` by `theta` radians, written out as the
/// full axis-angle matrix.
fn rotate_about(axis: Point3, theta: f64, v: Point3) -> Point3 {
    let (ux, uy, uz) = (axis.x, axis.y, axis.z);
    let c = theta.cos();
    let s = theta.sin();
    let cp = 1.0 - c;
    let r = [
        [c + ux * ux * cp, ux * uy * cp - uz * s, ux * uz * cp + uy * s],
        [uy * ux * cp + uz * s, c + uy * uy * cp, uy * uz * cp - ux * s],
        [uz * ux * cp - uy * s, uz * uy * cp + ux * s, c + uz * uz * cp],
    ];
    Point3::new(
        r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
        r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
        r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
    )
}

/// Builds the plane containing `start` and `end` at sweep angle `theta_deg`.
///
/// The zero-angle normal is `axis × (0,0,1)` (or `axis × (0,1,0)` for a
/// near-vertical axis), so `theta = 0` is a vertical plane.
pub fn build_plane(start: Point3, end: Point3, theta_deg: f64) -> Result<Plane, GeometryError> {
    if !start.is_finite() || !end.is_finite() || !theta_deg.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    let direction = end - start;
    let axis = direction
        .normalized()
        .ok_or(GeometryError::DegenerateSegment { x: start.x, z: start.z })?;

    let up = Point3::new(0.0, 0.0, 1.0);
    let initial = match axis.cross(up).normalized() {
        Some(n) if axis.cross(up).norm() > 1e-9 => n,
        _ => axis
            .cross(Point3::new(0.0, 1.0, 0.0))
            .normalized()
            .expect("axis is vertical so it cannot be parallel to y"),
    };

    let normal = rotate_about(axis, theta_deg.to_radians(), initial)
        .normalized()
        .expect("rotation preserves length");
    let v_axis = normal.cross(axis).normalized().expect("normal is orthogonal to axis");
    let d = -normal.dot(start);
    Ok(Plane {
        a: normal.x,
        b: normal.y,
        c: normal.z,
        d,
        theta_deg,
        frame_origin: start,
        u_axis: axis,
        v_axis,
    })
}

/// Orthogonal projection of `p` onto the plane.
pub fn project_point(plane: &Plane, p: Point3) -> Point3 {
    let n = plane.normal();
    let t = plane.evaluate(p) / n.dot(n);
    p - n * t
}
