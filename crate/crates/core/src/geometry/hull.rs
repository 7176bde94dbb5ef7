use super::{GeometryError, Point2, Polygon2};

/// Convex hull by Andrew's monotone chain. Vertices come back counter-clockwise
/// starting from the lowest-x (then lowest-z) point, collinear points dropped.
pub fn convex_hull_2d(points: &[Point2]) -> Result<Polygon2, GeometryError> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.z.total_cmp(&b.z)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeometryError::DegenerateHull { distinct: pts.len() });
    }

    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(GeometryError::DegenerateHull { distinct: pts.len() });
    }
    Ok(Polygon2::from_vertices_unchecked(hull))
}
