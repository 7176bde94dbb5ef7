use super::Point3;

/// Axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb3 {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb3 {
    pub const fn new(min: Point3, max: Point3) -> Self {
        Self { min, max }
    }

    pub fn inflate(&self, margin: f64) -> Self {
        let m = Point3::new(margin, margin, margin);
        Self::new(self.min - m, self.max + m)
    }

    pub fn corners(&self) -> [Point3; 8] {
        let (a, b) = (self.min, self.max);
        [
            Point3::new(a.x, a.y, a.z),
            Point3::new(b.x, a.y, a.z),
            Point3::new(a.x, b.y, a.z),
            Point3::new(b.x, b.y, a.z),
            Point3::new(a.x, a.y, b.z),
            Point3::new(b.x, a.y, b.z),
            Point3::new(a.x, b.y, b.z),
            Point3::new(b.x, b.y, b.z),
        ]
    }

    pub fn center(&self) -> Point3 {
        self.min.lerp(self.max, 0.5)
    }

    /// Closed containment.
    pub fn contains(&self, p: Point3) -> bool {
        (self.min.x..=self.max.x).contains(&p.x)
            && (self.min.y..=self.max.y).contains(&p.y)
            && (self.min.z..=self.max.z).contains(&p.z)
    }

    /// Open-interior containment: points on a face are outside.
    pub fn contains_strict(&self, p: Point3) -> bool {
        p.x > self.min.x
            && p.x < self.max.x
            && p.y > self.min.y
            && p.y < self.max.y
            && p.z > self.min.z
            && p.z < self.max.z
    }

    /// Whether two boxes share interior volume.
    pub fn overlaps(&self, other: &Aabb3) -> bool {
        self.min.x < other.max.x
            && other.min.x < self.max.x
            && self.min.y < other.max.y
            && other.min.y < self.max.y
            && self.min.z < other.max.z
            && other.min.z < self.max.z
    }

    /// Whether the closed segment `a-b` passes through the open interior.
    /// Grazing a face, edge or corner is not a collision.
    pub fn segment_blocks(&self, a: Point3, b: Point3) -> bool {
        let d = b - a;
        let mut enter = 0.0f64;
        let mut exit = 1.0f64;
        for (p, dv, lo, hi) in [
            (a.x, d.x, self.min.x, self.max.x),
            (a.y, d.y, self.min.y, self.max.y),
            (a.z, d.z, self.min.z, self.max.z),
        ] {
            if dv == 0.0 {
                if !(p > lo && p < hi) {
                    return false;
                }
            } else {
                let t1 = (lo - p) / dv;
                let t2 = (hi - p) / dv;
                enter = enter.max(t1.min(t2));
                exit = exit.min(t1.max(t2));
                if enter >= exit {
                    return false;
                }
            }
        }
        enter < exit
    }

    /// Exact distance between the closed segment `a-b` and the box.
    ///
    /// The squared distance along the segment is piecewise quadratic, with
    /// pieces delimited by the slab crossings; each piece is minimized in
    /// closed form.
    pub fn segment_distance(&self, a: Point3, b: Point3) -> f64 {
        let d = b - a;
        let (lo, hi) = (self.min.to_array(), self.max.to_array());
        let (pa, pd) = (a.to_array(), d.to_array());
        let mut breaks = [0.0; 8];
        let mut n = 0;
        breaks[n] = 0.0;
        n += 1;
        for k in 0..3 {
            if pd[k] != 0.0 {
                for bound in [lo[k], hi[k]] {
                    let t = (bound - pa[k]) / pd[k];
                    if t > 0.0 && t < 1.0 {
                        breaks[n] = t;
                        n += 1;
                    }
                }
            }
        }
        breaks[n] = 1.0;
        n += 1;
        let breaks = &mut breaks[..n];
        breaks.sort_by(f64::total_cmp);
        let mut best = self.distance_to_point(a).min(self.distance_to_point(b));
        for w in breaks.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 <= t0 {
                continue;
            }
            let mid = 0.5 * (t0 + t1);
            // Per axis, the gap is `alpha + beta·t` (or zero inside the slab).
            let (mut num, mut den) = (0.0, 0.0);
            for k in 0..3 {
                let p = pa[k] + pd[k] * mid;
                let (alpha, beta) = if p < lo[k] {
                    (lo[k] - pa[k], -pd[k])
                } else if p > hi[k] {
                    (pa[k] - hi[k], pd[k])
                } else {
                    continue;
                };
                num += alpha * beta;
                den += beta * beta;
            }
            let t = if den > 0.0 { (-num / den).clamp(t0, t1) } else { mid };
            best = best.min(self.distance_to_point(a + d * t));
        }
        best
    }

    /// Euclidean distance to the box, zero inside.
    pub fn distance_to_point(&self, p: Point3) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        let dz = (self.min.z - p.z).max(0.0).max(p.z - self.max.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Aabb3 {
        Aabb3::new(Point3::new(0., 0., 0.), Point3::new(10., 10., 10.))
    }

    #[test]
    fn segment_through_box() {
        let p = Point3::new;
        assert!(b().segment_blocks(p(-5., 5., 5.), p(15., 5., 5.)));
        assert!(b().segment_blocks(p(5., 5., 5.), p(6., 5., 5.)));
        assert!(!b().segment_blocks(p(-5., 5., 10.), p(15., 5., 10.)));
        assert!(!b().segment_blocks(p(-5., -5., 5.), p(0., 0., 5.)));
        assert!(!b().segment_blocks(p(11., 5., 5.), p(20., 5., 5.)));
        assert!(b().segment_blocks(p(-1., -1., -1.), p(11., 11., 11.)));
    }

    #[test]
    fn segment_distance_matches_dense_sampling() {
        let p = Point3::new;
        assert_eq!(b().segment_distance(p(-5., 5., 15.), p(15., 5., 15.)), 5.0);
        assert_eq!(b().segment_distance(p(-5., 5., 5.), p(15., 5., 5.)), 0.0);
        let cases = [
            (p(-3., 14., -7.), p(22., 17., 4.)),
            (p(13., 13., 13.), p(20., -4., 30.)),
            (p(-1., -2., -3.), p(-4., 25., 12.)),
        ];
        for (a, c) in cases {
            let dense = (0..=100_000)
                .map(|i| b().distance_to_point(a.lerp(c, i as f64 / 100_000.0)))
                .fold(f64::INFINITY, f64::min);
            let exact = b().segment_distance(a, c);
            assert!(exact <= dense + 1e-12 && dense - exact < 1e-3, "{exact} vs {dense}");
        }
    }

    #[test]
    fn distance_outside_and_inside() {
        let p = Point3::new;
        assert_eq!(b().distance_to_point(p(17., 5., 5.)), 7.0);
        assert_eq!(b().distance_to_point(p(5., 5., 5.)), 0.0);
        assert_eq!(b().distance_to_point(p(13., 14., 10.)), 5.0);
    }
}
