//! Small 2D vector geometry: points, orientation tests, segment predicates,
//! and polygon containment. Everything works in plain `f64` with explicit
//! tolerances supplied by the caller.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, treating both as vectors.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    /// Rotate by +90 degrees (counterclockwise).
    pub fn perp_ccw(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Rotate by -90 degrees (clockwise).
    pub fn perp_cw(self) -> Point {
        Point::new(self.y, -self.x)
    }

    /// Direction angle in radians, in (-pi, pi].
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, other: Point, s: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * s, self.y + (other.y - self.y) * s)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle `abc`; positive when counterclockwise.
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Twice the signed area of a polygon given by its vertex cycle.
pub fn polygon_signed_area2(poly: &[Point]) -> f64 {
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        acc += p.cross(q);
    }
    acc
}

/// Distance from `p` to the closed segment `ab`.
pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let s = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * s)
}

/// True when `p` lies on the closed segment `ab` within `tol`.
pub fn point_on_segment(p: Point, a: Point, b: Point, tol: f64) -> bool {
    dist_point_segment(p, a, b) <= tol
}

/// Proper crossing of the open segments `p1q1` and `p2q2`: the interiors
/// intersect transversally. Segments that merely share an endpoint or touch
/// within `tol` of an endpoint do not count.
pub fn segments_cross_properly(p1: Point, q1: Point, p2: Point, q2: Point, tol: f64) -> Option<Point> {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let denom = d1.cross(d2);
    if denom.abs() < 1e-300 {
        return None; // parallel or degenerate
    }
    let s = (p2 - p1).cross(d2) / denom;
    let t = (p2 - p1).cross(d1) / denom;
    let margin1 = tol / d1.norm().max(1e-300);
    let margin2 = tol / d2.norm().max(1e-300);
    if s > margin1 && s < 1.0 - margin1 && t > margin2 && t < 1.0 - margin2 {
        Some(p1 + d1 * s)
    } else {
        None
    }
}

/// Even-odd containment test of `p` in the (possibly non-convex) polygon.
/// Points within `tol` of the boundary are reported as not inside.
pub fn point_in_polygon(p: Point, poly: &[Point], tol: f64) -> bool {
    if poly.len() < 3 {
        return false;
    }
    for i in 0..poly.len() {
        if dist_point_segment(p, poly[i], poly[(i + 1) % poly.len()]) <= tol {
            return false;
        }
    }
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Intersection point of the infinite lines `a + s*da` and `b + t*db`,
/// returning `(s, t, point)`. `None` when the lines are (near-)parallel,
/// judged by the sine of the angle between the directions.
pub fn line_intersection(a: Point, da: Point, b: Point, db: Point) -> Option<(f64, f64, Point)> {
    let denom = da.cross(db);
    let scale = da.norm() * db.norm();
    if scale == 0.0 || denom.abs() < 1e-12 * scale {
        return None;
    }
    let s = (b - a).cross(db) / denom;
    let t = (b - a).cross(da) / denom;
    Some((s, t, a + da * s))
}

/// Normalize an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = a % two_pi;
    if r <= -std::f64::consts::PI {
        r += two_pi;
    } else if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        let c = Point::new(0.0, 1.0);
        assert!(orient2d(a, b, c) > 0.0);
        assert!(orient2d(a, c, b) < 0.0);
        assert_eq!(orient2d(a, b, a.lerp(b, 0.5)), 0.0);
    }

    #[test]
    fn segment_crossing_detection() {
        let hit = segments_cross_properly(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, -1.0),
            Point::new(0.0, 1.0),
            1e-12,
        );
        let p = hit.expect("segments cross");
        assert!(p.norm() < 1e-12);

        // Sharing an endpoint is not a proper crossing.
        assert!(segments_cross_properly(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            1e-12,
        )
        .is_none());
    }

    #[test]
    fn polygon_containment() {
        let square = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        assert!(point_in_polygon(Point::new(1.0, 1.0), &square, 1e-9));
        assert!(!point_in_polygon(Point::new(3.0, 1.0), &square, 1e-9));
        // Boundary points are excluded.
        assert!(!point_in_polygon(Point::new(0.0, 1.0), &square, 1e-9));
    }

    #[test]
    fn line_intersection_parallel() {
        assert!(line_intersection(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(2.0, 0.0),
        )
        .is_none());
        let (s, t, p) = line_intersection(
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 1.0),
        )
        .unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!((t - 2.0).abs() < 1e-12);
        assert!(p.dist(Point::new(2.0, 2.0)) < 1e-12);
    }
}
