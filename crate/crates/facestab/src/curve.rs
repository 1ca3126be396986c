//! Smooth convex curve models: circular arcs, elliptical arcs, and stadium
//! arcs, with the query set needed by the drawing construction and the
//! verifier.
//!
//! Conventions used throughout:
//! - Curves are parameterized counterclockwise, so the region they bound is
//!   on the left of the traversal direction.
//! - `tangent_angle` is the direction angle of the (traversal-oriented)
//!   tangent, continuously unwrapped over the parameter domain. Convexity
//!   makes it monotonically nondecreasing; flat stretches (stadium sides)
//!   give plateaus.
//! - Closed curves use wraparound parameter arithmetic with period
//!   `period()`; open arcs have a plain interval domain.

use crate::geom::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("parameter {t} outside curve domain [{lo}, {hi}]")]
    ParamOutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error("tangent angle {theta} outside range [{lo}, {hi}]")]
    AngleOutOfRange { theta: f64, lo: f64, hi: f64 },
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("invalid curve specification: {0}")]
    BadSpec(String),
}

/// Which pair of opposite rectangle sides carries the semicircular caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CapAxis {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

/// External JSON description of a curve, as read from `--curve` files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CurveSpec {
    #[serde(rename = "circular-arc")]
    CircularArc {
        center: [f64; 2],
        radius: f64,
        angle_start: f64,
        angle_end: f64,
    },
    #[serde(rename = "elliptical-arc")]
    EllipticalArc {
        center: [f64; 2],
        semi_axes: [f64; 2],
        angle_start: f64,
        angle_end: f64,
    },
    #[serde(rename = "stadium-arc")]
    StadiumArc {
        center: [f64; 2],
        rect_width: f64,
        rect_height: f64,
        #[serde(default = "default_caps")]
        caps: CapAxis,
        /// Arclength bounds selecting a sub-arc; omit both for the full
        /// closed boundary.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_start: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_end: Option<f64>,
    },
}

fn default_caps() -> CapAxis {
    CapAxis::X
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        serde_json::from_str(text).map_err(|e| CurveError::BadSpec(e.to_string()))
    }

    pub fn to_model(&self) -> Result<ConvexCurveModel, CurveError> {
        ConvexCurveModel::from_spec(self)
    }
}

/// The supporting closed convex shape of a curve.
#[derive(Debug, Clone)]
enum Shape {
    Circle {
        center: Point,
        radius: f64,
    },
    Ellipse {
        center: Point,
        ax: f64,
        ay: f64,
    },
    /// Set of points at distance `radius` from the spine segment `p0p1`.
    Stadium {
        p0: Point,
        p1: Point,
        radius: f64,
    },
}

/// A parameter interval on a curve. `start <= end`; for closed curves `end`
/// may exceed the domain end, encoding a wrapped (unwrapped-by-period)
/// interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcInterval {
    pub start: f64,
    pub end: f64,
}

impl ArcInterval {
    pub fn new(start: f64, end: f64) -> Self {
        assert!(end >= start, "interval end before start");
        ArcInterval { start, end }
    }

    pub fn span(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.start + self.end)
    }

    pub fn sample(&self, k: usize, n: usize) -> f64 {
        self.start + self.span() * (k as f64) / (n as f64)
    }

    /// Overlap test. For closed curves both intervals are compared on the
    /// circle of circumference `period`; `slack` forgives overlaps up to
    /// that much parameter length.
    pub fn overlaps(&self, other: &ArcInterval, period: Option<f64>, slack: f64) -> bool {
        let linear = |a: &ArcInterval, b: &ArcInterval, shift: f64| {
            a.start < b.end + shift - slack && b.start + shift < a.end - slack
        };
        match period {
            None => linear(self, other, 0.0),
            Some(p) => {
                linear(self, other, 0.0) || linear(self, other, p) || linear(self, other, -p)
            }
        }
    }
}

/// A crossing or touch point of a segment with the curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CurveHit {
    /// Curve parameter of the intersection.
    pub t: f64,
    pub point: Point,
}

/// Result of intersecting one segment with the curve: transversal crossings
/// (sorted by curve parameter) and tangential or endpoint touches.
#[derive(Debug, Clone, Default)]
pub struct SegmentIntersections {
    pub crossings: Vec<CurveHit>,
    pub touches: Vec<CurveHit>,
}

/// Classification of a point against the closed convex hull of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullSide {
    Interior,
    Boundary,
    Exterior,
}

/// A smooth convex curve or arc from the fixed catalog.
#[derive(Debug, Clone)]
pub struct ConvexCurveModel {
    shape: Shape,
    t_lo: f64,
    t_hi: f64,
    closed: bool,
    /// Characteristic length of the shape; tolerances scale with it.
    scale: f64,
    spec: CurveSpec,
}

impl ConvexCurveModel {
    pub fn from_spec(spec: &CurveSpec) -> Result<Self, CurveError> {
        match *spec {
            CurveSpec::CircularArc {
                center,
                radius,
                angle_start,
                angle_end,
            } => {
                if !(radius > 0.0) {
                    return Err(CurveError::BadSpec("radius must be positive".into()));
                }
                check_angular_domain(angle_start, angle_end)?;
                Ok(ConvexCurveModel {
                    shape: Shape::Circle {
                        center: Point::new(center[0], center[1]),
                        radius,
                    },
                    t_lo: angle_start,
                    t_hi: angle_end,
                    closed: is_full_turn(angle_start, angle_end),
                    scale: radius,
                    spec: spec.clone(),
                })
            }
            CurveSpec::EllipticalArc {
                center,
                semi_axes,
                angle_start,
                angle_end,
            } => {
                let (ax, ay) = (semi_axes[0], semi_axes[1]);
                if !(ax > 0.0 && ay > 0.0) {
                    return Err(CurveError::BadSpec("semi-axes must be positive".into()));
                }
                check_angular_domain(angle_start, angle_end)?;
                Ok(ConvexCurveModel {
                    shape: Shape::Ellipse {
                        center: Point::new(center[0], center[1]),
                        ax,
                        ay,
                    },
                    t_lo: angle_start,
                    t_hi: angle_end,
                    closed: is_full_turn(angle_start, angle_end),
                    scale: ax.max(ay),
                    spec: spec.clone(),
                })
            }
            CurveSpec::StadiumArc {
                center,
                rect_width,
                rect_height,
                caps,
                t_start,
                t_end,
            } => {
                if !(rect_width > 0.0 && rect_height > 0.0) {
                    return Err(CurveError::BadSpec("stadium sides must be positive".into()));
                }
                let c = Point::new(center[0], center[1]);
                let (p0, p1, radius) = match caps {
                    CapAxis::X => (
                        c + Point::new(-rect_width / 2.0, 0.0),
                        c + Point::new(rect_width / 2.0, 0.0),
                        rect_height / 2.0,
                    ),
                    CapAxis::Y => (
                        c + Point::new(0.0, -rect_height / 2.0),
                        c + Point::new(0.0, rect_height / 2.0),
                        rect_width / 2.0,
                    ),
                };
                let spine_len = p0.dist(p1);
                let perimeter = 2.0 * spine_len + TWO_PI * radius;
                let (lo, hi) = match (t_start, t_end) {
                    (None, None) => (0.0, perimeter),
                    (Some(a), Some(b)) => {
                        if !(0.0 <= a && a < b && b <= perimeter + 1e-12) {
                            return Err(CurveError::BadSpec(format!(
                                "sub-arc bounds must satisfy 0 <= t_start < t_end <= {perimeter}"
                            )));
                        }
                        (a, b.min(perimeter))
                    }
                    _ => {
                        return Err(CurveError::BadSpec(
                            "t_start and t_end must be given together".into(),
                        ))
                    }
                };
                Ok(ConvexCurveModel {
                    shape: Shape::Stadium { p0, p1, radius },
                    t_lo: lo,
                    t_hi: hi,
                    closed: (hi - lo - perimeter).abs() <= 1e-12,
                    scale: spine_len / 2.0 + radius,
                    spec: spec.clone(),
                })
            }
        }
    }

    /// Unit circular arc helper used pervasively in tests: the upper
    /// semicircle when called with `(0.0, PI)`.
    pub fn circular_arc(center: Point, radius: f64, angle_start: f64, angle_end: f64) -> Self {
        ConvexCurveModel::from_spec(&CurveSpec::CircularArc {
            center: [center.x, center.y],
            radius,
            angle_start,
            angle_end,
        })
        .expect("valid circular arc")
    }

    pub fn elliptical_arc(center: Point, ax: f64, ay: f64, angle_start: f64, angle_end: f64) -> Self {
        ConvexCurveModel::from_spec(&CurveSpec::EllipticalArc {
            center: [center.x, center.y],
            semi_axes: [ax, ay],
            angle_start,
            angle_end,
        })
        .expect("valid elliptical arc")
    }

    pub fn stadium(center: Point, rect_width: f64, rect_height: f64, caps: CapAxis) -> Self {
        ConvexCurveModel::from_spec(&CurveSpec::StadiumArc {
            center: [center.x, center.y],
            rect_width,
            rect_height,
            caps,
            t_start: None,
            t_end: None,
        })
        .expect("valid stadium")
    }

    pub fn stadium_sub_arc(
        center: Point,
        rect_width: f64,
        rect_height: f64,
        caps: CapAxis,
        t_start: f64,
        t_end: f64,
    ) -> Result<Self, CurveError> {
        ConvexCurveModel::from_spec(&CurveSpec::StadiumArc {
            center: [center.x, center.y],
            rect_width,
            rect_height,
            caps,
            t_start: Some(t_start),
            t_end: Some(t_end),
        })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Parameter period of the supporting closed curve.
    pub fn period(&self) -> f64 {
        match self.shape {
            Shape::Circle { .. } | Shape::Ellipse { .. } => TWO_PI,
            Shape::Stadium { p0, p1, radius } => 2.0 * p0.dist(p1) + TWO_PI * radius,
        }
    }

    /// Characteristic length scale; geometric tolerances are `1e-9 * scale`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn geom_tol(&self) -> f64 {
        1e-9 * self.scale
    }

    /// Total turn of the tangent over the whole domain; `2*pi` iff closed,
    /// `0` for a degenerate flat-only arc.
    pub fn total_turn(&self) -> f64 {
        self.tangent_angle_unchecked(self.t_hi) - self.tangent_angle_unchecked(self.t_lo)
    }

    fn check_param(&self, t: f64) -> Result<f64, CurveError> {
        if self.closed {
            return Ok(t);
        }
        let slack = 1e-9 * self.param_scale();
        if t < self.t_lo - slack || t > self.t_hi + slack {
            return Err(CurveError::ParamOutOfDomain {
                t,
                lo: self.t_lo,
                hi: self.t_hi,
            });
        }
        Ok(t.clamp(self.t_lo, self.t_hi))
    }

    /// Rough parameter-units-per-length factor, for converting tolerances.
    fn param_scale(&self) -> f64 {
        match self.shape {
            Shape::Circle { .. } | Shape::Ellipse { .. } => 1.0,
            Shape::Stadium { .. } => self.scale,
        }
    }

    /// Point on the curve at parameter `t`.
    pub fn point_at(&self, t: f64) -> Result<Point, CurveError> {
        let t = self.check_param(t)?;
        Ok(self.point_at_unchecked(t))
    }

    fn point_at_unchecked(&self, t: f64) -> Point {
        match self.shape {
            Shape::Circle { center, radius } => {
                center + Point::new(t.cos(), t.sin()) * radius
            }
            Shape::Ellipse { center, ax, ay } => {
                center + Point::new(ax * t.cos(), ay * t.sin())
            }
            Shape::Stadium { p0, p1, radius } => {
                let (t, _) = self.stadium_reduce(t);
                let d = (p1 - p0).normalized();
                let n = d.perp_ccw();
                let len = p0.dist(p1);
                if t <= len {
                    // bottom flat
                    p0 - n * radius + d * t
                } else if t <= len + PI * radius {
                    // cap around p1, sweeping from -n to +n
                    let theta = (t - len) / radius;
                    p1 + rotate(-n, theta) * radius
                } else if t <= 2.0 * len + PI * radius {
                    // top flat
                    p1 + n * radius - d * (t - len - PI * radius)
                } else {
                    // cap around p0, sweeping from +n to -n
                    let theta = (t - 2.0 * len - PI * radius) / radius;
                    p0 + rotate(n, theta) * radius
                }
            }
        }
    }

    /// Reduce a stadium parameter into `[0, period)` and count the winding.
    fn stadium_reduce(&self, t: f64) -> (f64, f64) {
        let p = self.period();
        let k = (t / p).floor();
        (t - k * p, k)
    }

    /// Direction angle of the traversal-oriented tangent, continuously
    /// unwrapped over the parameter domain (and periodically extended for
    /// closed curves).
    pub fn tangent_angle(&self, t: f64) -> Result<f64, CurveError> {
        let t = self.check_param(t)?;
        Ok(self.tangent_angle_unchecked(t))
    }

    fn tangent_angle_unchecked(&self, t: f64) -> f64 {
        match self.shape {
            Shape::Circle { .. } => t + PI / 2.0,
            Shape::Ellipse { ax, ay, .. } => {
                // Angle of (-ax sin t, ay cos t), unwrapped by comparing with
                // the circle tangent at the same parameter; the two are never
                // more than a quarter-turn apart.
                let s = t.sin();
                let c = t.cos();
                let cross = (ax - ay) * s * c;
                let dot = ax * s * s + ay * c * c;
                t + PI / 2.0 + cross.atan2(dot)
            }
            Shape::Stadium { p0, p1, radius } => {
                let (tr, winding) = self.stadium_reduce(t);
                let len = p0.dist(p1);
                let base = (p1 - p0).angle();
                let local = if tr <= len {
                    0.0
                } else if tr <= len + PI * radius {
                    (tr - len) / radius
                } else if tr <= 2.0 * len + PI * radius {
                    PI
                } else {
                    PI + (tr - 2.0 * len - PI * radius) / radius
                };
                base + local + winding * TWO_PI
            }
        }
    }

    /// Unit tangent vector at `t`, oriented with the traversal.
    pub fn tangent_dir(&self, t: f64) -> Result<Point, CurveError> {
        let phi = self.tangent_angle(t)?;
        Ok(Point::new(phi.cos(), phi.sin()))
    }

    /// Unit normal pointing away from the convex side (to the right of the
    /// counterclockwise traversal).
    pub fn outward_normal(&self, t: f64) -> Result<Point, CurveError> {
        Ok(self.tangent_dir(t)?.perp_cw())
    }

    /// Inverse of `tangent_angle`. On a flat stretch whose constant angle
    /// equals `theta`, returns the midpoint parameter of the stretch.
    pub fn param_for_angle(&self, theta: f64) -> Result<f64, CurveError> {
        let lo = self.tangent_angle_unchecked(self.t_lo);
        let hi = self.tangent_angle_unchecked(self.t_hi);
        let slack = 1e-9;
        if theta < lo - slack || theta > hi + slack {
            return Err(CurveError::AngleOutOfRange { theta, lo, hi });
        }
        let theta = theta.clamp(lo, hi);
        match self.shape {
            Shape::Circle { .. } => Ok(theta - PI / 2.0),
            Shape::Ellipse { .. } => {
                // Strictly monotone: plain bisection.
                let mut a = self.t_lo;
                let mut b = self.t_hi;
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if self.tangent_angle_unchecked(m) < theta {
                        a = m;
                    } else {
                        b = m;
                    }
                    if b - a < 1e-15 * self.param_scale().max(1.0) {
                        break;
                    }
                }
                Ok(0.5 * (a + b))
            }
            Shape::Stadium { .. } => {
                // Piecewise linear with plateaus: take the lowest and highest
                // parameters attaining theta and return their midpoint, which
                // is the plateau midpoint on flats and the unique preimage on
                // caps.
                let lo_t = self.monotone_search(theta, true);
                let hi_t = self.monotone_search(theta, false);
                Ok(0.5 * (lo_t + hi_t))
            }
        }
    }

    /// Binary search on the nondecreasing tangent angle: smallest parameter
    /// with angle >= theta (when `lower`), else largest with angle <= theta.
    fn monotone_search(&self, theta: f64, lower: bool) -> f64 {
        let mut a = self.t_lo;
        let mut b = self.t_hi;
        let eps = 1e-12;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let phi = self.tangent_angle_unchecked(m);
            if lower {
                if phi >= theta - eps {
                    b = m;
                } else {
                    a = m;
                }
            } else if phi <= theta + eps {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-14 * (1.0 + self.param_scale()) {
                break;
            }
        }
        0.5 * (a + b)
    }

    /// Total curvature of an arc: the tangent-angle change across it.
    pub fn arc_curvature(&self, arc: &ArcInterval) -> f64 {
        self.tangent_angle_unchecked(arc.end) - self.tangent_angle_unchecked(arc.start)
    }

    /// Signed distance from `p` to the supporting closed shape (negative
    /// inside). Exact for circles and stadiums; first-order normalized for
    /// ellipses (accurate near the boundary, sign-correct everywhere).
    pub fn shape_signed_distance(&self, p: Point) -> f64 {
        match self.shape {
            Shape::Circle { center, radius } => p.dist(center) - radius,
            Shape::Ellipse { center, ax, ay } => {
                let u = (p.x - center.x) / ax;
                let v = (p.y - center.y) / ay;
                let q = u * u + v * v - 1.0;
                let gx = 2.0 * u / ax;
                let gy = 2.0 * v / ay;
                let g = gx.hypot(gy);
                if g < 1e-12 {
                    return -ax.min(ay); // at the center
                }
                q / g
            }
            Shape::Stadium { p0, p1, radius } => {
                crate::geom::dist_point_segment(p, p0, p1) - radius
            }
        }
    }

    /// Signed distance from `p` to the closed convex hull of the curve
    /// (negative inside). For open arcs the hull is the region bounded by
    /// the arc and its closing chord; for a degenerate flat-only arc the
    /// hull is the chord itself.
    pub fn hull_signed_distance(&self, p: Point) -> f64 {
        let sd_shape = self.shape_signed_distance(p);
        if self.closed {
            return sd_shape;
        }
        let a = self.point_at_unchecked(self.t_lo);
        let b = self.point_at_unchecked(self.t_hi);
        if self.total_turn() <= 1e-12 {
            // Flat-only arc: the hull is the segment itself.
            return crate::geom::dist_point_segment(p, a, b);
        }
        // Halfplane bounded by the chord, on the side containing the arc.
        let chord = b - a;
        let mut normal = chord.perp_ccw().normalized();
        let mid = self.point_at_unchecked(0.5 * (self.t_lo + self.t_hi));
        if (mid - a).dot(normal) > 0.0 {
            normal = -normal;
        }
        let sd_halfplane = (p - a).dot(normal);
        sd_shape.max(sd_halfplane)
    }

    /// Classify `p` against the closed convex hull of the curve, with a
    /// tolerance band of `geom_tol()` for the boundary.
    pub fn hull_side(&self, p: Point) -> HullSide {
        let d = self.hull_signed_distance(p);
        let tol = self.geom_tol();
        if d > tol {
            HullSide::Exterior
        } else if d < -tol {
            HullSide::Interior
        } else {
            HullSide::Boundary
        }
    }

    /// Curve parameter of a point assumed to lie on the supporting shape
    /// boundary, mapped into `[t_lo, t_lo + period)`.
    fn param_of_boundary_point(&self, p: Point) -> f64 {
        let raw = match self.shape {
            Shape::Circle { center, .. } => (p - center).angle(),
            Shape::Ellipse { center, ax, ay } => {
                ((p.y - center.y) / ay).atan2((p.x - center.x) / ax)
            }
            Shape::Stadium { p0, p1, radius } => {
                let d = (p1 - p0).normalized();
                let n = d.perp_ccw();
                let len = p0.dist(p1);
                let s = (p - p0).dot(d);
                if s <= 0.0 {
                    // cap around p0: ccw angle from +n to the radial direction
                    let theta = angle_ccw_from(n, p - p0);
                    return self.map_into_domain(2.0 * len + PI * radius + radius * theta);
                }
                if s >= len {
                    let theta = angle_ccw_from(-n, p - p1);
                    return self.map_into_domain(len + radius * theta);
                }
                if (p - p0).dot(n) < 0.0 {
                    return self.map_into_domain(s);
                }
                return self.map_into_domain(len + PI * radius + (len - s));
            }
        };
        self.map_into_domain(raw)
    }

    /// Map a raw parameter (angle or arclength) into `[t_lo, t_lo + period)`.
    fn map_into_domain(&self, raw: f64) -> f64 {
        let p = self.period();
        let mut t = (raw - self.t_lo).rem_euclid(p) + self.t_lo;
        if t >= self.t_lo + p {
            t -= p;
        }
        t
    }

    /// Whether a parameter in `[t_lo, t_lo + period)` lies in the domain of
    /// this (possibly open) arc, within a small parameter slack.
    fn param_in_domain(&self, t: f64) -> bool {
        if self.closed {
            return true;
        }
        let slack = 1e-9 * self.param_scale();
        t <= self.t_hi + slack
    }

    /// Minimum distance from `p` to the curve (the arc itself, not its
    /// hull), found by coarse sampling plus golden-section refinement.
    pub fn nearest_distance(&self, p: Point) -> f64 {
        let n = 256;
        let mut best_k = 0;
        let mut best = f64::INFINITY;
        for k in 0..=n {
            let t = self.t_lo + (self.t_hi - self.t_lo) * (k as f64) / (n as f64);
            let d = p.dist(self.point_at_unchecked(t));
            if d < best {
                best = d;
                best_k = k;
            }
        }
        let step = (self.t_hi - self.t_lo) / (n as f64);
        let mut a = self.t_lo + step * ((best_k as f64) - 1.0).max(0.0);
        let mut b = (self.t_lo + step * ((best_k as f64) + 1.0)).min(self.t_hi);
        let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = p.dist(self.point_at_unchecked(x1));
        let mut f2 = p.dist(self.point_at_unchecked(x2));
        for _ in 0..80 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = p.dist(self.point_at_unchecked(x1));
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = p.dist(self.point_at_unchecked(x2));
            }
        }
        best.min(f1).min(f2)
    }

    /// All intersections of segment `pq` with the curve: transversal
    /// crossings plus tangential/endpoint touches. Crossings are found by
    /// bracketing sign changes of the inside/outside function along the
    /// segment (64 samples, doubled until two consecutive resolutions
    /// agree), then bisecting to a segment-parameter width of 1e-12.
    pub fn segment_crossings(&self, p: Point, q: Point) -> Result<SegmentIntersections, CurveError> {
        if p.dist(q) <= 1e-15 * self.scale.max(1.0) {
            return Err(CurveError::DegenerateSegment);
        }
        let mut last: Option<SegmentIntersections> = None;
        let mut n = 64usize;
        loop {
            let cur = self.segment_crossings_at_resolution(p, q, n);
            if let Some(prev) = &last {
                if intersections_agree(prev, &cur) {
                    return Ok(cur);
                }
            }
            last = Some(cur);
            n *= 2;
            if n > 4096 {
                return Ok(last.unwrap());
            }
        }
    }

    fn segment_crossings_at_resolution(&self, p: Point, q: Point, n: usize) -> SegmentIntersections {
        let g = |s: f64| self.shape_signed_distance(p.lerp(q, s));
        let zero_tol = 1e-13 * self.scale;
        let touch_tol = self.geom_tol();

        let samples: Vec<f64> = (0..=n).map(|k| g(k as f64 / n as f64)).collect();
        let sgn = |v: f64| -> i8 {
            if v > zero_tol {
                1
            } else if v < -zero_tol {
                -1
            } else {
                0
            }
        };

        let mut cross_params: Vec<f64> = Vec::new();
        let mut touch_params: Vec<f64> = Vec::new();

        // Runs of (near-)zero samples: crossings when the flanking signs
        // differ, touches otherwise (and at segment endpoints).
        let mut i = 0;
        while i <= n {
            if sgn(samples[i]) == 0 {
                let start = i;
                while i + 1 <= n && sgn(samples[i + 1]) == 0 {
                    i += 1;
                }
                let end = i;
                let before = if start == 0 { 0 } else { sgn(samples[start - 1]) };
                let after = if end == n { 0 } else { sgn(samples[end + 1]) };
                let s_mid = 0.5 * (start as f64 + end as f64) / n as f64;
                if before != 0 && after != 0 && before != after && start > 0 && end < n {
                    cross_params.push(s_mid);
                } else {
                    touch_params.push(s_mid);
                }
                i = end + 1;
            } else {
                i += 1;
            }
        }

        // Transversal sign changes.
        for k in 0..n {
            let (a, b) = (sgn(samples[k]), sgn(samples[k + 1]));
            if a != 0 && b != 0 && a != b {
                let s = bisect_sign_change(&g, k as f64 / n as f64, (k + 1) as f64 / n as f64);
                cross_params.push(s);
            }
        }

        // Near-tangency windows: local minima of |g| that are small but did
        // not change sign at this resolution. Refining the extremum either
        // certifies a touch or exposes a missed crossing pair.
        for k in 1..n {
            let (gm, gk, gp) = (samples[k - 1], samples[k], samples[k + 1]);
            if sgn(gm) == 0 || sgn(gk) == 0 || sgn(gp) == 0 {
                continue;
            }
            if sgn(gm) != sgn(gk) || sgn(gk) != sgn(gp) {
                continue;
            }
            if gk.abs() < gm.abs() && gk.abs() <= gp.abs() && gk.abs() < 1e-4 * self.scale {
                let side = sgn(gk);
                let a = (k - 1) as f64 / n as f64;
                let b = (k + 1) as f64 / n as f64;
                let (s_ext, g_ext) = golden_extremum(&g, a, b, side);
                if g_ext.abs() <= touch_tol {
                    touch_params.push(s_ext);
                } else if sgn(g_ext) != side && sgn(g_ext) != 0 {
                    // The dip actually crosses: two crossings inside the window.
                    cross_params.push(bisect_sign_change(&g, a, s_ext));
                    cross_params.push(bisect_sign_change(&g, s_ext, b));
                }
            }
        }

        // Segment endpoints lying on the curve are endpoint touches.
        for s in [0.0, 1.0] {
            if g(s).abs() <= touch_tol && !touch_params.iter().any(|&t| (t - s).abs() < 1e-9) {
                touch_params.push(s);
            }
        }

        let to_hit = |s: f64| -> Option<CurveHit> {
            let point = p.lerp(q, s);
            let t = self.param_of_boundary_point(point);
            if self.param_in_domain(t) {
                Some(CurveHit { t, point })
            } else {
                None
            }
        };

        let mut crossings: Vec<CurveHit> = cross_params.into_iter().filter_map(to_hit).collect();
        let mut touches: Vec<CurveHit> = touch_params.into_iter().filter_map(to_hit).collect();
        crossings.sort_by(|a, b| a.t.total_cmp(&b.t));
        touches.sort_by(|a, b| a.t.total_cmp(&b.t));
        crossings.dedup_by(|a, b| (a.t - b.t).abs() < 1e-12 * (1.0 + self.param_scale()));
        SegmentIntersections { crossings, touches }
    }

    /// Analytic circle/segment intersection, available only for circular
    /// curves; serves as an independent cross-check of the generic numeric
    /// path.
    pub fn circle_segment_crossings_analytic(
        &self,
        p: Point,
        q: Point,
    ) -> Option<Vec<CurveHit>> {
        let (center, radius) = match self.shape {
            Shape::Circle { center, radius } => (center, radius),
            _ => return None,
        };
        let d = q - p;
        let f = p - center;
        let a = d.dot(d);
        let b = 2.0 * f.dot(d);
        let c = f.dot(f) - radius * radius;
        let disc = b * b - 4.0 * a * c;
        let mut hits = Vec::new();
        if disc > 1e-24 * a * radius * radius {
            let sq = disc.sqrt();
            for s in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                if s > 0.0 && s < 1.0 {
                    let point = p + d * s;
                    let t = self.param_of_boundary_point(point);
                    if self.param_in_domain(t) {
                        hits.push(CurveHit { t, point });
                    }
                }
            }
        }
        hits.sort_by(|a, b| a.t.total_cmp(&b.t));
        Some(hits)
    }

    /// Minimal parameter interval covering all of `params`. For closed
    /// curves this is the complement of the largest cyclic gap, returned in
    /// (possibly) unwrapped form.
    pub fn covering_interval(&self, params: &[f64]) -> Option<ArcInterval> {
        if params.is_empty() {
            return None;
        }
        let mut ts: Vec<f64> = params.to_vec();
        ts.sort_by(f64::total_cmp);
        if !self.closed {
            return Some(ArcInterval::new(ts[0], *ts.last().unwrap()));
        }
        let period = self.period();
        let m = ts.len();
        if m == 1 {
            return Some(ArcInterval::new(ts[0], ts[0]));
        }
        let mut best_gap = period - (ts[m - 1] - ts[0]);
        let mut gap_after = m - 1;
        for i in 0..m - 1 {
            let gap = ts[i + 1] - ts[i];
            if gap > best_gap {
                best_gap = gap;
                gap_after = i;
            }
        }
        if gap_after == m - 1 {
            Some(ArcInterval::new(ts[0], ts[m - 1]))
        } else {
            Some(ArcInterval::new(ts[gap_after + 1], ts[gap_after] + period))
        }
    }

    /// The arc between two crossing parameters with the smaller total
    /// curvature; on open curves there is only one connecting arc.
    pub fn minor_arc(&self, t1: f64, t2: f64) -> ArcInterval {
        let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if !self.closed {
            return ArcInterval::new(a, b);
        }
        let direct = ArcInterval::new(a, b);
        let wrapped = ArcInterval::new(b, a + self.period());
        if self.arc_curvature(&direct) <= self.arc_curvature(&wrapped) {
            direct
        } else {
            wrapped
        }
    }
}

fn check_angular_domain(a0: f64, a1: f64) -> Result<(), CurveError> {
    if !(a1 > a0) {
        return Err(CurveError::BadSpec("angle_end must exceed angle_start".into()));
    }
    if a1 - a0 > TWO_PI + 1e-9 {
        return Err(CurveError::BadSpec("angular span exceeds a full turn".into()));
    }
    Ok(())
}

fn is_full_turn(a0: f64, a1: f64) -> bool {
    (a1 - a0 - TWO_PI).abs() <= 1e-12
}

fn rotate(v: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Counterclockwise angle from direction `from` to direction `to`, in [0, 2pi).
fn angle_ccw_from(from: Point, to: Point) -> f64 {
    let a = to.angle() - from.angle();
    a.rem_euclid(TWO_PI)
}

fn bisect_sign_change(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    if ga == 0.0 {
        return a;
    }
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
        if b - a < 1e-12 {
            break;
        }
    }
    0.5 * (a + b)
}

/// Golden-section search for the extremum of `g` closest to zero inside
/// `[a, b]`, where `g` has constant sign `side` at the window edges.
fn golden_extremum(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, side: i8) -> (f64, f64) {
    let f = |s: f64| {
        let v = g(s);
        if side > 0 {
            v
        } else {
            -v
        }
    };
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let s = 0.5 * (a + b);
    (s, g(s))
}

fn intersections_agree(a: &SegmentIntersections, b: &SegmentIntersections) -> bool {
    if a.crossings.len() != b.crossings.len() || a.touches.len() != b.touches.len() {
        return false;
    }
    a.crossings
        .iter()
        .zip(&b.crossings)
        .all(|(x, y)| (x.t - y.t).abs() <= 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semicircle() -> ConvexCurveModel {
        ConvexCurveModel::circular_arc(Point::new(0.0, 0.0), 1.0, 0.0, PI)
    }

    #[test]
    fn point_at_semicircle() {
        let c = semicircle();
        let apex = c.point_at(PI / 2.0).unwrap();
        assert!(apex.dist(Point::new(0.0, 1.0)) < 1e-12);
        let end = c.point_at(0.0).unwrap();
        assert!(end.dist(Point::new(1.0, 0.0)) < 1e-12);
        assert!(c.point_at(4.0).is_err());
    }

    #[test]
    fn point_at_stadium_flat_is_collinear() {
        let c = ConvexCurveModel::stadium(Point::new(0.0, 0.0), 2.0, 1.0, CapAxis::X);
        // Bottom flat runs for t in [0, 2] from (-1,-0.5) to (1,-0.5).
        let a = c.point_at(0.0).unwrap();
        let b = c.point_at(2.0).unwrap();
        let m = c.point_at(0.7).unwrap();
        assert!(crate::geom::orient2d(a, m, b).abs() < 1e-12);
        assert!(crate::geom::point_on_segment(m, a, b, 1e-12));
    }

    #[test]
    fn tangent_angle_semicircle() {
        let c = semicircle();
        assert!((c.tangent_angle(PI / 2.0).unwrap() - PI).abs() < 1e-12);
        assert!((c.tangent_angle(0.0).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn tangent_angle_stadium_flat_constant() {
        let c = ConvexCurveModel::stadium(Point::new(0.0, 0.0), 2.0, 1.0, CapAxis::X);
        let a = c.tangent_angle(0.1).unwrap();
        let b = c.tangent_angle(1.9).unwrap();
        assert_eq!(a, b);
        assert!(a.abs() < 1e-12);
    }

    #[test]
    fn param_for_angle_semicircle() {
        let c = semicircle();
        assert!((c.param_for_angle(PI).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((c.param_for_angle(3.0 * PI / 4.0).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!(c.param_for_angle(0.1).is_err());
    }

    #[test]
    fn param_for_angle_stadium_flat_midpoint() {
        let c = ConvexCurveModel::stadium(Point::new(0.0, 0.0), 2.0, 1.0, CapAxis::X);
        // The bottom flat [0,2] has tangent angle 0; its midpoint is t=1.
        let t = c.param_for_angle(0.0).unwrap();
        assert!((t - 1.0).abs() < 1e-9, "got {t}");
    }

    #[test]
    fn hull_side_semicircle() {
        let c = semicircle();
        assert_eq!(c.hull_side(Point::new(0.0, 0.5)), HullSide::Interior);
        assert_eq!(c.hull_side(Point::new(0.0, 2.0)), HullSide::Exterior);
        // On the chord closing the hull.
        assert_eq!(c.hull_side(Point::new(0.5, 0.0)), HullSide::Boundary);
        // Below the chord is outside even though inside the full circle.
        assert_eq!(c.hull_side(Point::new(0.0, -0.5)), HullSide::Exterior);
    }

    #[test]
    fn segment_crossings_semicircle() {
        let c = semicircle();
        let hits = c
            .segment_crossings(Point::new(-2.0, 0.5), Point::new(2.0, 0.5))
            .unwrap();
        assert_eq!(hits.crossings.len(), 2);
        let x = (3.0_f64).sqrt() / 2.0;
        assert!(hits.crossings[0].point.dist(Point::new(x, 0.5)) < 1e-9);
        assert!(hits.crossings[1].point.dist(Point::new(-x, 0.5)) < 1e-9);
        assert!(hits.crossings[0].t < hits.crossings[1].t);
        assert!(hits.touches.is_empty());
    }

    #[test]
    fn segment_exterior_no_crossings() {
        let c = semicircle();
        let hits = c
            .segment_crossings(Point::new(-3.0, 2.0), Point::new(3.0, 2.0))
            .unwrap();
        assert!(hits.crossings.is_empty());
        assert!(hits.touches.is_empty());
    }

    #[test]
    fn segment_tangent_at_apex_is_touch() {
        let c = semicircle();
        let hits = c
            .segment_crossings(Point::new(-2.0, 1.0), Point::new(2.0, 1.0))
            .unwrap();
        assert!(hits.crossings.is_empty(), "crossings: {:?}", hits.crossings);
        assert_eq!(hits.touches.len(), 1);
        assert!(hits.touches[0].point.dist(Point::new(0.0, 1.0)) < 1e-7);
    }

    #[test]
    fn degenerate_segment_rejected() {
        let c = semicircle();
        assert!(matches!(
            c.segment_crossings(Point::new(0.3, 0.4), Point::new(0.3, 0.4)),
            Err(CurveError::DegenerateSegment)
        ));
    }

    #[test]
    fn arc_curvature_values() {
        let c = semicircle();
        assert!((c.arc_curvature(&ArcInterval::new(0.0, PI)) - PI).abs() < 1e-12);
        assert!((c.arc_curvature(&ArcInterval::new(0.0, PI / 2.0)) - PI / 2.0).abs() < 1e-12);
        let st = ConvexCurveModel::stadium(Point::new(0.0, 0.0), 2.0, 1.0, CapAxis::X);
        assert!(st.arc_curvature(&ArcInterval::new(0.2, 1.8)).abs() < 1e-12);
    }

    #[test]
    fn ellipse_tangent_monotone_and_periodic() {
        let c = ConvexCurveModel::elliptical_arc(Point::new(0.0, 0.0), 2.0, 0.7, 0.0, TWO_PI);
        let mut prev = c.tangent_angle(0.0).unwrap();
        for k in 1..=1000 {
            let t = TWO_PI * k as f64 / 1000.0;
            let phi = c.tangent_angle(t).unwrap();
            assert!(phi >= prev - 1e-12, "not monotone at t={t}");
            prev = phi;
        }
        assert!((c.total_turn() - TWO_PI).abs() < 1e-9);
    }

    #[test]
    fn closed_circle_param_wrap() {
        let c = ConvexCurveModel::circular_arc(Point::new(0.0, 0.0), 1.0, 0.0, TWO_PI);
        assert!(c.is_closed());
        let hits = c
            .segment_crossings(Point::new(-2.0, -0.3), Point::new(2.0, -0.3))
            .unwrap();
        assert_eq!(hits.crossings.len(), 2);
        for h in &hits.crossings {
            assert!(h.t >= 0.0 && h.t < TWO_PI);
            assert!((h.point.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn covering_interval_cyclic() {
        let c = ConvexCurveModel::circular_arc(Point::new(0.0, 0.0), 1.0, 0.0, TWO_PI);
        // Params clustered around the wrap point.
        let arc = c.covering_interval(&[6.2, 0.1, 6.0, 0.3]).unwrap();
        assert!(arc.span() < 1.0, "span {}", arc.span());
        assert!((arc.start - 6.0).abs() < 1e-12);
        assert!((arc.end - (0.3 + TWO_PI)).abs() < 1e-12);
    }

    #[test]
    fn flat_only_stadium_arc_has_zero_turn() {
        let c = ConvexCurveModel::stadium_sub_arc(
            Point::new(0.0, 0.0),
            2.0,
            1.0,
            CapAxis::X,
            0.2,
            1.8,
        )
        .unwrap();
        assert!(c.total_turn().abs() < 1e-12);
        // Its hull is a segment: no interior.
        assert_eq!(c.hull_side(Point::new(0.0, -0.5)), HullSide::Boundary);
        assert_eq!(c.hull_side(Point::new(0.0, 0.0)), HullSide::Exterior);
    }

    #[test]
    fn analytic_matches_numeric_for_circle() {
        let c = semicircle();
        let p = Point::new(-1.7, 0.62);
        let q = Point::new(1.9, 0.4);
        let numeric = c.segment_crossings(p, q).unwrap();
        let analytic = c.circle_segment_crossings_analytic(p, q).unwrap();
        assert_eq!(numeric.crossings.len(), analytic.len());
        for (a, b) in numeric.crossings.iter().zip(analytic.iter()) {
            assert!((a.t - b.t).abs() < 1e-9);
            assert!(a.point.dist(b.point) < 1e-9);
        }
    }
}
