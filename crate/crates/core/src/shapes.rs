//! Planar primitives for sensing regions.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack used for boundary-inclusive containment.
const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(r * c, r * s)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn mirrored(self) -> Self {
        Self::new(self.x, -self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Point2,
    pub max: Point2,
}

impl Bounds {
    pub fn union(self, other: Bounds) -> Bounds {
        Bounds {
            min: Point2::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point2::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) || !center.is_finite() {
            return Err(Error::invalid("radius", format!("{radius} must be finite and >= 0")));
        }
        Ok(Self { center, radius })
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point2) -> bool {
        let r2 = self.radius * self.radius;
        (p - self.center).norm_sq() <= r2 * (1.0 + BOUNDARY_EPS) + f64::MIN_POSITIVE
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.center + Point2::from_polar(self.radius, t)
    }
}

/// Ellipse with semi-axes `s1 <= s2`. `rotation` is the direction of the
/// `s1` axis, measured from +x and reduced to [0, π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ellipse {
    pub center: Point2,
    pub s1: f64,
    pub s2: f64,
    pub rotation: f64,
}

impl Ellipse {
    pub fn new(center: Point2, s1: f64, s2: f64, rotation: f64) -> Result<Self> {
        if !(s1 > 0.0 && s1 <= s2 && s2.is_finite()) {
            return Err(Error::invalid(
                "semi_axes",
                format!("need 0 < s1 <= s2, got ({s1}, {s2})"),
            ));
        }
        let rotation = rotation.rem_euclid(PI);
        // rem_euclid can round up to exactly π
        let rotation = if rotation >= PI { 0.0 } else { rotation };
        Ok(Self {
            center,
            s1,
            s2,
            rotation,
        })
    }

    pub fn area(&self) -> f64 {
        PI * self.s1 * self.s2
    }

    /// Coordinates of `p` in the ellipse frame (along s1, along s2).
    fn local(&self, p: Point2) -> (f64, f64) {
        let (s, c) = self.rotation.sin_cos();
        let d = p - self.center;
        (d.x * c + d.y * s, -d.x * s + d.y * c)
    }

    pub fn contains(&self, p: Point2) -> bool {
        let (u, v) = self.local(p);
        (u / self.s1).powi(2) + (v / self.s2).powi(2) <= 1.0 + BOUNDARY_EPS
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        let (s, c) = self.rotation.sin_cos();
        let (u, v) = (self.s1 * t.cos(), self.s2 * t.sin());
        self.center + Point2::new(u * c - v * s, u * s + v * c)
    }
}

/// Closed simple polygon; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPolyline {
    points: Vec<Point2>,
}

impl BoundaryPolyline {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::DegeneratePolyline(format!(
                "{} vertices, need at least 3",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegeneratePolyline("non-finite vertex".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.points.len();
        (0..n).map(move |k| (self.points[k], self.points[(k + 1) % n]))
    }

    /// Shoelace area (absolute value).
    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * self
            .edges()
            .map(|(a, b)| a.x * b.y - b.x * a.y)
            .sum::<f64>()
    }

    fn on_boundary(&self, p: Point2) -> bool {
        let scale = self.bounds().width().max(self.bounds().height()).max(1.0);
        let tol = BOUNDARY_EPS * scale;
        self.edges().any(|(a, b)| distance_to_segment(p, a, b) <= tol)
    }

    /// Even-odd containment, boundary inclusive.
    pub fn contains(&self, p: Point2) -> bool {
        if self.on_boundary(p) {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn bounds(&self) -> Bounds {
        let mut min = self.points[0];
        let mut max = self.points[0];
        for p in &self.points[1..] {
            min = Point2::new(min.x.min(p.x), min.y.min(p.y));
            max = Point2::new(max.x.max(p.x), max.y.max(p.y));
        }
        Bounds { min, max }
    }

    /// Interior x-intervals on the horizontal line at `y` (even-odd pairing).
    fn spans(&self, y: f64) -> Vec<(f64, f64)> {
        let mut xs: Vec<f64> = self
            .edges()
            .filter(|(a, b)| (a.y > y) != (b.y > y))
            .map(|(a, b)| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
            .collect();
        xs.sort_by(f64::total_cmp);
        xs.chunks_exact(2).map(|c| (c[0], c[1])).collect()
    }
}

fn distance_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// A sensing region in one of its three representations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SensingShape {
    Circle(Circle),
    Ellipse(Ellipse),
    Polyline(BoundaryPolyline),
}

impl SensingShape {
    pub fn area(&self) -> Result<f64> {
        match self {
            SensingShape::Circle(c) => Ok(c.area()),
            SensingShape::Ellipse(e) => Ok(e.area()),
            SensingShape::Polyline(p) => {
                if p.len() < 3 {
                    return Err(Error::DegeneratePolyline(format!("{} vertices", p.len())));
                }
                Ok(p.area())
            }
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        match self {
            SensingShape::Circle(c) => c.contains(p),
            SensingShape::Ellipse(e) => e.contains(p),
            SensingShape::Polyline(poly) => poly.contains(p),
        }
    }

    pub fn bounds(&self) -> Bounds {
        match self {
            SensingShape::Circle(c) => Bounds {
                min: Point2::new(c.center.x - c.radius, c.center.y - c.radius),
                max: Point2::new(c.center.x + c.radius, c.center.y + c.radius),
            },
            SensingShape::Ellipse(e) => {
                let (s, c) = e.rotation.sin_cos();
                let hx = ((e.s1 * c).powi(2) + (e.s2 * s).powi(2)).sqrt();
                let hy = ((e.s1 * s).powi(2) + (e.s2 * c).powi(2)).sqrt();
                Bounds {
                    min: Point2::new(e.center.x - hx, e.center.y - hy),
                    max: Point2::new(e.center.x + hx, e.center.y + hy),
                }
            }
            SensingShape::Polyline(p) => p.bounds(),
        }
    }

    /// `n` points along the boundary, in order.
    pub fn boundary_samples(&self, n: usize) -> Vec<Point2> {
        match self {
            SensingShape::Circle(c) => (0..n)
                .map(|k| c.point_at(2.0 * PI * k as f64 / n as f64))
                .collect(),
            SensingShape::Ellipse(e) => (0..n)
                .map(|k| e.point_at(2.0 * PI * k as f64 / n as f64))
                .collect(),
            SensingShape::Polyline(p) => p.points().to_vec(),
        }
    }

    /// Where the ray from `origin` at angle `theta` leaves the shape, for an
    /// origin strictly inside a circle or ellipse.
    pub fn ray_exit(&self, origin: Point2, theta: f64) -> Option<Point2> {
        let dir = Point2::from_polar(1.0, theta);
        // reduce to the unit circle |q0 + t q1| = 1
        let (q0, q1) = match self {
            SensingShape::Circle(c) => {
                if !(c.radius > 0.0) {
                    return None;
                }
                ((origin - c.center) * (1.0 / c.radius), dir * (1.0 / c.radius))
            }
            SensingShape::Ellipse(e) => {
                let (s, c) = e.rotation.sin_cos();
                let local = |p: Point2| Point2::new((p.x * c + p.y * s) / e.s1, (-p.x * s + p.y * c) / e.s2);
                (local(origin - e.center), local(dir))
            }
            SensingShape::Polyline(_) => return None,
        };
        let a = q1.norm_sq();
        let b = q0.dot(q1);
        let c = q0.norm_sq() - 1.0;
        if !(c < 0.0) {
            return None;
        }
        let t = (-b + (b * b - a * c).sqrt()) / a;
        Some(origin + dir * t)
    }

    /// Interior x-intervals on the horizontal line at height `y`.
    pub(crate) fn spans(&self, y: f64) -> Vec<(f64, f64)> {
        match self {
            SensingShape::Circle(c) => {
                let dy = y - c.center.y;
                let h2 = c.radius * c.radius - dy * dy;
                if h2 < 0.0 {
                    Vec::new()
                } else {
                    let h = h2.sqrt();
                    vec![(c.center.x - h, c.center.x + h)]
                }
            }
            SensingShape::Ellipse(e) => {
                // (u/s1)^2 + (v/s2)^2 = 1 with u, v linear in x at fixed y
                let (s, c) = e.rotation.sin_cos();
                let dy = y - e.center.y;
                // u = dx c + dy s, v = -dx s + dy c
                let (a1, b1) = (c / e.s1, dy * s / e.s1);
                let (a2, b2) = (-s / e.s2, dy * c / e.s2);
                let qa = a1 * a1 + a2 * a2;
                let qb = 2.0 * (a1 * b1 + a2 * b2);
                let qc = b1 * b1 + b2 * b2 - 1.0;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    Vec::new()
                } else {
                    let r = disc.sqrt();
                    let lo = (-qb - r) / (2.0 * qa);
                    let hi = (-qb + r) / (2.0 * qa);
                    vec![(e.center.x + lo, e.center.x + hi)]
                }
            }
            SensingShape::Polyline(p) => p.spans(y),
        }
    }
}

impl From<Circle> for SensingShape {
    fn from(c: Circle) -> Self {
        SensingShape::Circle(c)
    }
}

impl From<Ellipse> for SensingShape {
    fn from(e: Ellipse) -> Self {
        SensingShape::Ellipse(e)
    }
}

impl From<BoundaryPolyline> for SensingShape {
    fn from(p: BoundaryPolyline) -> Self {
        SensingShape::Polyline(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_square() -> BoundaryPolyline {
        BoundaryPolyline::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn areas() {
        let c = SensingShape::from(Circle::new(Point2::ORIGIN, 1.0).unwrap());
        assert!((c.area().unwrap() - PI).abs() < 1e-15);
        let e = SensingShape::from(Ellipse::new(Point2::ORIGIN, 1.0, 2.0, 0.0).unwrap());
        assert!((e.area().unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((SensingShape::from(unit_square()).area().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_polyline_rejected() {
        let r = BoundaryPolyline::new(vec![Point2::ORIGIN, Point2::new(1.0, 0.0)]);
        assert!(matches!(r, Err(Error::DegeneratePolyline(_))));
    }

    #[test]
    fn containment_examples() {
        let c = SensingShape::from(Circle::new(Point2::ORIGIN, 1.0).unwrap());
        assert!(c.contains(Point2::ORIGIN));
        assert!(!c.contains(Point2::new(2.0, 0.0)));
        let e = SensingShape::from(Ellipse::new(Point2::new(1.0, 0.0), 1.0, 2.0, 0.0).unwrap());
        assert!(e.contains(Point2::new(1.0, 1.9)));
        assert!(!e.contains(Point2::new(2.1, 0.0)));
        let sq = SensingShape::from(unit_square());
        assert!(sq.contains(Point2::new(0.5, 0.5)));
        assert!(!sq.contains(Point2::new(1.5, 0.5)));
        assert!(sq.contains(Point2::new(1.0, 0.3)));
        assert!(sq.contains(Point2::new(0.0, 0.0)));
    }

    #[test]
    fn rotated_ellipse_contains_along_its_axes() {
        let e = Ellipse::new(Point2::ORIGIN, 1.0, 3.0, PI / 2.0).unwrap();
        // s1 now points along +y, s2 along -x
        assert!(e.contains(Point2::new(2.9, 0.0)));
        assert!(!e.contains(Point2::new(0.0, 1.1)));
    }

    #[test]
    fn ellipse_rotation_normalised() {
        let e = Ellipse::new(Point2::ORIGIN, 1.0, 2.0, -PI / 4.0).unwrap();
        assert!((e.rotation - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!(Ellipse::new(Point2::ORIGIN, 2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn polyline_spans_match_containment() {
        let sq = unit_square();
        assert_eq!(sq.spans(0.5), vec![(0.0, 1.0)]);
        assert!(sq.spans(1.5).is_empty());
    }

    proptest! {
        #[test]
        fn boundary_points_are_inside(
            cx in -1e3f64..1e3, cy in -1e3f64..1e3,
            s1 in 0.1f64..100.0, k in 1.0f64..5.0, rot in 0.0f64..PI, t in 0.0f64..(2.0 * PI)
        ) {
            let center = Point2::new(cx, cy);
            let c = Circle::new(center, s1).unwrap();
            prop_assert!(c.contains(c.point_at(t)));
            let e = Ellipse::new(center, s1, s1 * k, rot).unwrap();
            prop_assert!(e.contains(e.point_at(t)));
            let poly = BoundaryPolyline::new(
                (0..64).map(|j| e.point_at(2.0 * PI * j as f64 / 64.0)).collect()
            ).unwrap();
            let frac = t / (2.0 * PI) * 64.0;
            let j = (frac.floor() as usize) % 64;
            let a = poly.points()[j];
            let b = poly.points()[(j + 1) % 64];
            let w = frac.fract();
            prop_assert!(poly.contains(a + (b - a) * w));
            prop_assert!(poly.contains(a));
        }

        #[test]
        fn ellipse_spans_agree_with_contains(
            rot in 0.0f64..PI, y in -2.5f64..2.5, x in -3.5f64..3.5
        ) {
            let e = Ellipse::new(Point2::new(0.3, -0.2), 1.0, 2.5, rot).unwrap();
            let spans = SensingShape::from(e).spans(y);
            let in_span = spans.iter().any(|&(lo, hi)| x > lo + 1e-9 && x < hi - 1e-9);
            let out_span = spans.iter().all(|&(lo, hi)| x < lo - 1e-9 || x > hi + 1e-9);
            if in_span { prop_assert!(e.contains(Point2::new(x, y))); }
            if out_span { prop_assert!(!e.contains(Point2::new(x, y))); }
        }
    }

    #[test]
    fn ray_exits() {
        let c = SensingShape::from(Circle::new(Point2::new(1.0, 0.0), 2.0).unwrap());
        let p = c.ray_exit(Point2::ORIGIN, 0.0).unwrap();
        assert!((p.x - 3.0).abs() < 1e-12 && p.y.abs() < 1e-12);
        assert!(c.ray_exit(Point2::new(5.0, 0.0), 0.0).is_none());
        let e = SensingShape::from(Ellipse::new(Point2::ORIGIN, 1.0, 2.0, 0.5 * PI).unwrap());
        let p = e.ray_exit(Point2::ORIGIN, 0.0).unwrap();
        assert!((p.x - 2.0).abs() < 1e-12, "{p:?}");
        let p = e.ray_exit(Point2::new(0.0, 0.5), 0.5 * PI).unwrap();
        assert!((p.y - 1.0).abs() < 1e-12);
    }
}
