use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::shapes::{BoundaryPolyline, Point2};

/// Smallest initial bracket, relative to d_v.
const BRACKET_START: f64 = 1e-6;
/// Largest radius searched, relative to d_v.
const BRACKET_CAP: f64 = 10.0;
/// Bisection stops once the bracket is this narrow, relative to d_v.
const ROOT_TOL: f64 = 1e-12;

/// Traces the equal-power boundary W (x² + y²)^α̂ = (x - d_v)² + y² around a
/// DRV at (d_v, 0).
///
/// One vertex per angle θ_k = 2πk/n measured about the DRV; each is the first
/// radius at which the residual turns negative, located by geometric bracket
/// expansion then bisection. Vertices for θ > π are mirrored from θ < π, so
/// the polyline is exactly symmetric about the x-axis.
pub fn exact_boundary(w: f64, alpha_hat: f64, d_v: f64, n_angles: usize) -> Result<BoundaryPolyline> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::invalid("w", format!("{w} must lie in (0, 1)")));
    }
    if !(alpha_hat > 0.0 && alpha_hat <= 1.0) {
        return Err(Error::invalid("alpha_hat", format!("{alpha_hat} must lie in (0, 1]")));
    }
    if !(d_v.is_finite() && d_v > 0.0) {
        return Err(Error::invalid("d_v", format!("{d_v} must be > 0")));
    }
    if n_angles < 16 {
        return Err(Error::invalid("n_angles", format!("{n_angles} < 16")));
    }

    let upper = n_angles / 2;
    let radii: Vec<f64> = (0..=upper)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n_angles as f64;
            first_crossing(w, alpha_hat, d_v, theta)
        })
        .collect::<Result<_>>()?;

    let drv = Point2::new(d_v, 0.0);
    let points = (0..n_angles)
        .map(|k| {
            if k <= upper {
                let theta = 2.0 * PI * k as f64 / n_angles as f64;
                let p = drv + Point2::from_polar(radii[k], theta);
                // θ = 0 and θ = π lie on the axis
                if k == 0 || 2 * k == n_angles {
                    Point2::new(p.x, 0.0)
                } else {
                    p
                }
            } else {
                let mirror = n_angles - k;
                let theta = 2.0 * PI * mirror as f64 / n_angles as f64;
                (drv + Point2::from_polar(radii[mirror], theta)).mirrored()
            }
        })
        .collect();
    BoundaryPolyline::new(points)
}

fn ray_residual(w: f64, alpha_hat: f64, d_v: f64, cos: f64, sin: f64, r: f64) -> f64 {
    let x = d_v + r * cos;
    let y = r * sin;
    w * (x * x + y * y).powf(alpha_hat) - r * r
}

fn first_crossing(w: f64, alpha_hat: f64, d_v: f64, theta: f64) -> Result<f64> {
    let (sin, cos) = theta.sin_cos();
    let g = |r: f64| ray_residual(w, alpha_hat, d_v, cos, sin, r);
    let cap = BRACKET_CAP * d_v;

    let mut lo = 0.0;
    let mut hi = BRACKET_START * d_v;
    while g(hi) > 0.0 {
        if hi >= cap {
            return Err(Error::ContourNotFound { theta, limit: cap });
        }
        lo = hi;
        hi = (hi * 2.0).min(cap);
    }

    let tol = ROOT_TOL * d_v;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::balance_residual;

    #[test]
    fn unit_ratio_reproduces_circle() {
        let poly = exact_boundary(0.25, 1.0, 300.0, 720).unwrap();
        let center = Point2::new(400.0, 0.0);
        for p in poly.points() {
            assert!((p.distance(center) - 200.0).abs() <= 1e-6, "{p:?}");
        }
    }

    #[test]
    fn mirror_symmetric() {
        let poly = exact_boundary(0.2089, 0.6, 500.0, 360).unwrap();
        let pts = poly.points();
        let n = pts.len();
        for k in 1..n {
            let a = pts[k];
            let b = pts[n - k];
            assert!((a.x - b.x).abs() <= 1e-9 && (a.y + b.y).abs() <= 1e-9);
        }
    }

    #[test]
    fn fractional_ratio_vertices_lie_on_contour() {
        let (w, ah, d) = (0.2089, 0.6, 500.0);
        let poly = exact_boundary(w, ah, d, 720).unwrap();
        let drv = Point2::new(d, 0.0);
        for p in poly.points() {
            assert!(balance_residual(w, ah, *p, drv).abs() <= 1e-8 * d * d);
        }
        assert!(poly.area() > 0.0);
    }

    #[test]
    fn odd_angle_count() {
        let poly = exact_boundary(0.25, 1.0, 100.0, 17).unwrap();
        assert_eq!(poly.len(), 17);
        let pts = poly.points();
        for k in 1..17 {
            assert!((pts[k].y + pts[17 - k].y).abs() <= 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(exact_boundary(1.0, 1.0, 100.0, 32).is_err());
        assert!(exact_boundary(0.5, 1.2, 100.0, 32).is_err());
        assert!(exact_boundary(0.5, 1.0, 0.0, 32).is_err());
        assert!(exact_boundary(0.5, 1.0, 100.0, 8).is_err());
    }
}
