use serde::Serialize;

use crate::channel::balance_residual;
use crate::error::{Error, Result};
use crate::shapes::{BoundaryPolyline, Point2, SensingShape};

pub const DEFAULT_IOU_GRID: usize = 512;
const RESIDUAL_SAMPLES: usize = 720;

/// The equal-power problem a boundary approximates: BS at the origin, DRV
/// at (d_v, 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryModel {
    pub w: f64,
    pub alpha_hat: f64,
    pub d_v: f64,
}

impl BoundaryModel {
    pub fn drv(&self) -> Point2 {
        Point2::new(self.d_v, 0.0)
    }

    /// Residual normalised by d_v².
    pub fn normalized_residual(&self, p: Point2) -> f64 {
        balance_residual(self.w, self.alpha_hat, p, self.drv()) / (self.d_v * self.d_v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quality {
    pub iou: f64,
    pub max_residual: f64,
}

/// Intersection-over-union of two regions, sampled at the cell centers of an
/// `n × n` grid spanning their joint bounding box.
pub fn iou(a: &SensingShape, b: &SensingShape, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("grid", "must be > 0"));
    }
    for s in [a, b] {
        if !(s.area()? > 0.0) {
            return Err(Error::EmptyShape("zero-area region".into()));
        }
    }
    let bounds = a.bounds().union(b.bounds());
    let dx = bounds.width() / n as f64;
    let dy = bounds.height() / n as f64;
    let (mut inter, mut union) = (0u64, 0u64);
    let covered = |spans: &[(f64, f64)], x: f64| spans.iter().any(|&(lo, hi)| x >= lo && x <= hi);
    for row in 0..n {
        let y = bounds.min.y + (row as f64 + 0.5) * dy;
        let sa = a.spans(y);
        let sb = b.spans(y);
        if sa.is_empty() && sb.is_empty() {
            continue;
        }
        for col in 0..n {
            let x = bounds.min.x + (col as f64 + 0.5) * dx;
            let (ia, ib) = (covered(&sa, x), covered(&sb, x));
            inter += u64::from(ia && ib);
            union += u64::from(ia || ib);
        }
    }
    if union == 0 {
        return Err(Error::EmptyShape("no grid cell falls inside either region".into()));
    }
    Ok(inter as f64 / union as f64)
}

/// IoU against the exact contour plus the worst normalised equal-power
/// residual along the approximation's boundary.
pub fn approximation_quality(
    exact: &BoundaryPolyline,
    approx: &SensingShape,
    model: &BoundaryModel,
) -> Result<Quality> {
    approximation_quality_with(exact, approx, model, DEFAULT_IOU_GRID)
}

pub fn approximation_quality_with(
    exact: &BoundaryPolyline,
    approx: &SensingShape,
    model: &BoundaryModel,
    grid: usize,
) -> Result<Quality> {
    let exact_shape = SensingShape::Polyline(exact.clone());
    let iou = iou(&exact_shape, approx, grid)?;
    let max_residual = approx
        .boundary_samples(RESIDUAL_SAMPLES)
        .into_iter()
        .map(|p| model.normalized_residual(p).abs())
        .fold(0.0, f64::max);
    Ok(Quality { iou, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::exact::exact_boundary;
    use crate::shapes::{Circle, Ellipse};
    use std::f64::consts::PI;

    fn circle_polyline(c: &Circle, n: usize) -> BoundaryPolyline {
        BoundaryPolyline::new((0..n).map(|k| c.point_at(2.0 * PI * k as f64 / n as f64)).collect())
            .unwrap()
    }

    #[test]
    fn self_comparison() {
        let c = Circle::new(Point2::new(400.0, 0.0), 200.0).unwrap();
        let model = BoundaryModel { w: 0.25, alpha_hat: 1.0, d_v: 300.0 };
        let q = approximation_quality(&circle_polyline(&c, 720), &c.into(), &model).unwrap();
        assert!(q.iou >= 0.999, "{}", q.iou);
        assert!(q.max_residual < 1e-12);
    }

    #[test]
    fn disjoint_is_zero() {
        let a = SensingShape::from(Circle::new(Point2::ORIGIN, 1.0).unwrap());
        let b = SensingShape::from(Ellipse::new(Point2::new(5.0, 0.0), 1.0, 1.5, 0.3).unwrap());
        assert_eq!(iou(&a, &b, 256).unwrap(), 0.0);
    }

    #[test]
    fn empty_shape_rejected() {
        let a = SensingShape::from(Circle::new(Point2::ORIGIN, 0.0).unwrap());
        let b = SensingShape::from(Circle::new(Point2::ORIGIN, 1.0).unwrap());
        assert!(matches!(iou(&a, &b, 64), Err(Error::EmptyShape(_))));
    }

    #[test]
    fn half_overlap_iou() {
        // two unit squares offset by half: IoU = 0.5 / 1.5
        let sq = |x0: f64| {
            SensingShape::from(
                BoundaryPolyline::new(vec![
                    Point2::new(x0, 0.0),
                    Point2::new(x0 + 1.0, 0.0),
                    Point2::new(x0 + 1.0, 1.0),
                    Point2::new(x0, 1.0),
                ])
                .unwrap(),
            )
        };
        let v = iou(&sq(0.0), &sq(0.5), 600).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 2e-3, "{v}");
    }

    #[test]
    fn unit_ratio_circle_matches_exact_contour() {
        let model = BoundaryModel { w: 0.25, alpha_hat: 1.0, d_v: 300.0 };
        let exact = exact_boundary(0.25, 1.0, 300.0, 720).unwrap();
        let circle = crate::coverage::circle_approximation(0.25, 1.0, 300.0).unwrap();
        let q = approximation_quality(&exact, &circle.into(), &model).unwrap();
        assert!(q.iou >= 0.999);
    }

    #[test]
    fn grid_doubling_is_converged() {
        let model = BoundaryModel { w: 0.2089, alpha_hat: 0.6, d_v: 500.0 };
        let exact = exact_boundary(model.w, model.alpha_hat, model.d_v, 720).unwrap();
        let k = crate::coverage::taylor_conic(
            model.w,
            model.alpha_hat,
            model.d_v,
            model.drv(),
            crate::coverage::ConicMode::Expansion,
        )
        .unwrap();
        let e = SensingShape::from(crate::coverage::conic_to_ellipse(&k).unwrap());
        let q1 = approximation_quality_with(&exact, &e, &model, 512).unwrap();
        let q2 = approximation_quality_with(&exact, &e, &model, 1024).unwrap();
        assert!((q1.iou - q2.iou).abs() < 0.002);
    }
}
