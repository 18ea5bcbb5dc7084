//! DRV sensing regions: the exact equal-power contour, the linearised circle
//! and the second-order Taylor ellipse, with quality metrics between them.

mod beta;
mod conic;
mod exact;
mod quality;

use serde::Serialize;

pub use beta::{circle_approximation, mmse_beta, numeric_beta, numeric_beta_with};
pub use conic::{
    conic_divergence, conic_to_ellipse, quadratic_form_eigen, taylor_conic, CoefficientDivergence,
    ConicCoefficients, ConicMode, DivergenceReport,
};
pub use exact::exact_boundary;
pub use quality::{
    approximation_quality, approximation_quality_with, iou, BoundaryModel, Quality,
    DEFAULT_IOU_GRID,
};

use crate::error::Result;
use crate::shapes::{BoundaryPolyline, Point2, SensingShape};

/// Which closed form stands in for the exact contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Approximation {
    /// β-scaled circle, β from [`mmse_beta`].
    Circle,
    Conic(ConicMode),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageResult {
    pub exact: BoundaryPolyline,
    pub approx: SensingShape,
    pub iou: f64,
    pub max_boundary_residual: f64,
}

impl CoverageResult {
    pub fn exact_area(&self) -> f64 {
        self.exact.area()
    }

    pub fn approx_area(&self) -> f64 {
        self.approx.area().unwrap_or(0.0)
    }
}

/// Builds the approximate region alone.
pub fn approximate_region(
    model: &BoundaryModel,
    approximation: Approximation,
    expansion_point: Option<Point2>,
) -> Result<SensingShape> {
    Ok(match approximation {
        Approximation::Circle => {
            let beta = mmse_beta(model.alpha_hat, model.d_v);
            circle_approximation(model.w, beta, model.d_v)?.into()
        }
        Approximation::Conic(mode) => {
            let point = expansion_point.unwrap_or(model.drv());
            let k = taylor_conic(model.w, model.alpha_hat, model.d_v, point, mode)?;
            conic_to_ellipse(&k)?.into()
        }
    })
}

/// Exact contour, one approximation and the quality metrics between them.
pub fn sensing_coverage(
    model: &BoundaryModel,
    approximation: Approximation,
    expansion_point: Option<Point2>,
    n_angles: usize,
) -> Result<CoverageResult> {
    let exact = exact_boundary(model.w, model.alpha_hat, model.d_v, n_angles)?;
    let approx = approximate_region(model, approximation, expansion_point)?;
    let q = approximation_quality(&exact, &approx, model)?;
    Ok(CoverageResult {
        exact,
        approx,
        iou: q.iou,
        max_boundary_residual: q.max_residual,
    })
}

/// Areas of both conic modes against the exact contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeComparison {
    pub exact_area: f64,
    pub expansion_area: f64,
    pub paper_area: f64,
}

impl ModeComparison {
    /// Whether the expansion-mode ellipse is at least as close in area as
    /// the paper-mode one.
    pub fn expansion_closer(&self) -> bool {
        (self.expansion_area - self.exact_area).abs() <= (self.paper_area - self.exact_area).abs()
    }
}

pub fn compare_conic_modes(
    model: &BoundaryModel,
    expansion_point: Option<Point2>,
    n_angles: usize,
) -> Result<ModeComparison> {
    let exact = exact_boundary(model.w, model.alpha_hat, model.d_v, n_angles)?;
    let area = |mode| -> Result<f64> {
        approximate_region(model, Approximation::Conic(mode), expansion_point)?.area()
    };
    let cmp = ModeComparison {
        exact_area: exact.area(),
        expansion_area: area(ConicMode::Expansion)?,
        paper_area: area(ConicMode::Paper)?,
    };
    if !cmp.expansion_closer() {
        log::warn!(
            "paper-mode ellipse area {:.6e} is closer to the exact area {:.6e} than expansion mode {:.6e} \
             (W={}, alpha_hat={}, d_v={})",
            cmp.paper_area,
            cmp.exact_area,
            cmp.expansion_area,
            model.w,
            model.alpha_hat,
            model.d_v
        );
    }
    Ok(cmp)
}
