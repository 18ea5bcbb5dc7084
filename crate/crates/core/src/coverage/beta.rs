use crate::error::{Error, Result};
use crate::shapes::{Circle, Point2};

const QUADRATURE_INTERVALS: usize = 10_000;
const GOLDEN_REL_TOL: f64 = 1e-7;

/// Closed-form scaling β = d_v^{2(α̂-1)} of the linearised power law
/// β (x² + y²) ≈ (x² + y²)^α̂.
pub fn mmse_beta(alpha_hat: f64, d_v: f64) -> f64 {
    if alpha_hat == 1.0 {
        1.0
    } else {
        d_v.powf(2.0 * (alpha_hat - 1.0))
    }
}

/// Minimises ∫₀^{d_v} |r^{2α̂} - β r²| dr over β > 0 numerically.
///
/// Golden-section search over a trapezoid-rule objective with 10⁴ intervals.
pub fn numeric_beta(alpha_hat: f64, d_v: f64) -> Result<f64> {
    numeric_beta_with(alpha_hat, d_v, QUADRATURE_INTERVALS)
}

pub fn numeric_beta_with(alpha_hat: f64, d_v: f64, intervals: usize) -> Result<f64> {
    if !(d_v.is_finite() && d_v > 0.0) {
        return Err(Error::invalid("d_v", format!("{d_v} must be > 0")));
    }
    if !(alpha_hat > 0.0 && alpha_hat <= 1.0) {
        return Err(Error::invalid("alpha_hat", format!("{alpha_hat} must lie in (0, 1]")));
    }
    if intervals < 2 {
        return Err(Error::invalid("intervals", "need at least 2"));
    }

    let h = d_v / intervals as f64;
    let grid: Vec<(f64, f64)> = (0..=intervals)
        .map(|k| {
            let r = k as f64 * h;
            let weight = if k == 0 || k == intervals { 0.5 * h } else { h };
            (r, weight)
        })
        .collect();
    let objective = |beta: f64| -> f64 {
        grid.iter()
            .map(|&(r, wt)| wt * (r.powf(2.0 * alpha_hat) - beta * r * r).abs())
            .sum()
    };

    // r^{2α̂-2} ≥ d_v^{2α̂-2} on (0, d_v]; the minimiser sits within a small
    // multiple of that floor.
    let mut lo = 0.0;
    let mut hi = 4.0 * mmse_beta(alpha_hat, d_v);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while hi - lo > GOLDEN_REL_TOL * 0.5 * (hi + lo) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Circle β W (x² + y²) = (x - d_v)² + y²: center (d_v/(1-βW), 0), radius
/// √(βW) d_v/(1-βW).
pub fn circle_approximation(w: f64, beta: f64, d_v: f64) -> Result<Circle> {
    if !(d_v.is_finite() && d_v >= 0.0) {
        return Err(Error::invalid("d_v", format!("{d_v} must be >= 0")));
    }
    let bw = beta * w;
    if !(bw > 0.0) {
        return Err(Error::invalid("beta * w", format!("{bw} must be > 0")));
    }
    if bw >= 1.0 {
        return Err(Error::DegenerateCircle(bw));
    }
    let denom = 1.0 - bw;
    Circle::new(Point2::new(d_v / denom, 0.0), bw.sqrt() * d_v / denom)
}
