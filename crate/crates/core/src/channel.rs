//! Radar-equation echo power and Swerling type-1 target fluctuation.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{NetworkParams, RadioNodeParams};
use crate::shapes::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RcsSample {
    /// Target RCS, m².
    pub sigma_t: f64,
}

/// Point clutter co-located with the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClutterModel {
    pub clutter_rcs: f64,
}

impl ClutterModel {
    pub fn new(clutter_rcs: f64) -> Result<Self> {
        if !(clutter_rcs.is_finite() && clutter_rcs >= 0.0) {
            return Err(Error::invalid("clutter_rcs", format!("{clutter_rcs} must be >= 0")));
        }
        Ok(Self { clutter_rcs })
    }
}

/// Monostatic echo power P G² λ² (σ_t - σ_c) / ((4π)³ d^{2α}), W.
///
/// The result is negative when the clutter outweighs the target; it is
/// returned unclamped.
pub fn received_sensing_power(
    node: &RadioNodeParams,
    d: f64,
    sigma_t: f64,
    sigma_c: f64,
    wavelength: f64,
) -> Result<f64> {
    if d == 0.0 {
        return Err(Error::Singularity);
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid("d", format!("{d} must be > 0")));
    }
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::invalid("wavelength", format!("{wavelength} must be > 0")));
    }
    if !(sigma_t >= 0.0 && sigma_c >= 0.0) {
        return Err(Error::invalid("rcs", "RCS values must be >= 0"));
    }
    let numerator = node.effective_power() * wavelength * wavelength * (sigma_t - sigma_c);
    Ok(numerator / ((4.0 * PI).powi(3) * d.powf(2.0 * node.path_loss_exponent)))
}

/// Draws an exponentially distributed RCS with the given mean.
pub fn sample_rcs<R: Rng + ?Sized>(mean_rcs: f64, rng: &mut R) -> Result<RcsSample> {
    if !(mean_rcs.is_finite() && mean_rcs > 0.0) {
        return Err(Error::invalid("mean_rcs", format!("{mean_rcs} must be > 0")));
    }
    let exp = Exp::new(1.0 / mean_rcs).map_err(|e| Error::invalid("mean_rcs", e.to_string()))?;
    Ok(RcsSample {
        sigma_t: exp.sample(rng),
    })
}

/// W |target|^{2α̂} - |target - drv|², with the BS at the origin.
///
/// Positive inside the DRV's sensing region, zero on the equal-power
/// boundary. Radar-cross-section and wavelength terms cancel out of it.
pub fn balance_residual(w: f64, alpha_hat: f64, target: Point2, drv_pos: Point2) -> f64 {
    w * target.norm_sq().powf(alpha_hat) - (target - drv_pos).norm_sq()
}

/// [`balance_residual`] with W and α̂ taken from the network parameters.
pub fn equal_rsp_residual(net: &NetworkParams, target: Point2, drv_pos: Point2) -> Result<f64> {
    if target == Point2::ORIGIN {
        return Err(Error::CoincidentPoints("target coincides with the BS".into()));
    }
    let w = net.w()?;
    Ok(balance_residual(w, net.alpha_hat(), target, drv_pos))
}
