//! Network parameters and the quantities derived from them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::{db_to_linear, dbm_to_watts, per_km2_to_per_m2};

/// Monostatic radio node: equal transmit and receive gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadioNodeParams {
    /// Transmit power of the sensing signal, W.
    pub tx_power: f64,
    /// Linear antenna gain (G_t = G_r = G).
    pub antenna_gain: f64,
    pub path_loss_exponent: f64,
}

impl RadioNodeParams {
    pub fn new(tx_power: f64, antenna_gain: f64, path_loss_exponent: f64) -> Result<Self> {
        let node = Self {
            tx_power,
            antenna_gain,
            path_loss_exponent,
        };
        node.validate()?;
        Ok(node)
    }

    /// Builds a node from dBm / dBi figures.
    pub fn from_db(tx_power_dbm: f64, gain_dbi: f64, path_loss_exponent: f64) -> Result<Self> {
        Self::new(
            dbm_to_watts(tx_power_dbm),
            db_to_linear(gain_dbi),
            path_loss_exponent,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tx_power.is_finite() && self.tx_power > 0.0) {
            return Err(Error::invalid("tx_power", format!("{} must be > 0", self.tx_power)));
        }
        if !(self.antenna_gain.is_finite() && self.antenna_gain > 0.0) {
            return Err(Error::invalid(
                "antenna_gain",
                format!("{} must be > 0", self.antenna_gain),
            ));
        }
        if !(self.path_loss_exponent > 2.0 && self.path_loss_exponent < 6.0) {
            return Err(Error::invalid(
                "path_loss_exponent",
                format!("{} must lie in (2, 6)", self.path_loss_exponent),
            ));
        }
        Ok(())
    }

    /// P G², the gain-weighted power entering the radar equation.
    pub fn effective_power(&self) -> f64 {
        self.tx_power * self.antenna_gain * self.antenna_gain
    }
}

/// All deployment, radio, mobility and radar parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkParams {
    pub bs: RadioNodeParams,
    pub drv: RadioNodeParams,
    /// Sensing wavelength, m.
    pub wavelength: f64,
    /// Mean target RCS, m².
    pub mean_rcs: f64,
    /// Point-clutter RCS, m².
    pub clutter_rcs: f64,
    /// BS intensity, per m².
    pub bs_intensity: f64,
    /// DRV intensity, per m².
    pub drv_intensity: f64,
    /// DRV speed, m/s.
    pub speed: f64,
    /// Mean pause at a waypoint, s.
    pub pause_mean: f64,
    /// Pulse repetition interval, s.
    pub pri: f64,
}

impl NetworkParams {
    /// The default evaluation setup: 46 dBm / 14 dBi BSs, 30 dBm / 5 dBi DRVs,
    /// λ_v = 2 λ_b = 1 per km², 0.5 s mean pause and 1.4 m/s.
    ///
    /// Path-loss exponents default to 4 for both tiers. The wavelength,
    /// RCS figures and the 50 ms PRI are tool defaults; none of them enter the
    /// coverage or DRR closed forms except the PRI.
    pub fn defaults() -> Self {
        Self {
            bs: RadioNodeParams::from_db(46.0, 14.0, 4.0).expect("valid BS defaults"),
            drv: RadioNodeParams::from_db(30.0, 5.0, 4.0).expect("valid DRV defaults"),
            wavelength: 0.1,
            mean_rcs: 1.0,
            clutter_rcs: 0.0,
            bs_intensity: per_km2_to_per_m2(0.5),
            drv_intensity: per_km2_to_per_m2(1.0),
            speed: 1.4,
            pause_mean: 0.5,
            pri: 0.05,
        }
    }

    pub fn with_path_loss(mut self, bs_exponent: f64, drv_exponent: f64) -> Self {
        self.bs.path_loss_exponent = bs_exponent;
        self.drv.path_loss_exponent = drv_exponent;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.bs.validate()?;
        self.drv.validate()?;
        let positive = [
            ("wavelength", self.wavelength),
            ("mean_rcs", self.mean_rcs),
            ("bs_intensity", self.bs_intensity),
            ("drv_intensity", self.drv_intensity),
            ("speed", self.speed),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("{value} must be > 0")));
            }
        }
        for (name, value) in [
            ("pause_mean", self.pause_mean),
            ("clutter_rcs", self.clutter_rcs),
            ("pri", self.pri),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::invalid(name, format!("{value} must be >= 0")));
            }
        }
        let alpha_hat = self.alpha_hat();
        if !(alpha_hat > 0.0 && alpha_hat <= 1.0) {
            return Err(Error::ModelValidity(format!(
                "path-loss ratio alpha_b/alpha_v = {alpha_hat} must lie in (0, 1]"
            )));
        }
        power_ratio_w(&self.bs, &self.drv).map(|_| ())
    }

    pub fn alpha_hat(&self) -> f64 {
        self.bs.path_loss_exponent / self.drv.path_loss_exponent
    }

    /// W, checked to be below 1.
    pub fn w(&self) -> Result<f64> {
        power_ratio_w(&self.bs, &self.drv)
    }
}

/// W = (P_v G_v² / (P_b G_b²))^{1/α_v}.
pub fn power_ratio_w(bs: &RadioNodeParams, drv: &RadioNodeParams) -> Result<f64> {
    let w = (drv.effective_power() / bs.effective_power()).powf(1.0 / drv.path_loss_exponent);
    check_w(w)?;
    Ok(w)
}

pub(crate) fn check_w(w: f64) -> Result<()> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::invalid("w", format!("{w} must be > 0")));
    }
    if w >= 1.0 {
        return Err(Error::ModelValidity(format!(
            "DRV dominates BS: W = {w} >= 1, the equal-power region is unbounded"
        )));
    }
    Ok(())
}

/// Dimensionless quantities shared by the coverage and DRR closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub w: f64,
    pub alpha_hat: f64,
    /// MMSE scaling of the linearised power law for this BS–DRV distance.
    pub beta: f64,
}

/// Derives W, α̂ and β for a DRV at distance `d_v` from the BS.
///
/// β = d_v^{2(α̂-1)}; for α̂ = 1 this is 1 for every d_v including 0.
pub fn derive_params(net: &NetworkParams, d_v: f64) -> Result<DerivedParams> {
    if !(d_v.is_finite() && d_v >= 0.0) {
        return Err(Error::invalid("d_v", format!("{d_v} must be >= 0")));
    }
    net.validate()?;
    let w = net.w()?;
    let alpha_hat = net.alpha_hat();
    let beta = if alpha_hat == 1.0 {
        1.0
    } else {
        d_v.powf(2.0 * (alpha_hat - 1.0))
    };
    Ok(DerivedParams { w, alpha_hat, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equal_effective_power_is_rejected() {
        let bs = RadioNodeParams::new(4.0, 2.0, 3.0).unwrap();
        let drv = RadioNodeParams::new(16.0, 1.0, 4.0).unwrap();
        match power_ratio_w(&bs, &drv) {
            Err(Error::ModelValidity(msg)) => assert!(msg.contains("DRV dominates BS")),
            other => panic!("expected model-validity error, got {other:?}"),
        }
    }

    #[test]
    fn sixteen_to_one_with_alpha_four_gives_half() {
        let bs = RadioNodeParams::new(16.0, 1.0, 4.0).unwrap();
        let drv = RadioNodeParams::new(1.0, 1.0, 4.0).unwrap();
        let w = power_ratio_w(&bs, &drv).unwrap();
        assert!((w - 0.5).abs() < 1e-15);
    }

    #[test]
    fn default_w() {
        // 10^(-3.4/4): P_b G_b^2 = 74 dBm, P_v G_v^2 = 40 dBm.
        let net = NetworkParams::defaults();
        let d = derive_params(&net, 500.0).unwrap();
        assert!((d.w - 0.141_253_754_462_275_4).abs() < 1e-12, "{}", d.w);
        assert_eq!(d.alpha_hat, 1.0);
        assert_eq!(d.beta, 1.0);
    }

    #[test]
    fn beta_at_zero_distance_for_unit_ratio() {
        let net = NetworkParams::defaults();
        assert_eq!(derive_params(&net, 0.0).unwrap().beta, 1.0);
    }

    #[test]
    fn beta_for_fractional_ratio() {
        let net = NetworkParams::defaults().with_path_loss(3.0, 4.0);
        let d = derive_params(&net, 500.0).unwrap();
        assert!((d.beta - 500f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(RadioNodeParams::new(0.0, 1.0, 4.0).is_err());
        assert!(RadioNodeParams::new(1.0, 1.0, 6.0).is_err());
        assert!(RadioNodeParams::new(1.0, 1.0, 2.0).is_err());
        let mut net = NetworkParams::defaults();
        net.pause_mean = -1.0;
        assert!(net.validate().is_err());
        // alpha_b > alpha_v gives alpha_hat > 1
        let net = NetworkParams::defaults().with_path_loss(5.0, 4.0);
        assert!(matches!(net.validate(), Err(Error::ModelValidity(_))));
        assert!(derive_params(&NetworkParams::defaults(), -1.0).is_err());
    }

    proptest! {
        #[test]
        fn w_is_scale_invariant_in_power(k in 1e-3f64..1e3, av in 2.5f64..5.9) {
            let bs = RadioNodeParams::new(40.0, 25.0, 3.0).unwrap();
            let drv = RadioNodeParams::new(1.0, 3.0, av).unwrap();
            let w1 = power_ratio_w(&bs, &drv).unwrap();
            let bs2 = RadioNodeParams { tx_power: bs.tx_power * k, ..bs };
            let drv2 = RadioNodeParams { tx_power: drv.tx_power * k, ..drv };
            let w2 = power_ratio_w(&bs2, &drv2).unwrap();
            prop_assert!((w1 - w2).abs() <= 1e-12);
        }

        #[test]
        fn unit_ratio_beta_is_one(d in 1e-3f64..1e5) {
            let net = NetworkParams::defaults();
            prop_assert_eq!(derive_params(&net, d).unwrap().beta, 1.0);
        }
    }
}
