//! Closed-form dynamic ranging rate.
//!
//! A DRV's sensing region is taken to be the unit-ratio circle of radius
//! R_c = √W d_v/(1 - W), with d_v the distance to its nearest BS.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobility::{expected_period, MobilityParams};
use crate::model::{check_w, NetworkParams};
use crate::ppp::{expected_rc, rc_scale, Window};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrrAnalytic {
    /// Ranging-event probability per movement period per DRV.
    pub p_r: f64,
    /// Event rate seen by the target, per second.
    pub xi_r: f64,
    /// P(κ ≥ τ).
    pub p_dwell: f64,
    /// ξ = ξ_r · P(κ ≥ τ), per second.
    pub xi: f64,
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be > 0")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be >= 0")))
    }
}

/// ℙ_r = √W/(1 - W) · 1/(2|A|√(λ_b λ_v)).
pub fn ranging_event_probability(w: f64, lambda_b: f64, lambda_v: f64, area: f64) -> Result<f64> {
    check_w(w)?;
    positive("lambda_b", lambda_b)?;
    positive("lambda_v", lambda_v)?;
    positive("area", area)?;
    let p = rc_scale(w) / (2.0 * area * (lambda_b * lambda_v).sqrt());
    if p > 1.0 {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p)
}

/// ξ_r = √W/(1 - W) · λ_v u / (√λ_b + 2√(λ_b λ_v) u E[T_s]).
pub fn ranging_repetition_rate(w: f64, lambda_b: f64, lambda_v: f64, speed: f64, pause_mean: f64) -> Result<f64> {
    check_w(w)?;
    positive("lambda_b", lambda_b)?;
    positive("lambda_v", lambda_v)?;
    positive("speed", speed)?;
    non_negative("pause_mean", pause_mean)?;
    let denom = lambda_b.sqrt() + 2.0 * (lambda_b * lambda_v).sqrt() * speed * pause_mean;
    Ok(rc_scale(w) * lambda_v * speed / denom)
}

/// P(κ ≥ τ) = exp(-4λ_b (1 - W)² u² τ² / (πW)).
pub fn dwell_exceed_probability(w: f64, lambda_b: f64, speed: f64, tau: f64) -> Result<f64> {
    check_w(w)?;
    positive("lambda_b", lambda_b)?;
    positive("speed", speed)?;
    non_negative("tau", tau)?;
    let one_minus = 1.0 - w;
    Ok((-4.0 * lambda_b * one_minus * one_minus * speed * speed * tau * tau / (PI * w)).exp())
}

/// Mean chord of a disk cut by a uniformly random line that hits it,
/// (π/2) R.
pub fn expected_chord(radius: f64) -> f64 {
    0.5 * PI * radius
}

/// All four quantities at `net`, with ℙ_r taken over the default
/// simulation window.
pub fn dynamic_ranging_rate(net: &NetworkParams) -> Result<DrrAnalytic> {
    let window = Window::default_for(net.bs_intensity, net.drv_intensity)?;
    dynamic_ranging_rate_with_area(net, window.area())
}

pub fn dynamic_ranging_rate_with_area(net: &NetworkParams, area: f64) -> Result<DrrAnalytic> {
    net.validate()?;
    let w = net.w()?;
    let (lb, lv) = (net.bs_intensity, net.drv_intensity);
    let p_r = ranging_event_probability(w, lb, lv, area)?;
    let xi_r = ranging_repetition_rate(w, lb, lv, net.speed, net.pause_mean)?;
    let p_dwell = dwell_exceed_probability(w, lb, net.speed, net.pri)?;
    Ok(DrrAnalytic {
        p_r,
        xi_r,
        p_dwell,
        xi: xi_r * p_dwell,
    })
}

/// ξ_r assembled from its parts: λ_v|A| ℙ_r / E[T], with
/// ℙ_r = 2 E[|L|] E[R_c] / |A|.
pub fn repetition_rate_from_parts(w: f64, net: &NetworkParams, area: f64) -> Result<f64> {
    let mob = MobilityParams::new(net.drv_intensity, net.speed, net.pause_mean)?;
    let p_r = 2.0 * mob.mean_length() * expected_rc(w, net.bs_intensity)? / area;
    Ok(net.drv_intensity * area * p_r / expected_period(&mob))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppp::{mean_nearest_distance, nearest_distance_cdf};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn defaults_anchor() {
        let net = NetworkParams::defaults();
        let d = dynamic_ranging_rate(&net).unwrap();
        assert!((d.xi_r - 8.653_077_533_806_474e-4).abs() < 1e-12, "{}", d.xi_r);
        assert!((d.xi_r - 8.65e-4).abs() < 1e-6);
        assert!(d.p_dwell > 0.999_99 && d.p_dwell < 1.0);
        assert_eq!(d.xi, d.xi_r * d.p_dwell);
    }

    #[test]
    fn event_probability_examples() {
        let a = ranging_event_probability(0.14, 0.5e-6, 1e-6, 1e8).unwrap();
        let b = ranging_event_probability(0.14, 0.5e-6, 1e-6, 2e8).unwrap();
        assert!(rel(b, a / 2.0) < 1e-15);
        assert!(matches!(
            ranging_event_probability(0.14, 0.5e-6, 1e-6, 1.0),
            Err(Error::ProbabilityOutOfRange(_))
        ));
        assert!(ranging_event_probability(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn tau_zero_and_slow_limits() {
        assert_eq!(dwell_exceed_probability(0.3, 1e-6, 1.4, 0.0).unwrap(), 1.0);
        let slow = ranging_repetition_rate(0.3, 1e-6, 1e-6, 1e-12, 0.5).unwrap();
        assert!(slow < 1e-15);
        let mut net = NetworkParams::defaults();
        net.pri = 0.0;
        let d = dynamic_ranging_rate(&net).unwrap();
        assert_eq!(d.p_dwell, 1.0);
        assert_eq!(d.xi, d.xi_r);
    }

    #[test]
    fn chord_examples() {
        assert!((expected_chord(2.0) - PI).abs() < 1e-15);
        assert_eq!(expected_chord(0.0), 0.0);
    }

    #[test]
    fn random_chord_mean() {
        // lines with uniform direction and offset hitting the disk
        let r = 218.83;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 1_000_000;
        let sum: f64 = (0..n)
            .map(|_| {
                let h = rng.random::<f64>() * r;
                2.0 * (r * r - h * h).sqrt()
            })
            .sum();
        let mean = sum / n as f64;
        assert!(rel(mean, expected_chord(r)) < 0.01, "{mean}");
        assert!((expected_chord(r) - 343.74).abs() < 0.01);
    }

    #[test]
    fn monotone_in_tau_and_speed() {
        let (w, lb) = (0.14, 0.5e-6);
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let p = dwell_exceed_probability(w, lb, 50.0, 0.01 * k as f64).unwrap();
            assert!(p < prev);
            prev = p;
        }
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let p = dwell_exceed_probability(w, lb, 10.0 * k as f64, 1.0).unwrap();
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn xi_increases_with_drv_intensity() {
        let mut net = NetworkParams::defaults();
        let mut prev = 0.0;
        for k in 0..100 {
            net.drv_intensity = 1e-7 * 10f64.powf(2.0 * k as f64 / 99.0);
            let d = dynamic_ranging_rate_with_area(&net, 1e10).unwrap();
            assert!(d.xi > prev);
            prev = d.xi;
        }
    }

    proptest! {
        #[test]
        fn identities(w in 0.01f64..0.9, lb_km in 0.1f64..10.0, lv_km in 0.1f64..10.0,
                      u in 0.1f64..30.0, ts in 0.0f64..100.0, tau in 0.0f64..0.5) {
            let (lb, lv) = (lb_km * 1e-6, lv_km * 1e-6);
            let area = 1e10;
            let p_r = ranging_event_probability(w, lb, lv, area).unwrap();
            let lhs = 2.0 * mean_nearest_distance(lv) * expected_rc(w, lb).unwrap() / area;
            prop_assert!(rel(p_r, lhs) < 1e-12);

            let mob = MobilityParams::new(lv, u, ts).unwrap();
            let xi_r = ranging_repetition_rate(w, lb, lv, u, ts).unwrap();
            prop_assert!(rel(xi_r, lv * area * p_r / expected_period(&mob)) < 1e-12);

            let p = dwell_exceed_probability(w, lb, u, tau).unwrap();
            let r = 2.0 * u * tau * (1.0 - w) / (PI * w.sqrt());
            prop_assert!((p - (1.0 - nearest_distance_cdf(r, lb))).abs() < 1e-12);

            // literal closed form for ξ
            let literal = w.sqrt() / (1.0 - w) * lv * u / (lb.sqrt() + 2.0 * (lb * lv).sqrt() * u * ts)
                * (-4.0 * lb * (1.0 - w).powi(2) / (PI * w) * u * u * tau * tau).exp();
            prop_assert!(rel(xi_r * p, literal) < 1e-12 || literal == 0.0);
        }

        #[test]
        fn product_identity(lv_km in 0.1f64..10.0, u in 0.1f64..10.0, tau in 0.001f64..0.5, pause in 0.0f64..10.0) {
            let mut net = NetworkParams::defaults();
            net.drv_intensity = lv_km * 1e-6;
            net.speed = u;
            net.pri = tau;
            net.pause_mean = pause;
            let d = dynamic_ranging_rate(&net).unwrap();
            prop_assert!(rel(d.xi, d.xi_r * d.p_dwell) <= 1e-15);
            prop_assert!(d.p_r > 0.0 && d.p_r <= 1.0 && d.p_dwell <= 1.0);
            let from_parts = repetition_rate_from_parts(net.w().unwrap(), &net, 1e9).unwrap();
            prop_assert!(rel(d.xi_r, from_parts) < 1e-12);
        }

        #[test]
        fn unit_rescaling(w in 0.01f64..0.9, lb_km in 0.1f64..10.0, lv_km in 0.1f64..10.0,
                          u in 0.1f64..30.0, ts in 0.0f64..100.0, tau in 0.0f64..0.5) {
            let xi_m = ranging_repetition_rate(w, lb_km * 1e-6, lv_km * 1e-6, u, ts).unwrap()
                * dwell_exceed_probability(w, lb_km * 1e-6, u, tau).unwrap();
            let xi_km = ranging_repetition_rate(w, lb_km, lv_km, u * 1e-3, ts).unwrap()
                * dwell_exceed_probability(w, lb_km, u * 1e-3, tau).unwrap();
            prop_assert!(xi_m == 0.0 && xi_km == 0.0 || rel(xi_m, xi_km) < 1e-12);
        }
    }
}
