//! Random-waypoint motion with Rayleigh transition lengths and exponential
//! pauses.
//!
//! Waypoints are realised by drawing a (length, direction) pair per
//! transition rather than by picking points of a second pattern.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, Weibull};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ppp::Window;
use crate::shapes::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MobilityParams {
    /// λ_v, per m².
    pub waypoint_intensity: f64,
    /// u, m/s.
    pub speed: f64,
    /// E[T_s], s.
    pub pause_mean: f64,
}

impl MobilityParams {
    pub fn new(waypoint_intensity: f64, speed: f64, pause_mean: f64) -> Result<Self> {
        let p = Self {
            waypoint_intensity,
            speed,
            pause_mean,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.waypoint_intensity.is_finite() && self.waypoint_intensity > 0.0) {
            return Err(Error::invalid("waypoint_intensity", format!("{} must be > 0", self.waypoint_intensity)));
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(Error::invalid("speed", format!("{} must be > 0", self.speed)));
        }
        if !(self.pause_mean.is_finite() && self.pause_mean >= 0.0) {
            return Err(Error::invalid("pause_mean", format!("{} must be >= 0", self.pause_mean)));
        }
        Ok(())
    }

    /// Rayleigh scale σ = 1/√(2πλ_v), so that the mean length is 1/(2√λ_v).
    pub fn rayleigh_scale(&self) -> f64 {
        1.0 / (2.0 * PI * self.waypoint_intensity).sqrt()
    }

    pub fn mean_length(&self) -> f64 {
        0.5 / self.waypoint_intensity.sqrt()
    }
}

/// One move between successive waypoints followed by a pause.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub start: Point2,
    /// Unwrapped end point; `length == (end - start).norm()`.
    pub end: Point2,
    pub length: f64,
    pub duration: f64,
    pub pause_after: f64,
}

impl Transition {
    pub fn period(&self) -> f64 {
        self.duration + self.pause_after
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub transitions: Vec<Transition>,
    pub total_time: f64,
}

/// Samplers for one set of mobility parameters.
#[derive(Debug, Clone, Copy)]
pub struct TransitionSampler {
    params: MobilityParams,
    length: Weibull<f64>,
    pause: Option<Exp<f64>>,
}

impl TransitionSampler {
    pub fn new(params: MobilityParams) -> Result<Self> {
        params.validate()?;
        // Rayleigh(σ) is Weibull(scale σ√2, shape 2)
        let length = Weibull::new(params.rayleigh_scale() * 2f64.sqrt(), 2.0)
            .map_err(|e| Error::invalid("waypoint_intensity", e.to_string()))?;
        let pause = if params.pause_mean > 0.0 {
            Some(Exp::new(1.0 / params.pause_mean).map_err(|e| Error::invalid("pause_mean", e.to_string()))?)
        } else {
            None
        };
        Ok(Self { params, length, pause })
    }

    pub fn params(&self) -> &MobilityParams {
        &self.params
    }

    pub fn sample<R: Rng + ?Sized>(&self, current: Point2, rng: &mut R) -> Transition {
        let length = self.length.sample(rng);
        let heading = rng.random::<f64>() * 2.0 * PI;
        let pause_after = self.pause.map_or(0.0, |p| p.sample(rng));
        let end = current + Point2::from_polar(length, heading);
        Transition {
            start: current,
            end,
            length: (end - current).norm(),
            duration: length / self.params.speed,
            pause_after,
        }
    }
}

/// Draws one transition from `current`.
pub fn sample_transition<R: Rng + ?Sized>(
    current: Point2,
    params: &MobilityParams,
    rng: &mut R,
) -> Result<Transition> {
    Ok(TransitionSampler::new(*params)?.sample(current, rng))
}

/// E[T] = E[T_s] + 1/(2u√λ_v).
pub fn expected_period(params: &MobilityParams) -> f64 {
    params.pause_mean + params.mean_length() / params.speed
}

/// Transitions until a time horizon, the last one cut short so that the
/// periods sum to the horizon. With a window, each new start is wrapped
/// into it.
pub struct Walk<'a, R: Rng + ?Sized> {
    sampler: TransitionSampler,
    rng: &'a mut R,
    position: Point2,
    remaining: f64,
    window: Option<Window>,
}

impl<'a, R: Rng + ?Sized> Walk<'a, R> {
    pub fn new(
        sampler: TransitionSampler,
        start: Point2,
        duration: f64,
        window: Option<Window>,
        rng: &'a mut R,
    ) -> Self {
        Self {
            sampler,
            rng,
            position: start,
            remaining: duration.max(0.0),
            window,
        }
    }
}

impl<R: Rng + ?Sized> Iterator for Walk<'_, R> {
    type Item = Transition;

    fn next(&mut self) -> Option<Transition> {
        if self.remaining <= 0.0 {
            return None;
        }
        let mut t = self.sampler.sample(self.position, self.rng);
        if t.duration >= self.remaining {
            let speed = self.sampler.params.speed;
            let frac = self.remaining / t.duration;
            t.end = t.start + (t.end - t.start) * frac;
            t.length = (t.end - t.start).norm();
            t.duration = self.remaining;
            t.pause_after = 0.0;
            debug_assert!((t.length - speed * t.duration).abs() <= 1e-9 * t.length.max(1.0));
            self.remaining = 0.0;
        } else if t.period() >= self.remaining {
            t.pause_after = self.remaining - t.duration;
            self.remaining = 0.0;
        } else {
            self.remaining -= t.period();
        }
        self.position = match self.window {
            Some(w) => w.wrap_point(t.end),
            None => t.end,
        };
        Some(t)
    }
}

/// Concatenates transitions from `start` until exactly `duration` seconds
/// have elapsed.
pub fn build_trajectory<R: Rng + ?Sized>(
    start: Point2,
    duration: f64,
    params: &MobilityParams,
    rng: &mut R,
) -> Result<Trajectory> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::invalid("duration", format!("{duration} must be > 0")));
    }
    let sampler = TransitionSampler::new(*params)?;
    let transitions: Vec<Transition> = Walk::new(sampler, start, duration, None, rng).collect();
    let total_time = transitions.iter().map(Transition::period).sum();
    Ok(Trajectory {
        transitions,
        total_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn defaults() -> MobilityParams {
        MobilityParams::new(1e-6, 1.4, 0.5).unwrap()
    }

    #[test]
    fn expected_period_examples() {
        let p = MobilityParams::new(0.25, 1.0, 0.0).unwrap();
        assert!((expected_period(&p) - 1.0).abs() < 1e-15);
        assert!((expected_period(&defaults()) - 357.642_857_142_857_17).abs() < 1e-9);
    }

    #[test]
    fn invalid_params() {
        assert!(MobilityParams::new(0.0, 1.0, 0.0).is_err());
        assert!(MobilityParams::new(1.0, 0.0, 0.0).is_err());
        assert!(MobilityParams::new(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn mean_length_and_support() {
        let p = defaults();
        let s = TransitionSampler::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let t = s.sample(Point2::ORIGIN, &mut rng);
            assert!(t.length > 0.0 && t.pause_after >= 0.0);
            sum += t.length;
        }
        let mean = sum / n as f64;
        assert!((mean * 2.0 * p.waypoint_intensity.sqrt() - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn direction_is_uniform() {
        let s = TransitionSampler::new(defaults()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 1_000_000;
        let mut bins = [0u64; 36];
        for _ in 0..n {
            let t = s.sample(Point2::ORIGIN, &mut rng);
            let d = t.end - t.start;
            let a = d.y.atan2(d.x).rem_euclid(2.0 * PI);
            bins[((a / (2.0 * PI) * 36.0) as usize).min(35)] += 1;
        }
        let expect = n as f64 / 36.0;
        let chi2: f64 = bins.iter().map(|&b| (b as f64 - expect).powi(2) / expect).sum();
        // χ²(35) upper 1% point
        assert!(chi2 < 57.342, "{chi2}");
    }

    #[test]
    fn mean_period_matches() {
        let p = defaults();
        let s = TransitionSampler::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 100_000;
        let total: f64 = (0..n).map(|_| s.sample(Point2::ORIGIN, &mut rng).period()).sum();
        assert!((total / n as f64 / expected_period(&p) - 1.0).abs() < 0.01);
    }

    #[test]
    fn short_horizon_truncates_first_transition() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let t = build_trajectory(Point2::ORIGIN, 1e-3, &defaults(), &mut rng).unwrap();
        assert_eq!(t.transitions.len(), 1);
        assert!((t.total_time - 1e-3).abs() < 1e-12);
        assert!((t.transitions[0].length - 1.4e-3).abs() < 1e-12);
        assert!(build_trajectory(Point2::ORIGIN, 0.0, &defaults(), &mut rng).is_err());
    }

    #[test]
    fn renewal_count() {
        let p = defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let duration = 20_000.0 * expected_period(&p);
        let t = build_trajectory(Point2::ORIGIN, duration, &p, &mut rng).unwrap();
        let ratio = t.transitions.len() as f64 / (duration / expected_period(&p));
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn wrapped_walk_stays_in_window() {
        let w = Window::square(2000.0, true).unwrap();
        let s = TransitionSampler::new(defaults()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let walk = Walk::new(s, w.center(), 1e5, Some(w), &mut rng);
        for t in walk {
            assert!(w.contains(t.start));
        }
    }

    proptest! {
        #[test]
        fn trajectory_invariants(seed in 0u64..500, duration in 1.0f64..5000.0, pause in 0.0f64..100.0) {
            let p = MobilityParams::new(1e-4, 2.0, pause).unwrap();
            let mut a = ChaCha8Rng::seed_from_u64(seed);
            let mut b = ChaCha8Rng::seed_from_u64(seed);
            let t1 = build_trajectory(Point2::new(3.0, -2.0), duration, &p, &mut a).unwrap();
            let t2 = build_trajectory(Point2::new(3.0, -2.0), duration, &p, &mut b).unwrap();
            prop_assert_eq!(&t1, &t2);
            prop_assert!((t1.total_time - duration).abs() < 1e-9);
            for pair in t1.transitions.windows(2) {
                prop_assert_eq!(pair[0].end, pair[1].start);
            }
            for t in &t1.transitions {
                prop_assert!((t.length - (t.end - t.start).norm()).abs() < 1e-9);
                prop_assert!((t.duration * p.speed - t.length).abs() < 1e-9 * t.length.max(1.0));
                prop_assert!(t.pause_after >= 0.0);
            }
        }
    }
}
