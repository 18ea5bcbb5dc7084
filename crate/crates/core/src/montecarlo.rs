//! Seeded Monte-Carlo realisation of the network: static Poisson BSs,
//! random-waypoint DRVs carrying sensing disks, and a fixed target at the
//! window center.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobility::{expected_period, MobilityParams, TransitionSampler, Walk};
use crate::model::NetworkParams;
use crate::ppp::{rc_scale, sample_ppp, NearestIndex, Window};
use crate::shapes::{Circle, Point2};

/// z for a two-sided 95% normal interval.
pub const Z95: f64 = 1.959_963_984_540_054;
const MAX_BS_RESAMPLES: usize = 1000;
const BS_LANE: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fidelity {
    /// Whole-line chord per entry, nothing else: the analysis' own
    /// assumptions.
    #[default]
    AssumptionMatched,
    /// Chord clipped to the transition, plus the pause when the DRV stops
    /// with the target still inside.
    Full,
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fidelity::AssumptionMatched => "assumption_matched",
            Fidelity::Full => "full",
        })
    }
}

impl FromStr for Fidelity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "assumption_matched" => Ok(Fidelity::AssumptionMatched),
            "full" => Ok(Fidelity::Full),
            other => Err(Error::Config(format!(
                "unknown fidelity `{other}` (expected assumption_matched or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub net: NetworkParams,
    pub window: Window,
    pub replications: usize,
    pub periods_per_drv: usize,
    pub seed: u64,
    pub fidelity: Fidelity,
}

impl SimConfig {
    /// Uses the default toroidal window for the configured intensities.
    pub fn new(
        net: NetworkParams,
        replications: usize,
        periods_per_drv: usize,
        seed: u64,
        fidelity: Fidelity,
    ) -> Result<Self> {
        let lv = if net.drv_intensity > 0.0 {
            net.drv_intensity
        } else {
            net.bs_intensity
        };
        let cfg = Self {
            net,
            window: Window::default_for(net.bs_intensity, lv)?,
            replications,
            periods_per_drv,
            seed,
            fidelity,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// λ_v = 0 is accepted here (an empty DRV layer); everything else must
    /// satisfy the network invariants.
    pub fn validate(&self) -> Result<()> {
        let mut net = self.net;
        if net.drv_intensity == 0.0 {
            net.drv_intensity = net.bs_intensity;
        }
        net.validate()?;
        if self.replications == 0 {
            return Err(Error::invalid("replications", "must be >= 1"));
        }
        if self.periods_per_drv == 0 {
            return Err(Error::invalid("periods_per_drv", "must be >= 1"));
        }
        Ok(())
    }

    fn mobility(&self) -> Option<MobilityParams> {
        (self.net.drv_intensity > 0.0)
            .then(|| MobilityParams::new(self.net.drv_intensity, self.net.speed, self.net.pause_mean))
            .transpose()
            .ok()
            .flatten()
    }

    /// Simulated time per replication: `periods_per_drv` mean movement
    /// periods. Without DRVs, `periods_per_drv` window crossings.
    pub fn horizon(&self) -> f64 {
        let period = match self.mobility() {
            Some(m) => expected_period(&m),
            None => self.window.width / self.net.speed,
        };
        self.periods_per_drv as f64 * period
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DwellEvent {
    pub drv_index: usize,
    pub transition_index: usize,
    /// κ, s.
    pub dwell: f64,
    pub qualifying: bool,
}

/// Dwell time credited to an entry of `disk` while moving from `start` to
/// `end`, or `None` when the segment does not carry the disk's center
/// across its boundary from outside.
///
/// In assumption-matched mode the dwell is the chord of the whole line; in
/// full mode it is clipped to the segment.
pub fn segment_disk_dwell(start: Point2, end: Point2, disk: &Circle, speed: f64, fidelity: Fidelity) -> Option<f64> {
    let hit = segment_entry(start, end, disk)?;
    let chord = match fidelity {
        Fidelity::AssumptionMatched => hit.s_out - hit.s_in,
        Fidelity::Full => hit.s_out.min(hit.length) - hit.s_in,
    };
    Some(chord / speed)
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    s_in: f64,
    s_out: f64,
    length: f64,
}

/// Arc-length parameters where the line through the segment enters and
/// leaves the disk, when the entry falls on the segment.
fn segment_entry(start: Point2, end: Point2, disk: &Circle) -> Option<Entry> {
    let d = end - start;
    let length = d.norm();
    if !(length > 0.0) {
        return None;
    }
    let dir = d * (1.0 / length);
    let rel = disk.center - start;
    let proj = rel.dot(dir);
    let h_sq = (rel.norm_sq() - proj * proj).max(0.0);
    let r_sq = disk.radius * disk.radius;
    if h_sq > r_sq {
        return None;
    }
    let half = (r_sq - h_sq).sqrt();
    let s_in = proj - half;
    (s_in >= 0.0 && s_in < length).then_some(Entry {
        s_in,
        s_out: proj + half,
        length,
    })
}

/// Everything one replication contributes to the estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationOutcome {
    pub rep_index: usize,
    pub drv_count: usize,
    pub events: Vec<DwellEvent>,
    pub rc_sum: f64,
    pub rc_count: usize,
    pub sim_time: f64,
    /// Empty BS patterns discarded before a usable one was drawn.
    pub bs_resamples: usize,
}

/// Independent stream for (seed, replication, lane). Lane 0 drives the BS
/// layer and the DRV count, lane k ≥ 1 drives DRV k - 1.
pub fn substream(seed: u64, rep: u64, lane: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&rep.to_le_bytes());
    key[16..24].copy_from_slice(&lane.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn run_replication(cfg: &SimConfig, rep_index: usize) -> Result<ReplicationOutcome> {
    let net = &cfg.net;
    let window = cfg.window;
    let horizon = cfg.horizon();
    let mut rng = substream(cfg.seed, rep_index as u64, BS_LANE);

    let mut bs_resamples = 0;
    let bs = loop {
        let pattern = sample_ppp(net.bs_intensity, window, &mut rng)?;
        if !pattern.is_empty() {
            break pattern;
        }
        bs_resamples += 1;
        if bs_resamples >= MAX_BS_RESAMPLES {
            return Err(Error::EmptyPattern);
        }
    };
    if bs_resamples > 0 {
        log::debug!("replication {rep_index}: {bs_resamples} empty BS patterns resampled");
    }
    let index = NearestIndex::new(&bs)?;

    let mean_drvs = net.drv_intensity * window.area();
    let drv_count = if mean_drvs > 0.0 {
        let n: f64 = Poisson::new(mean_drvs)
            .map_err(|e| Error::invalid("drv_intensity", e.to_string()))?
            .sample(&mut rng);
        n as usize
    } else {
        0
    };

    let mut out = ReplicationOutcome {
        rep_index,
        drv_count,
        events: Vec::new(),
        rc_sum: 0.0,
        rc_count: 0,
        sim_time: horizon,
        bs_resamples,
    };
    let Some(mobility) = cfg.mobility() else {
        return Ok(out);
    };
    let sampler = TransitionSampler::new(mobility)?;
    let k = rc_scale(net.w()?);
    let target = window.center();

    for drv in 0..drv_count {
        let mut rng = substream(cfg.seed, rep_index as u64, drv as u64 + 1);
        let start = Point2::new(rng.random::<f64>() * window.width, rng.random::<f64>() * window.height);
        let walk = Walk::new(sampler, start, horizon, Some(window), &mut rng);
        let mut elapsed = 0.0;
        for (transition_index, t) in walk.enumerate() {
            elapsed += t.period();
            let rc = k * index.nearest_distance(t.start);
            out.rc_sum += rc;
            out.rc_count += 1;

            // the target image nearest the middle of the move
            let mid = t.start + (t.end - t.start) * 0.5;
            let disk = Circle {
                center: mid + window.displacement(mid, target),
                radius: rc,
            };
            let Some(hit) = segment_entry(t.start, t.end, &disk) else {
                continue;
            };
            let dwell = match cfg.fidelity {
                Fidelity::AssumptionMatched => (hit.s_out - hit.s_in) / net.speed,
                Fidelity::Full => {
                    let mut d = (hit.s_out.min(hit.length) - hit.s_in) / net.speed;
                    if hit.s_out > hit.length && elapsed < horizon {
                        d += t.pause_after;
                    }
                    d
                }
            };
            let qualifying = dwell >= net.pri;
            out.events.push(DwellEvent {
                drv_index: drv,
                transition_index,
                dwell,
                qualifying,
            });
        }
    }
    Ok(out)
}

/// A point estimate with the half-width of its 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn low(&self) -> f64 {
        self.value - self.half_width
    }

    pub fn high(&self) -> f64 {
        self.value + self.half_width
    }

    pub fn covers(&self, x: f64) -> bool {
        self.low() <= x && x <= self.high()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub xi: Estimate,
    pub xi_r: Estimate,
    /// Absent when no event occurred.
    pub p_dwell: Option<Estimate>,
    /// Absent when no DRV moved.
    pub mean_rc: Option<Estimate>,
    pub event_count: usize,
    pub qualifying_count: usize,
    pub rc_samples: usize,
    /// Target-observed time summed over replications, s.
    pub sim_time: f64,
    pub replications: usize,
    pub bs_resamples: usize,
    pub seed: u64,
    pub fidelity: Fidelity,
}

/// Runs every replication (in parallel) and aggregates them in index order.
pub fn estimate(cfg: &SimConfig) -> Result<SimReport> {
    aggregate(cfg, &run_replications(cfg)?)
}

pub fn run_replications(cfg: &SimConfig) -> Result<Vec<ReplicationOutcome>> {
    cfg.validate()?;
    (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep))
        .collect()
}

/// Folds replication outcomes into a report. Events qualify against
/// `cfg.net.pri`, so one set of outcomes can be re-scored for several PRIs.
pub fn aggregate(cfg: &SimConfig, outcomes: &[ReplicationOutcome]) -> Result<SimReport> {
    let pri = cfg.net.pri;
    let qualifying_of = |o: &ReplicationOutcome| o.events.iter().filter(|e| e.dwell >= pri).count();
    let sim_time: f64 = outcomes.iter().map(|o| o.sim_time).sum();
    if !(sim_time > 0.0) {
        return Err(Error::ZeroSimTime);
    }
    let events: Vec<f64> = outcomes.iter().map(|o| o.events.len() as f64).collect();
    let qualifying: Vec<f64> = outcomes.iter().map(|o| qualifying_of(o) as f64).collect();
    let times: Vec<f64> = outcomes.iter().map(|o| o.sim_time).collect();
    let rc_sums: Vec<f64> = outcomes.iter().map(|o| o.rc_sum).collect();
    let rc_counts: Vec<f64> = outcomes.iter().map(|o| o.rc_count as f64).collect();

    let event_count = outcomes.iter().map(|o| o.events.len()).sum();
    let qualifying_count = outcomes.iter().map(qualifying_of).sum();
    let rc_samples = outcomes.iter().map(|o| o.rc_count).sum();
    Ok(SimReport {
        xi: ratio_estimate(&qualifying, &times).expect("positive time"),
        xi_r: ratio_estimate(&events, &times).expect("positive time"),
        p_dwell: ratio_estimate(&qualifying, &events),
        mean_rc: ratio_estimate(&rc_sums, &rc_counts),
        event_count,
        qualifying_count,
        rc_samples,
        sim_time,
        replications: outcomes.len(),
        bs_resamples: outcomes.iter().map(|o| o.bs_resamples).sum(),
        seed: cfg.seed,
        fidelity: cfg.fidelity,
    })
}

/// Σy/Σx over replications with a delta-method 95% half-width; `None`
/// when Σx = 0.
fn ratio_estimate(y: &[f64], x: &[f64]) -> Option<Estimate> {
    let n = y.len() as f64;
    let (sy, sx): (f64, f64) = (y.iter().sum(), x.iter().sum());
    if !(sx > 0.0) {
        return None;
    }
    let r = sy / sx;
    if y.len() < 2 {
        return Some(Estimate { value: r, half_width: 0.0 });
    }
    let x_bar = sx / n;
    let var = y
        .iter()
        .zip(x)
        .map(|(&yi, &xi)| (yi - r * xi).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Some(Estimate {
        value: r,
        half_width: Z95 * (var / n).sqrt() / x_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drr::dynamic_ranging_rate_with_area;
    use proptest::prelude::*;

    fn unit_disk(r: f64) -> Circle {
        Circle::new(Point2::ORIGIN, r).unwrap()
    }

    #[test]
    fn dwell_geometry_examples() {
        let r = 10.0;
        let u = 2.0;
        let disk = unit_disk(r);
        for f in [Fidelity::AssumptionMatched, Fidelity::Full] {
            let d = segment_disk_dwell(Point2::new(-20.0, 0.0), Point2::new(20.0, 0.0), &disk, u, f).unwrap();
            assert!((d - 2.0 * r / u).abs() < 1e-12);
            let d = segment_disk_dwell(Point2::new(-20.0, r), Point2::new(20.0, r), &disk, u, f).unwrap();
            assert_eq!(d, 0.0);
            let d = segment_disk_dwell(Point2::new(-20.0, r / 2.0), Point2::new(20.0, r / 2.0), &disk, u, f).unwrap();
            assert!((d - r * 3f64.sqrt() / u).abs() < 1e-12);
            assert!(segment_disk_dwell(Point2::new(-20.0, 11.0), Point2::new(20.0, 11.0), &disk, u, f).is_none());
            // starts inside: no entry
            assert!(segment_disk_dwell(Point2::ORIGIN, Point2::new(20.0, 0.0), &disk, u, f).is_none());
        }
        // ends inside: whole chord vs the part travelled
        let (a, b) = (Point2::new(-20.0, 0.0), Point2::new(5.0, 0.0));
        let am = segment_disk_dwell(a, b, &disk, u, Fidelity::AssumptionMatched).unwrap();
        let full = segment_disk_dwell(a, b, &disk, u, Fidelity::Full).unwrap();
        assert!((am - 10.0).abs() < 1e-12 && (full - 7.5).abs() < 1e-12);
    }

    fn small_config(reps: usize, seed: u64) -> SimConfig {
        let mut net = NetworkParams::defaults();
        net.bs_intensity = 2e-6;
        net.drv_intensity = 4e-6;
        SimConfig::new(net, reps, 5, seed, Fidelity::AssumptionMatched).unwrap()
    }

    #[test]
    fn no_drvs_no_events() {
        let mut net = NetworkParams::defaults();
        net.drv_intensity = 0.0;
        let cfg = SimConfig::new(net, 20, 5, 1, Fidelity::AssumptionMatched).unwrap();
        let r = estimate(&cfg).unwrap();
        assert_eq!(r.event_count, 0);
        assert_eq!(r.xi.value, 0.0);
        assert!(r.p_dwell.is_none());
        assert!(r.sim_time > 0.0);
    }

    #[test]
    fn zero_pri_every_event_qualifies() {
        let mut cfg = small_config(200, 3);
        cfg.net.pri = 0.0;
        let r = estimate(&cfg).unwrap();
        assert!(r.event_count > 0);
        assert_eq!(r.p_dwell.unwrap().value, 1.0);
        assert_eq!(r.xi, r.xi_r);
    }

    #[test]
    fn very_fast_drvs_rarely_qualify() {
        let mut cfg = small_config(200, 4);
        cfg.net.speed = 1e6;
        cfg.net.pri = 0.05;
        let r = estimate(&cfg).unwrap();
        assert!(r.event_count > 100);
        assert!(r.p_dwell.unwrap().value < 0.01);
        assert!(r.xi.value <= r.xi_r.value);
    }

    #[test]
    fn half_width_shrinks_with_replications() {
        let a = estimate(&small_config(400, 5)).unwrap();
        let b = estimate(&small_config(800, 5)).unwrap();
        let ratio = b.xi_r.half_width / a.xi_r.half_width;
        assert!((ratio / std::f64::consts::FRAC_1_SQRT_2 - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn rate_tracks_closed_form() {
        let cfg = small_config(1000, 6);
        let r = estimate(&cfg).unwrap();
        let d = dynamic_ranging_rate_with_area(&cfg.net, cfg.window.area()).unwrap();
        assert!((r.xi_r.value / d.xi_r - 1.0).abs() < 4.0 * r.xi_r.half_width / d.xi_r + 0.02);
    }

    #[test]
    fn identical_across_thread_counts() {
        let cfg = small_config(50, 7);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate(&cfg).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one, estimate(&cfg).unwrap());
    }

    #[test]
    fn invalid_configs() {
        let net = NetworkParams::defaults();
        assert!(SimConfig::new(net, 0, 1, 0, Fidelity::Full).is_err());
        assert!(SimConfig::new(net, 1, 0, 0, Fidelity::Full).is_err());
        assert_eq!("full".parse::<Fidelity>().unwrap(), Fidelity::Full);
        assert!("partial".parse::<Fidelity>().is_err());
        assert_eq!(Fidelity::AssumptionMatched.to_string(), "assumption_matched");
    }

    #[test]
    fn full_fidelity_never_exceeds_whole_chord_without_pauses() {
        let mut a = small_config(100, 8);
        a.net.pause_mean = 0.0;
        let mut b = a;
        b.fidelity = Fidelity::Full;
        let ra = run_replication(&a, 3).unwrap();
        let rb = run_replication(&b, 3).unwrap();
        assert_eq!(ra.events.len(), rb.events.len());
        for (ea, eb) in ra.events.iter().zip(&rb.events) {
            assert!(eb.dwell <= ea.dwell + 1e-12);
        }
    }

    proptest! {
        #[test]
        fn entries_on_a_path_are_counted_once(y in -15.0f64..15.0, cut in 0.01f64..0.99) {
            // splitting a straight move never double counts an entry
            let disk = unit_disk(10.0);
            let (a, b) = (Point2::new(-30.0, y), Point2::new(30.0, y));
            let m = a + (b - a) * cut;
            let whole = segment_disk_dwell(a, b, &disk, 1.0, Fidelity::AssumptionMatched).is_some() as u8;
            let split = segment_disk_dwell(a, m, &disk, 1.0, Fidelity::AssumptionMatched).is_some() as u8
                + segment_disk_dwell(m, b, &disk, 1.0, Fidelity::AssumptionMatched).is_some() as u8;
            prop_assert_eq!(whole, split);
        }
    }
}
