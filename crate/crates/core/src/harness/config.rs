//! TOML experiment configuration with explicit units on every physical
//! quantity.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{NetworkParams, RadioNodeParams};
use crate::montecarlo::Fidelity;
use crate::units::{db_to_linear, dbm_to_watts, M2_PER_KM2};

/// Built-in configuration used when no file is given.
pub const DEFAULT_CONFIG: &str = include_str!("../../configs/default.toml");

/// Physical dimension a quantity string must carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Power,
    Gain,
    Length,
    Area,
    Intensity,
    Speed,
    Time,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Power => "power (dBm, W, mW)",
            Dimension::Gain => "gain (dBi, dB)",
            Dimension::Length => "length (m, km)",
            Dimension::Area => "area (m2, km2)",
            Dimension::Intensity => "intensity (per_m2, per_km2)",
            Dimension::Speed => "speed (m_per_s, km_per_h, km_per_s)",
            Dimension::Time => "time (s, ms)",
        })
    }
}

/// Parses "<number> <unit>" into SI (W, linear gain, m, m², per m², m/s, s).
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let mut parts = text.split_whitespace();
    let (Some(number), Some(unit), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Config(format!("`{text}`: expected \"<number> <unit>\" with a {dim} unit")));
    };
    let v: f64 = number
        .parse()
        .map_err(|_| Error::Config(format!("`{text}`: `{number}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("`{text}`: value must be finite")));
    }
    let si = match (dim, unit) {
        (Dimension::Power, "dBm") => dbm_to_watts(v),
        (Dimension::Power, "W") => v,
        (Dimension::Power, "mW") => v * 1e-3,
        (Dimension::Gain, "dBi" | "dB") => db_to_linear(v),
        (Dimension::Length, "m") => v,
        (Dimension::Length, "km") => v * 1e3,
        (Dimension::Area, "m2") => v,
        (Dimension::Area, "km2") => v * M2_PER_KM2,
        (Dimension::Intensity, "per_m2") => v,
        (Dimension::Intensity, "per_km2") => v / M2_PER_KM2,
        (Dimension::Speed, "m_per_s") => v,
        (Dimension::Speed, "km_per_h") => v / 3.6,
        (Dimension::Speed, "km_per_s") => v * 1e3,
        (Dimension::Time, "s") => v,
        (Dimension::Time, "ms") => v * 1e-3,
        _ => return Err(Error::Config(format!("`{text}`: `{unit}` is not a {dim} unit"))),
    };
    Ok(si)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    DrvIntensity,
    Pri,
    Speed,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::DrvIntensity => "drv_intensity",
            SweepParameter::Pri => "pri",
            SweepParameter::Speed => "speed",
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            SweepParameter::DrvIntensity => Dimension::Intensity,
            SweepParameter::Pri => Dimension::Time,
            SweepParameter::Speed => Dimension::Speed,
        }
    }

    /// SI unit label used in output headers.
    pub fn unit(&self) -> &'static str {
        match self {
            SweepParameter::DrvIntensity => "per_m2",
            SweepParameter::Pri => "s",
            SweepParameter::Speed => "m_per_s",
        }
    }

    pub fn apply(&self, net: &mut NetworkParams, value: f64) {
        match self {
            SweepParameter::DrvIntensity => net.drv_intensity = value,
            SweepParameter::Pri => net.pri = value,
            SweepParameter::Speed => net.speed = value,
        }
    }

    fn parse(name: &str) -> Result<Self> {
        match name {
            "drv_intensity" => Ok(SweepParameter::DrvIntensity),
            "pri" => Ok(SweepParameter::Pri),
            "speed" => Ok(SweepParameter::Speed),
            other => Err(Error::Config(format!(
                "unsupported sweep parameter `{other}` (expected drv_intensity, pri or speed)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scale: Scale,
    /// One curve per value of a second parameter.
    pub series: Option<Series>,
}

impl Sweep {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k + 1 == n {
                    return self.max;
                }
                let t = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCase {
    pub name: String,
    pub bs_path_loss_exponent: f64,
    pub drv_path_loss_exponent: f64,
    pub d_v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSettings {
    pub n_angles: usize,
    pub cases: Vec<CoverageCase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationSettings {
    pub replications: usize,
    pub periods_per_drv: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub network: NetworkParams,
    pub seed: u64,
    pub fidelity: Fidelity,
    pub simulation: SimulationSettings,
    pub coverage: CoverageSettings,
    pub sweeps: Vec<Sweep>,
    /// SHA-256 of the source text, hex.
    pub hash: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    fidelity: Option<String>,
    network: RawNetwork,
    simulation: Option<RawSimulation>,
    coverage: Option<RawCoverage>,
    #[serde(default)]
    sweeps: Vec<RawSweep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    bs_tx_power: String,
    bs_antenna_gain: String,
    bs_path_loss_exponent: f64,
    drv_tx_power: String,
    drv_antenna_gain: String,
    drv_path_loss_exponent: f64,
    wavelength: String,
    mean_rcs: String,
    clutter_rcs: String,
    bs_intensity: String,
    drv_intensity: String,
    speed: String,
    pause_mean: String,
    pri: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    replications: usize,
    periods_per_drv: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoverage {
    n_angles: usize,
    cases: Vec<RawCase>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    name: String,
    bs_path_loss_exponent: f64,
    drv_path_loss_exponent: f64,
    d_v: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    name: String,
    parameter: String,
    min: String,
    max: String,
    steps: usize,
    scale: String,
    series: Option<RawSeries>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    parameter: String,
    values: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn default_config() -> Self {
        Self::from_toml(DEFAULT_CONFIG).expect("built-in configuration is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let network = raw.network.convert()?;
        network.validate()?;

        let fidelity = match raw.fidelity {
            Some(f) => f.parse()?,
            None => Fidelity::AssumptionMatched,
        };
        let simulation = match raw.simulation {
            Some(s) => SimulationSettings {
                replications: s.replications,
                periods_per_drv: s.periods_per_drv,
            },
            None => SimulationSettings {
                replications: 2000,
                periods_per_drv: 10,
            },
        };
        if simulation.replications == 0 || simulation.periods_per_drv == 0 {
            return Err(Error::Config("simulation replications and periods_per_drv must be >= 1".into()));
        }
        let coverage = match raw.coverage {
            Some(c) => CoverageSettings {
                n_angles: c.n_angles,
                cases: c
                    .cases
                    .into_iter()
                    .map(|k| {
                        Ok(CoverageCase {
                            d_v: parse_quantity(&k.d_v, Dimension::Length)?,
                            name: k.name,
                            bs_path_loss_exponent: k.bs_path_loss_exponent,
                            drv_path_loss_exponent: k.drv_path_loss_exponent,
                        })
                    })
                    .collect::<Result<_>>()?,
            },
            None => CoverageSettings {
                n_angles: 720,
                cases: Vec::new(),
            },
        };
        for case in &coverage.cases {
            network
                .with_path_loss(case.bs_path_loss_exponent, case.drv_path_loss_exponent)
                .validate()
                .map_err(|e| Error::Config(format!("coverage case `{}`: {e}", case.name)))?;
            if !(case.d_v > 0.0) {
                return Err(Error::Config(format!("coverage case `{}`: d_v must be > 0", case.name)));
            }
        }
        let sweeps = raw.sweeps.into_iter().map(RawSweep::convert).collect::<Result<_>>()?;

        let hash = Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Ok(Self {
            network,
            seed: raw.seed.unwrap_or(42),
            fidelity,
            simulation,
            coverage,
            sweeps,
            hash,
        })
    }
}

impl RawNetwork {
    fn convert(&self) -> Result<NetworkParams> {
        use Dimension::*;
        let q = parse_quantity;
        Ok(NetworkParams {
            bs: RadioNodeParams {
                tx_power: q(&self.bs_tx_power, Power)?,
                antenna_gain: q(&self.bs_antenna_gain, Gain)?,
                path_loss_exponent: self.bs_path_loss_exponent,
            },
            drv: RadioNodeParams {
                tx_power: q(&self.drv_tx_power, Power)?,
                antenna_gain: q(&self.drv_antenna_gain, Gain)?,
                path_loss_exponent: self.drv_path_loss_exponent,
            },
            wavelength: q(&self.wavelength, Length)?,
            mean_rcs: q(&self.mean_rcs, Area)?,
            clutter_rcs: q(&self.clutter_rcs, Area)?,
            bs_intensity: q(&self.bs_intensity, Intensity)?,
            drv_intensity: q(&self.drv_intensity, Intensity)?,
            speed: q(&self.speed, Speed)?,
            pause_mean: q(&self.pause_mean, Time)?,
            pri: q(&self.pri, Time)?,
        })
    }
}

impl RawSweep {
    fn convert(self) -> Result<Sweep> {
        let parameter = SweepParameter::parse(&self.parameter)?;
        let dim = parameter.dimension();
        let min = parse_quantity(&self.min, dim)?;
        let max = parse_quantity(&self.max, dim)?;
        let scale = match self.scale.as_str() {
            "linear" => Scale::Linear,
            "log" => Scale::Log,
            other => return Err(Error::Config(format!("sweep `{}`: unknown scale `{other}`", self.name))),
        };
        if self.steps < 2 {
            return Err(Error::Config(format!("sweep `{}`: steps must be >= 2", self.name)));
        }
        if !(min < max) || (scale == Scale::Log && !(min > 0.0)) {
            return Err(Error::Config(format!("sweep `{}`: need 0 <= min < max (min > 0 on a log scale)", self.name)));
        }
        let series = match self.series {
            Some(s) => {
                let parameter = SweepParameter::parse(&s.parameter)?;
                if s.values.is_empty() {
                    return Err(Error::Config(format!("sweep `{}`: series needs values", self.name)));
                }
                let values = s
                    .values
                    .iter()
                    .map(|v| parse_quantity(v, parameter.dimension()))
                    .collect::<Result<_>>()?;
                Some(Series { parameter, values })
            }
            None => None,
        };
        if series.as_ref().is_some_and(|s| s.parameter == parameter) {
            return Err(Error::Config(format!("sweep `{}`: series must vary another parameter", self.name)));
        }
        Ok(Sweep {
            name: self.name,
            parameter,
            min,
            max,
            steps: self.steps,
            scale,
            series,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantities() {
        assert!((parse_quantity("46 dBm", Dimension::Power).unwrap() - 39.810_717_055_349_73).abs() < 1e-9);
        assert_eq!(parse_quantity("1 per_km2", Dimension::Intensity).unwrap(), 1e-6);
        assert_eq!(parse_quantity("1.4 m_per_s", Dimension::Speed).unwrap(), 1.4);
        assert_eq!(parse_quantity("0.5 km", Dimension::Length).unwrap(), 500.0);
        assert_eq!(parse_quantity("50 ms", Dimension::Time).unwrap(), 0.05);
        assert!(parse_quantity("46", Dimension::Power).is_err());
        assert!(parse_quantity("46 m", Dimension::Power).is_err());
        assert!(parse_quantity("x dBm", Dimension::Power).is_err());
    }

    #[test]
    fn default_config_matches_defaults() {
        let cfg = ExperimentConfig::default_config();
        let d = NetworkParams::defaults();
        let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-12;
        assert!(close(cfg.network.bs.tx_power, d.bs.tx_power));
        assert!(close(cfg.network.drv.antenna_gain, d.drv.antenna_gain));
        assert!(close(cfg.network.bs_intensity, d.bs_intensity));
        assert!(close(cfg.network.pri, d.pri));
        assert_eq!(cfg.coverage.cases.len(), 2);
        assert!(!cfg.sweeps.is_empty());
        assert_eq!(cfg.hash.len(), 64);
    }

    #[test]
    fn bare_numbers_rejected() {
        let text = DEFAULT_CONFIG.replace("speed = \"1.4 m_per_s\"", "speed = 1.4");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_sweep_parameter_rejected() {
        let text = DEFAULT_CONFIG.replacen("parameter = \"drv_intensity\"", "parameter = \"wavelength\"", 1);
        assert!(ExperimentConfig::from_toml(&text).is_err());
    }

    #[test]
    fn dominating_drv_rejected() {
        let text = DEFAULT_CONFIG.replace("drv_tx_power = \"30 dBm\"", "drv_tx_power = \"80 dBm\"");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(Error::ModelValidity(_))));
    }

    #[test]
    fn km_and_si_twins_agree() {
        let si = DEFAULT_CONFIG
            .replace("\"0.5 per_km2\"", "\"0.0000005 per_m2\"")
            .replace("\"1 per_km2\"", "\"0.000001 per_m2\"")
            .replace("\"500 m\"", "\"0.5 km\"");
        let a = ExperimentConfig::default_config();
        let b = ExperimentConfig::from_toml(&si).unwrap();
        assert!(((a.network.bs_intensity - b.network.bs_intensity) / a.network.bs_intensity).abs() < 1e-12);
        assert_eq!(a.coverage, b.coverage);
    }

    #[test]
    fn log_grid() {
        let s = Sweep {
            name: "x".into(),
            parameter: SweepParameter::DrvIntensity,
            min: 1e-7,
            max: 1e-5,
            steps: 3,
            scale: Scale::Log,
            series: None,
        };
        let g = s.grid();
        assert!(g[0] == 1e-7 && g[2] == 1e-5);
        assert!(((g[1] - 1e-6) / 1e-6).abs() < 1e-12);
    }
}
