//! Decibel conversions and unit constants.
//!
//! Everything inside the crate is strict SI (m, s, W, per m²). Logarithmic
//! and kilometre-scale quantities are converted once, at the configuration
//! boundary.

/// Square metres in one square kilometre.
pub const M2_PER_KM2: f64 = 1.0e6;

pub fn db_to_linear(value_db: f64) -> f64 {
    10f64.powf(value_db / 10.0)
}

pub fn linear_to_db(value: f64) -> f64 {
    10.0 * value.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(value_dbm: f64) -> f64 {
    db_to_linear(value_dbm) * 1.0e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts * 1.0e3)
}

/// Intensity given per km² to per m².
pub fn per_km2_to_per_m2(per_km2: f64) -> f64 {
    per_km2 / M2_PER_KM2
}
