//! Power unit conversions. Everything inside the crate is in Watts; dBm and
//! dB only appear at the configuration boundary.

/// `P[W] = 10^((dBm - 30) / 10)`.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Power ratio in dB to linear.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Amplitude bound from a power gain in dB (`a_max = 10^(dB/20)`).
pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}
