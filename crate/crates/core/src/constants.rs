//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Everything inside the library runs in SI with *angular* frequencies
//! (rad/s). Ordinary frequencies (Hz) appear only at I/O boundaries; the
//! helpers here are the single place where the 2π bookkeeping happens.

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity (F/m).
pub const EPS_0: f64 = 8.854_187_8128e-12;
/// Vacuum permeability (H/m).
pub const MU_0: f64 = 1.256_637_062_12e-6;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Physical constants bundle, overridable at the CLI boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub k_b: f64,
    pub eps_0: f64,
    pub mu_0: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            k_b: K_B,
            eps_0: EPS_0,
            mu_0: MU_0,
        }
    }
}

/// Ordinary frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn hz_to_angular(f_hz: f64) -> f64 {
    TWO_PI * f_hz
}

/// Angular frequency (rad/s) to ordinary frequency (Hz).
#[inline]
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / TWO_PI
}

/// Power dB to linear power ratio.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
#[inline]
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// dBm to watts.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}
