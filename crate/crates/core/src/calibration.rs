//! Photon-number calibration from Johnson-Nyquist noise thermometry.
//!
//! A temperature-swept 50 Ω termination emits a calibrated noise power; the
//! measured spectral density vs temperature separates the chain gain from
//! the amplifier's added noise. With the gain known, the line attenuation
//! follows and generator power converts to intracavity photon number.

use crate::constants::{db_to_linear, dbm_to_watts, linear_to_db, Constants};
use crate::error::{Error, Result};

/// One point of the noise thermometry sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSweepPoint {
    pub temperature_k: f64,
    pub psd_w_per_hz: f64,
}

impl NoiseSweepPoint {
    pub fn new(temperature_k: f64, psd_w_per_hz: f64) -> Result<Self> {
        if !(temperature_k > 0.0) {
            return Err(Error::domain(format!(
                "temperature must be > 0 K, got {temperature_k}"
            )));
        }
        if !(psd_w_per_hz > 0.0) {
            return Err(Error::domain(format!(
                "power spectral density must be > 0, got {psd_w_per_hz}"
            )));
        }
        Ok(Self {
            temperature_k,
            psd_w_per_hz,
        })
    }
}

/// Calibrated amplification/attenuation chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCalibration {
    pub gain_db: f64,
    /// Added noise of the chain expressed as a temperature, S_amp/k_B.
    pub added_noise_kelvin: f64,
    /// Input-line attenuation between generator and resonator.
    pub attenuation_db: f64,
}

impl ChainCalibration {
    pub fn new(gain_db: f64, added_noise_kelvin: f64, attenuation_db: f64) -> Result<Self> {
        if !added_noise_kelvin.is_finite() || added_noise_kelvin < 0.0 {
            return Err(Error::domain(format!(
                "added noise must be >= 0 K, got {added_noise_kelvin}"
            )));
        }
        if !gain_db.is_finite() {
            return Err(Error::domain("gain must be finite"));
        }
        Ok(Self {
            gain_db,
            added_noise_kelvin,
            attenuation_db,
        })
    }

    pub fn gain_linear(&self) -> f64 {
        db_to_linear(self.gain_db)
    }
}

/// Bose occupancy 1/(e^x − 1), stable for both small and large arguments.
pub fn bose_occupancy(x: f64) -> f64 {
    x.exp_m1().recip()
}

/// Johnson-Nyquist noise model of the measured spectral density:
///
/// S[ω,T] = G (ħω_c · n̄(T) + S_amp),  n̄ = 1/(e^{ħω_c/k_B T} − 1)
pub fn johnson_nyquist_psd(temperature_k: f64, omega_c: f64, cal: &ChainCalibration) -> f64 {
    johnson_nyquist_psd_with(temperature_k, omega_c, cal, &Constants::default())
}

pub fn johnson_nyquist_psd_with(
    temperature_k: f64,
    omega_c: f64,
    cal: &ChainCalibration,
    consts: &Constants,
) -> f64 {
    let x = consts.hbar * omega_c / (consts.k_b * temperature_k);
    cal.gain_linear() * (consts.hbar * omega_c * bose_occupancy(x) + consts.k_b * cal.added_noise_kelvin)
}

/// Extract (G, S_amp) from a temperature sweep by linear least squares: the
/// model is linear in (G, G·S_amp) with basis ħω_c·n̄(T_i) and 1.
pub fn fit_chain(sweep: &[NoiseSweepPoint], omega_c: f64) -> Result<ChainCalibration> {
    fit_chain_with(sweep, omega_c, &Constants::default())
}

pub fn fit_chain_with(
    sweep: &[NoiseSweepPoint],
    omega_c: f64,
    consts: &Constants,
) -> Result<ChainCalibration> {
    let mut temps: Vec<f64> = sweep.iter().map(|p| p.temperature_k).collect();
    temps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    temps.dedup_by(|a, b| (*a - *b).abs() < f64::EPSILON * a.abs());
    if temps.len() < 2 {
        return Err(Error::fit(format!(
            "degenerate sweep: {} distinct temperature(s); need at least 2",
            temps.len()
        )));
    }

    let e = consts.hbar * omega_c;
    let (mut su, mut sy, mut suu, mut suy) = (0.0, 0.0, 0.0, 0.0);
    let n = sweep.len() as f64;
    for p in sweep {
        let u = e * bose_occupancy(e / (consts.k_b * p.temperature_k));
        let y = p.psd_w_per_hz;
        su += u;
        sy += y;
        suu += u * u;
        suy += u * y;
    }
    let det = n * suu - su * su;
    if det.abs() < f64::MIN_POSITIVE {
        return Err(Error::fit("sweep temperatures do not separate the model"));
    }
    let gain = (n * suy - su * sy) / det;
    let offset = (sy - gain * su) / n;
    if !(gain > 0.0) {
        return Err(Error::fit(format!(
            "fitted gain must be positive, got {gain:e}"
        )));
    }
    let s_amp = offset / gain;
    if s_amp < 0.0 {
        return Err(Error::fit(format!(
            "fitted added noise is negative ({s_amp:e} W/Hz)"
        )));
    }
    ChainCalibration::new(linear_to_db(gain), s_amp / consts.k_b, 0.0)
}

/// Intracavity photon number for a drive of photon flux |a_in|² detuned by
/// Δ from the cavity:
///
/// n̄ = 4 κ_c |a_in|² / (κ_tot² + 4Δ²)
pub fn intracavity_photons(
    input_flux: f64,
    kappa_c: f64,
    kappa_tot: f64,
    detuning: f64,
) -> f64 {
    4.0 * kappa_c * input_flux / (kappa_tot * kappa_tot + 4.0 * detuning * detuning)
}

/// Photon flux at the resonator input from the generator power and the line
/// attenuation: |a_in|² = P·10^(−A/10)/ħω_p.
pub fn generator_to_flux(power_dbm: f64, attenuation_db: f64, omega_p: f64) -> f64 {
    generator_to_flux_with(power_dbm, attenuation_db, omega_p, &Constants::default())
}

pub fn generator_to_flux_with(
    power_dbm: f64,
    attenuation_db: f64,
    omega_p: f64,
    consts: &Constants,
) -> f64 {
    dbm_to_watts(power_dbm - attenuation_db) / (consts.hbar * omega_p)
}
