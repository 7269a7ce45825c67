//! Human- and machine-readable outputs of the inference pipeline.
//!
//! The table row follows the publication layout: Γ_c⁰/2π in kHz, g/2π in
//! kHz, P₀ in MHz⁻¹ (table convention: internal per-rad/s value × 10⁶),
//! Γ₁/2π in kHz, ω_c/2π in GHz, each with its 95% half-interval.

use std::io::Write;
use std::path::Path;

use crate::constants::{angular_to_hz, TWO_PI};
use crate::error::Result;
use crate::inference::{FitResult, ParamStats, SweepDataset, TlsFitParams};
use crate::io::{full_precision, OutputHeader};

/// Table-convention conversion for the spectral density: the published
/// "MHz⁻¹" values equal the per-rad/s density times 10⁶.
pub fn p0_to_table(p0_per_rad_s: f64) -> f64 {
    p0_per_rad_s * 1e6
}

pub fn p0_from_table(p0_table: f64) -> f64 {
    p0_table * 1e-6
}

/// One row of the results table, in publication units.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub gamma_c0_khz: (f64, f64),
    pub g_khz: (f64, f64),
    pub p0_mhz_inv: (f64, f64),
    pub gamma1_khz: (f64, f64),
    pub omega_c_ghz: (f64, f64),
}

impl TableRow {
    pub fn from_result(result: &FitResult) -> Self {
        let half = |s: &ParamStats| (s.ci95_high - s.ci95_low) / 2.0;
        let to_khz = |v: f64| angular_to_hz(v) / 1e3;
        let p = &result.point_estimate;
        TableRow {
            gamma_c0_khz: (
                to_khz(p.p0 * p.g * p.g),
                to_khz(half(&result.gamma_c0)),
            ),
            g_khz: (to_khz(p.g), to_khz(half(&result.g))),
            p0_mhz_inv: (p0_to_table(p.p0), p0_to_table(half(&result.p0))),
            gamma1_khz: (
                to_khz(2.0 * p.gamma2),
                to_khz(2.0 * half(&result.gamma2)),
            ),
            omega_c_ghz: (
                angular_to_hz(p.omega_c) / 1e9,
                angular_to_hz(half(&result.omega_c)) / 1e9,
            ),
        }
    }
}

/// Write the machine-readable table row CSV.
pub fn write_table_row(path: &Path, result: &FitResult, header: &OutputHeader) -> Result<()> {
    let row = TableRow::from_result(result);
    let mut out = std::fs::File::create(path)?;
    header.write_to(&mut out)?;
    writeln!(
        out,
        "gamma_c0_2pi_khz,gamma_c0_err_khz,g_2pi_khz,g_err_khz,p0_mhz_inv,p0_err_mhz_inv,gamma1_2pi_khz,gamma1_err_khz,omega_c_2pi_ghz,omega_c_err_ghz"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        full_precision(row.gamma_c0_khz.0),
        full_precision(row.gamma_c0_khz.1),
        full_precision(row.g_khz.0),
        full_precision(row.g_khz.1),
        full_precision(row.p0_mhz_inv.0),
        full_precision(row.p0_mhz_inv.1),
        full_precision(row.gamma1_khz.0),
        full_precision(row.gamma1_khz.1),
        full_precision(row.omega_c_ghz.0),
        full_precision(row.omega_c_ghz.1)
    )?;
    Ok(())
}

/// Write the human-readable fit report with per-point residuals.
pub fn write_report(
    path: &Path,
    result: &FitResult,
    dataset: &SweepDataset,
    sigma_z_th: f64,
    header: &OutputHeader,
) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    header.write_to(&mut out)?;
    let p = &result.point_estimate;
    let row = TableRow::from_result(result);

    writeln!(out, "[fit]")?;
    writeln!(out, "sigma_z_th = {}", full_precision(sigma_z_th))?;
    writeln!(out, "omega_c_ref_hz = {}", full_precision(dataset.omega_c_ref_hz))?;
    writeln!(out, "residual_norm = {}", full_precision(result.residual_norm))?;
    writeln!(out, "degenerate_dataset = {}", result.degenerate)?;
    writeln!(out, "n_points = {}", dataset.len())?;
    writeln!(out)?;
    writeln!(out, "[parameters]")?;
    writeln!(out, "p0_per_rad_s = {}", full_precision(p.p0))?;
    writeln!(out, "g_rad_s = {}", full_precision(p.g))?;
    writeln!(out, "gamma2_rad_s = {}", full_precision(p.gamma2))?;
    writeln!(out, "gamma_inf_rad_s = {}", full_precision(p.gamma_inf))?;
    writeln!(out, "omega_c_rad_s = {}", full_precision(p.omega_c))?;
    writeln!(out)?;
    writeln!(out, "[bootstrap]")?;
    writeln!(out, "n_resamples = {}", result.n_resamples)?;
    writeln!(out, "n_failed = {}", result.n_failed)?;
    writeln!(out, "unreliable = {}", result.unreliable)?;
    writeln!(out, "seed = {}", result.seed)?;
    writeln!(out, "ci_mode = {:?}", result.ci_mode)?;
    for (name, stats) in result.stats() {
        writeln!(
            out,
            "{name}_mean = {}",
            full_precision(stats.mean)
        )?;
        writeln!(out, "{name}_std = {}", full_precision(stats.std))?;
        writeln!(
            out,
            "{name}_ci95 = [{}, {}]",
            full_precision(stats.ci95_low),
            full_precision(stats.ci95_high)
        )?;
    }
    writeln!(out)?;
    writeln!(out, "[table_row]")?;
    writeln!(
        out,
        "gamma_c0_2pi_khz = {:.1} +- {:.1}",
        row.gamma_c0_khz.0, row.gamma_c0_khz.1
    )?;
    writeln!(out, "g_2pi_khz = {:.1} +- {:.1}", row.g_khz.0, row.g_khz.1)?;
    writeln!(
        out,
        "p0_mhz_inv = {:.2} +- {:.2}",
        row.p0_mhz_inv.0, row.p0_mhz_inv.1
    )?;
    writeln!(
        out,
        "gamma1_2pi_khz = {:.1} +- {:.1}",
        row.gamma1_khz.0, row.gamma1_khz.1
    )?;
    writeln!(
        out,
        "omega_c_2pi_ghz = {:.6} +- {:.6}",
        row.omega_c_ghz.0, row.omega_c_ghz.1
    )?;
    writeln!(out)?;
    writeln!(out, "[derived]")?;
    writeln!(
        out,
        "n_tls = {:.2} +- {:.2}",
        result.n_tls.mean,
        (result.n_tls.ci95_high - result.n_tls.ci95_low) / 2.0
    )?;
    writeln!(out)?;
    writeln!(out, "[residuals]")?;
    writeln!(out, "# n_photons detuning_hz shift_residual_hz gamma_residual_hz")?;
    for pt in &dataset.points {
        let (shift, gamma) = crate::inference::predict(
            pt.n_photons,
            pt.detuning_hz,
            p,
            sigma_z_th,
            dataset.omega_c_ref_hz,
        );
        writeln!(
            out,
            "residual = {} {} {} {}",
            full_precision(pt.n_photons),
            full_precision(pt.detuning_hz),
            full_precision(shift - pt.shift_hz),
            full_precision(gamma - pt.gamma_i_hz)
        )?;
    }
    Ok(())
}

/// Write model curves for one detuning: photon number vs predicted shift
/// and internal damping, at least 50 log-spaced points covering the data's
/// photon range.
pub fn write_curve(
    path: &Path,
    params: &TlsFitParams,
    sigma_z_th: f64,
    omega_c_ref_hz: f64,
    detuning_hz: f64,
    n_range: (f64, f64),
    n_points: usize,
    header: &OutputHeader,
) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    header.write_to(&mut out)?;
    writeln!(out, "n,shift_hz_model,gamma_i_hz_model")?;
    let (lo, hi) = n_range;
    let lo = lo.max(1e-6);
    let count = n_points.max(50);
    for i in 0..count {
        let n = lo * (hi / lo).powf(i as f64 / (count - 1) as f64);
        let (shift, gamma) =
            crate::inference::predict(n, detuning_hz, params, sigma_z_th, omega_c_ref_hz);
        writeln!(
            out,
            "{},{},{}",
            full_precision(n),
            full_precision(shift),
            full_precision(gamma)
        )?;
    }
    Ok(())
}

/// Model evaluation grid for the `model-eval` command: Eq.-level outputs on
/// an (n, Δ) grid.
pub fn write_model_eval(
    path: &Path,
    bath: &crate::model::BathParams,
    photon_to_coop: f64,
    detunings_hz: &[f64],
    n_range: (f64, f64),
    n_points: usize,
    header: &OutputHeader,
) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    header.write_to(&mut out)?;
    writeln!(out, "n,detuning_hz,cooperativity,shift_hz,damping_hz")?;
    let (lo, hi) = n_range;
    for &det in detunings_hz {
        let delta = TWO_PI * det / bath.gamma2();
        for i in 0..n_points {
            let n = lo * (hi / lo).powf(i as f64 / (n_points - 1) as f64);
            let coop = photon_to_coop * n;
            let shift = crate::model::bath_frequency_shift(bath, delta, coop);
            let damping = crate::model::bath_damping(bath, delta, coop);
            writeln!(
                out,
                "{},{},{},{},{}",
                full_precision(n),
                full_precision(det),
                full_precision(coop),
                full_precision(angular_to_hz(shift)),
                full_precision(angular_to_hz(damping))
            )?;
        }
    }
    Ok(())
}
