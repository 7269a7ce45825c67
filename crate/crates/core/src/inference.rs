//! Extraction of TLS bath parameters from a pump sweep.
//!
//! The dataset is the measured frequency shift and internal damping of the
//! resonator over a grid of pump photon numbers and detunings. The model
//! predicts both observables from five parameters (P₀, g, Γ₂, Γ∞, ω_c) with
//! Γ₁ = 2Γ₂ tied; a damped Gauss-Newton fit in log-domain extracts them and
//! bootstrap resampling quantifies the uncertainty.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constants::{angular_to_hz, hz_to_angular, TWO_PI};
use crate::error::{Error, Result};
use crate::lsq::{self, LmOptions};
use crate::model::{self, BathParams};

/// One measured point of the pump sweep. Detuning and shift are relative to
/// the dataset's reference frequency; all I/O quantities in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n_photons: f64,
    pub detuning_hz: f64,
    pub shift_hz: f64,
    pub gamma_i_hz: f64,
    pub sigma_shift_hz: Option<f64>,
    pub sigma_gamma_hz: Option<f64>,
}

/// A pump-sweep dataset. `omega_c_ref_hz` anchors the detunings: the pump
/// frequency of point i is ω_ref + detuning_i, and the measured shift is
/// (resonance − ω_ref). The fitted natural frequency ω_c floats near the
/// reference.
#[derive(Debug, Clone)]
pub struct SweepDataset {
    pub points: Vec<SweepPoint>,
    pub omega_c_ref_hz: f64,
}

impl SweepDataset {
    pub fn new(points: Vec<SweepPoint>, omega_c_ref_hz: f64) -> Result<Self> {
        if points.iter().any(|p| !(p.n_photons >= 0.0)) {
            return Err(Error::domain("photon numbers must be >= 0"));
        }
        if !(omega_c_ref_hz > 0.0) {
            return Err(Error::domain("reference frequency must be > 0"));
        }
        Ok(Self {
            points,
            omega_c_ref_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn has_full_uncertainties(&self) -> bool {
        self.points
            .iter()
            .all(|p| p.sigma_shift_hz.is_some() && p.sigma_gamma_hz.is_some())
    }
}

/// The five free parameters of the bath model, in internal angular units
/// (P₀ per rad/s, rates and ω_c in rad/s). Γ₁ is derived as 2Γ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsFitParams {
    pub p0: f64,
    pub g: f64,
    pub gamma2: f64,
    pub gamma_inf: f64,
    pub omega_c: f64,
}

impl TlsFitParams {
    pub fn new(p0: f64, g: f64, gamma2: f64, gamma_inf: f64, omega_c: f64) -> Result<Self> {
        for (name, v) in [
            ("p0", p0),
            ("g", g),
            ("gamma2", gamma2),
            ("gamma_inf", gamma_inf),
            ("omega_c", omega_c),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self {
            p0,
            g,
            gamma2,
            gamma_inf,
            omega_c,
        })
    }

    pub fn gamma1(&self) -> f64 {
        2.0 * self.gamma2
    }

    fn as_array(&self) -> [f64; 5] {
        [self.p0, self.g, self.gamma2, self.gamma_inf, self.omega_c]
    }
}

/// Derived quantities: zero-power TLS damping Γ_c⁰ = P₀g² (rad/s) and the
/// effective number of interacting TLS, n_TLS = P₀Γ₂/2π.
pub fn derived_quantities(params: &TlsFitParams) -> (f64, f64) {
    (
        params.p0 * params.g * params.g,
        params.p0 * params.gamma2 / TWO_PI,
    )
}

/// Model prediction for one sweep condition: (shift_hz, gamma_i_hz), both
/// relative to the dataset's reference frequency convention.
pub fn predict(
    n_photons: f64,
    detuning_hz: f64,
    params: &TlsFitParams,
    sigma_z_th: f64,
    omega_c_ref_hz: f64,
) -> (f64, f64) {
    let bath = BathParams::unchecked(
        params.p0,
        params.g,
        params.gamma1(),
        params.gamma2,
        sigma_z_th,
    );
    let coop = 4.0 * n_photons * params.g * params.g / (params.gamma1() * params.gamma2);
    let omega_ref = hz_to_angular(omega_c_ref_hz);
    let omega_p = omega_ref + hz_to_angular(detuning_hz);
    let delta = (omega_p - params.omega_c) / params.gamma2;

    let shift = model::bath_frequency_shift(&bath, delta, coop);
    let damping = model::bath_damping(&bath, delta, coop);
    (
        angular_to_hz(shift + (params.omega_c - omega_ref)),
        angular_to_hz(damping + params.gamma_inf),
    )
}

/// Outcome of a single fit.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub params: TlsFitParams,
    pub residual_norm: f64,
    pub iterations: usize,
    /// Set when the dataset cannot separate the parameters (single detuning
    /// sign or fewer than two distinct detunings).
    pub degenerate: bool,
}

/// Parameterization used by the optimizer. Log-domain is the default; the
/// linear variant exists to check that the reparameterization does not move
/// the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitParameterization {
    #[default]
    LogDomain,
    /// Linear parameters with a positivity barrier (steps into the
    /// forbidden region are rejected through non-finite residuals).
    LinearBarrier,
}

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    pub parameterization: FitParameterization,
}

const MIN_POINTS: usize = 6;

/// Robust per-channel scales when no uncertainties are given: 1.4826x the
/// median absolute deviation, falling back to the rms, then to 1.
fn mad_scale(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let mut v: Vec<f64> = values.clone().collect();
    if v.is_empty() {
        return 1.0;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = v[v.len() / 2];
    let mut dev: Vec<f64> = v.iter().map(|x| (x - median).abs()).collect();
    dev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mad = 1.4826 * dev[dev.len() / 2];
    if mad > 0.0 {
        return mad;
    }
    let rms = (values.clone().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
    if rms > 0.0 {
        rms
    } else {
        1.0
    }
}

fn channel_weights(dataset: &SweepDataset) -> (Vec<f64>, Vec<f64>) {
    if dataset.has_full_uncertainties() {
        (
            dataset
                .points
                .iter()
                .map(|p| 1.0 / p.sigma_shift_hz.unwrap())
                .collect(),
            dataset
                .points
                .iter()
                .map(|p| 1.0 / p.sigma_gamma_hz.unwrap())
                .collect(),
        )
    } else {
        let ws = 1.0 / mad_scale(dataset.points.iter().map(|p| p.shift_hz));
        let wg = 1.0 / mad_scale(dataset.points.iter().map(|p| p.gamma_i_hz));
        (
            vec![ws; dataset.len()],
            vec![wg; dataset.len()],
        )
    }
}

fn detuning_degeneracy(dataset: &SweepDataset) -> bool {
    let mut detunings: Vec<f64> = dataset.points.iter().map(|p| p.detuning_hz).collect();
    detunings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    detunings.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * a.abs().max(1.0));
    let distinct = detunings.len();
    let has_pos = detunings.iter().any(|d| *d > 0.0);
    let has_neg = detunings.iter().any(|d| *d < 0.0);
    distinct < 2 || !(has_pos && has_neg)
}

/// Coarse grid scan for a starting point. At fixed (g, γ₂) both observables
/// are linear in (A, δω, Γ∞) with A = P₀g²: the shift is A·s₁ + δω and the
/// damping A·s₂ + Γ∞, with shape functions s₁, s₂ fixed by the saturation
/// law. Solving that 3×3 system exactly on a log-grid over (g, γ₂) finds
/// the right basin even when the heuristics cannot.
fn grid_init(
    dataset: &SweepDataset,
    sigma_z_th: f64,
    w_shift: &[f64],
    w_gamma: &[f64],
) -> Option<TlsFitParams> {
    let pts = &dataset.points;
    let omega_ref = hz_to_angular(dataset.omega_c_ref_hz);
    let d_max = pts
        .iter()
        .map(|p| p.detuning_hz.abs())
        .fold(0.0f64, f64::max)
        .max(1e3);
    let n_pos: Vec<f64> = pts.iter().map(|p| p.n_photons).filter(|n| *n > 0.0).collect();
    if n_pos.is_empty() {
        return None;
    }
    let n_mid = (n_pos.iter().map(|n| n.ln()).sum::<f64>() / n_pos.len() as f64).exp();

    let mut best: Option<(f64, TlsFitParams)> = None;
    for i in 0..13 {
        // gamma2 spanning delta from ~30 down to ~0.03 at the largest
        // detuning
        let gamma2 = hz_to_angular(d_max) * 10f64.powf(-1.5 + 3.0 * i as f64 / 12.0);
        for j in 0..13 {
            // cooperativity at the midpoint photon number from 1e-3 to 1e3
            let coop_mid = 10f64.powf(-3.0 + 6.0 * j as f64 / 12.0);
            let g = gamma2 * (coop_mid / (2.0 * n_mid)).sqrt();
            // shape functions per point
            let mut m = nalgebra::Matrix3::<f64>::zeros();
            let mut rhs = nalgebra::Vector3::<f64>::zeros();
            for (k, p) in pts.iter().enumerate() {
                let coop = 2.0 * p.n_photons * (g / gamma2) * (g / gamma2);
                let delta = hz_to_angular(p.detuning_hz) / gamma2;
                let u = (1.0 + coop).sqrt();
                let denom = delta * delta + (1.0 + u) * (1.0 + u);
                let s1 = -(sigma_z_th / 2.0) * (coop / u) * (delta / denom);
                let s2 = -sigma_z_th * (1.0 - (coop / u) * (1.0 + u) / denom);
                // shift channel row: A*s1 + dwc = shift
                let ws = w_shift[k] * w_shift[k];
                m[(0, 0)] += ws * s1 * s1;
                m[(0, 1)] += ws * s1;
                m[(1, 0)] += ws * s1;
                m[(1, 1)] += ws;
                rhs[0] += ws * s1 * hz_to_angular(p.shift_hz);
                rhs[1] += ws * hz_to_angular(p.shift_hz);
                // damping channel row: A*s2 + gamma_inf = gamma
                let wg = w_gamma[k] * w_gamma[k];
                m[(0, 0)] += wg * s2 * s2;
                m[(0, 2)] += wg * s2;
                m[(2, 0)] += wg * s2;
                m[(2, 2)] += wg;
                rhs[0] += wg * s2 * hz_to_angular(p.gamma_i_hz);
                rhs[2] += wg * hz_to_angular(p.gamma_i_hz);
            }
            let Some(sol) = m.lu().solve(&rhs) else {
                continue;
            };
            let gamma_scale = pts
                .iter()
                .map(|p| p.gamma_i_hz.abs())
                .fold(0.0f64, f64::max)
                .max(1.0);
            let a = sol[0].max(1e-6 * hz_to_angular(gamma_scale));
            let dwc = sol[1];
            let gamma_inf = sol[2].max(1e-3 * hz_to_angular(gamma_scale));
            let cand = TlsFitParams {
                p0: a / (g * g),
                g,
                gamma2,
                gamma_inf,
                omega_c: omega_ref + dwc,
            };
            // weighted cost at the candidate
            let mut cost = 0.0;
            for (k, p) in pts.iter().enumerate() {
                let (shift, gamma) = predict(
                    p.n_photons,
                    p.detuning_hz,
                    &cand,
                    sigma_z_th,
                    dataset.omega_c_ref_hz,
                );
                let rs = (shift - p.shift_hz) * w_shift[k];
                let rg = (gamma - p.gamma_i_hz) * w_gamma[k];
                cost += rs * rs + rg * rg;
            }
            if cost.is_finite() && best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost, cand));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Heuristic starting point when the caller supplies none.
fn default_init(dataset: &SweepDataset, sigma_z_th: f64) -> TlsFitParams {
    let pts = &dataset.points;
    let gamma_min = pts
        .iter()
        .map(|p| p.gamma_i_hz)
        .fold(f64::INFINITY, f64::min)
        .max(1.0);
    // Lowest-power point approximates the unsaturated damping level.
    let low = pts
        .iter()
        .min_by(|a, b| a.n_photons.partial_cmp(&b.n_photons).unwrap())
        .unwrap();
    let gamma_c0 = hz_to_angular((low.gamma_i_hz - gamma_min).max(0.1 * gamma_min))
        / sigma_z_th.abs().max(1e-3);
    // Photon number where the damping has dropped halfway: cooperativity ~ 3.
    let half_level = gamma_min + 0.5 * (low.gamma_i_hz - gamma_min);
    let n_half = pts
        .iter()
        .filter(|p| p.gamma_i_hz <= half_level && p.n_photons > 0.0)
        .map(|p| p.n_photons)
        .fold(f64::INFINITY, f64::min);
    let n_half = if n_half.is_finite() {
        n_half
    } else {
        pts.iter().map(|p| p.n_photons).fold(0.0f64, f64::max).max(1.0)
    };
    // With C = 3 at n_half and an assumed n_TLS = P0 Gamma2/2pi = 4:
    // P0 g^2 = gamma_c0, P0 = 8 pi / Gamma2, g^2 = 1.5 Gamma2^2 / n_half.
    let gamma2 = (gamma_c0 * n_half / (12.0 * std::f64::consts::PI)).max(1.0);
    let p0 = 8.0 * std::f64::consts::PI / gamma2;
    let g = (1.5 * gamma2 * gamma2 / n_half).sqrt();
    let shift_low = hz_to_angular(low.shift_hz);
    let omega_c = hz_to_angular(dataset.omega_c_ref_hz) + shift_low;
    TlsFitParams {
        p0,
        g,
        gamma2,
        gamma_inf: hz_to_angular(gamma_min),
        omega_c,
    }
}

fn pack(params: &TlsFitParams, mode: FitParameterization, omega_ref: f64) -> Vec<f64> {
    match mode {
        FitParameterization::LogDomain => vec![
            params.p0.ln(),
            params.g.ln(),
            params.gamma2.ln(),
            params.gamma_inf.ln(),
            params.omega_c - omega_ref,
        ],
        FitParameterization::LinearBarrier => vec![
            params.p0,
            params.g,
            params.gamma2,
            params.gamma_inf,
            params.omega_c - omega_ref,
        ],
    }
}

fn unpack(x: &[f64], mode: FitParameterization, omega_ref: f64) -> Option<TlsFitParams> {
    let (p0, g, gamma2, gamma_inf) = match mode {
        FitParameterization::LogDomain => (x[0].exp(), x[1].exp(), x[2].exp(), x[3].exp()),
        FitParameterization::LinearBarrier => {
            if x[..4].iter().any(|v| !(*v > 0.0)) {
                return None;
            }
            (x[0], x[1], x[2], x[3])
        }
    };
    Some(TlsFitParams {
        p0,
        g,
        gamma2,
        gamma_inf,
        omega_c: omega_ref + x[4],
    })
}

fn fit_scales(mode: FitParameterization, init: &TlsFitParams) -> Vec<f64> {
    match mode {
        FitParameterization::LogDomain => vec![1.0, 1.0, 1.0, 1.0, hz_to_angular(1e3)],
        FitParameterization::LinearBarrier => vec![
            init.p0,
            init.g,
            init.gamma2,
            init.gamma_inf,
            hz_to_angular(1e3),
        ],
    }
}

/// Fit the five bath parameters to a sweep dataset.
pub fn fit(
    dataset: &SweepDataset,
    init: Option<&TlsFitParams>,
    sigma_z_th: f64,
) -> Result<FitOutcome> {
    fit_with_options(dataset, init, sigma_z_th, &FitOptions::default())
}

pub fn fit_with_options(
    dataset: &SweepDataset,
    init: Option<&TlsFitParams>,
    sigma_z_th: f64,
    opts: &FitOptions,
) -> Result<FitOutcome> {
    if dataset.len() < MIN_POINTS {
        return Err(Error::fit(format!(
            "{} sweep points; need at least {MIN_POINTS} for 5 parameters",
            dataset.len()
        )));
    }
    if !(-1.0..=0.0).contains(&sigma_z_th) {
        return Err(Error::domain(format!(
            "sigma_z_th must lie in [-1, 0], got {sigma_z_th}"
        )));
    }
    let degenerate = detuning_degeneracy(dataset);
    let mode = opts.parameterization;
    let omega_ref = hz_to_angular(dataset.omega_c_ref_hz);
    let (w_shift, w_gamma) = channel_weights(dataset);
    // Without a caller-supplied starting point, seed from the grid scan
    // (global, coarse) and the onset heuristic (local, sharp when the sweep
    // actually saturates) and keep the lowest-cost result.
    let starts: Vec<TlsFitParams> = match init {
        Some(p) => vec![*p],
        None => {
            let mut v = Vec::new();
            if let Some(p) = grid_init(dataset, sigma_z_th, &w_shift, &w_gamma) {
                v.push(p);
            }
            v.push(default_init(dataset, sigma_z_th));
            v
        }
    };
    let points = dataset.points.clone();
    let omega_c_ref_hz = dataset.omega_c_ref_hz;

    let residual_fn = move |x: &[f64], out: &mut Vec<f64>| {
        out.clear();
        let Some(params) = unpack(x, mode, omega_ref) else {
            // positivity barrier: poison the step
            out.extend(std::iter::repeat(f64::INFINITY).take(2 * points.len()));
            return;
        };
        for (i, p) in points.iter().enumerate() {
            let (shift, gamma) = predict(
                p.n_photons,
                p.detuning_hz,
                &params,
                sigma_z_th,
                omega_c_ref_hz,
            );
            out.push((shift - p.shift_hz) * w_shift[i]);
            out.push((gamma - p.gamma_i_hz) * w_gamma[i]);
        }
    };

    let lm_opts = LmOptions {
        max_iterations: 600,
        xtol: 1e-9,
        ftol: 1e-12,
        ..LmOptions::default()
    };
    let mut best: Option<lsq::LmReport> = None;
    let mut last_err = None;
    for start in &starts {
        match lsq::levenberg_marquardt(
            &residual_fn,
            &pack(start, mode, omega_ref),
            &fit_scales(mode, start),
            &lm_opts,
        ) {
            Ok(report) => {
                if best.as_ref().map_or(true, |b| report.cost < b.cost) {
                    best = Some(report);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let report = match best {
        Some(r) => r,
        None => return Err(last_err.unwrap_or_else(|| Error::fit("no start converged"))),
    };
    let params = unpack(&report.params, mode, omega_ref)
        .ok_or_else(|| Error::fit("optimizer left the physical region"))?;
    Ok(FitOutcome {
        params,
        residual_norm: (2.0 * report.cost).sqrt(),
        iterations: report.iterations,
        degenerate,
    })
}

/// Per-parameter bootstrap statistics.
#[derive(Debug, Clone, Copy)]
pub struct ParamStats {
    pub mean: f64,
    pub std: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

/// How the 95% interval is built from the bootstrap samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiMode {
    /// mean ± 1.96 σ.
    #[default]
    Normal,
    /// 2.5% and 97.5% empirical percentiles.
    Percentile,
}

/// Full inference result: point estimate plus bootstrap uncertainty.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub point_estimate: TlsFitParams,
    /// Stats in the order (p0, g, gamma2, gamma_inf, omega_c), internal
    /// angular units.
    pub p0: ParamStats,
    pub g: ParamStats,
    pub gamma2: ParamStats,
    pub gamma_inf: ParamStats,
    pub omega_c: ParamStats,
    /// Derived Γ_c⁰ = P₀g² (rad/s) with bootstrap stats.
    pub gamma_c0: ParamStats,
    /// Derived n_TLS = P₀Γ₂/2π with bootstrap stats.
    pub n_tls: ParamStats,
    pub residual_norm: f64,
    pub degenerate: bool,
    pub n_resamples: usize,
    pub n_failed: usize,
    /// More than 20% of resample fits failing marks the result unreliable.
    pub unreliable: bool,
    pub seed: u64,
    pub ci_mode: CiMode,
    /// Raw bootstrap samples (p0, g, gamma2, gamma_inf, omega_c) per
    /// resample, in resample order.
    pub samples: Vec<[f64; 5]>,
}

impl FitResult {
    pub fn stats(&self) -> [(&'static str, &ParamStats); 7] {
        [
            ("p0", &self.p0),
            ("g", &self.g),
            ("gamma2", &self.gamma2),
            ("gamma_inf", &self.gamma_inf),
            ("omega_c", &self.omega_c),
            ("gamma_c0", &self.gamma_c0),
            ("n_tls", &self.n_tls),
        ]
    }
}

fn stats_of(values: &[f64], mode: CiMode) -> ParamStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std = var.sqrt();
    match mode {
        CiMode::Normal => ParamStats {
            mean,
            std,
            ci95_low: mean - 1.96 * std,
            ci95_high: mean + 1.96 * std,
        },
        CiMode::Percentile => {
            let mut sorted = values.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q = |p: f64| {
                let pos = p * (sorted.len() - 1) as f64;
                let lo = pos.floor() as usize;
                let hi = pos.ceil() as usize;
                let t = pos - lo as f64;
                sorted[lo] * (1.0 - t) + sorted[hi] * t
            };
            ParamStats {
                mean,
                std,
                ci95_low: q(0.025),
                ci95_high: q(0.975),
            }
        }
    }
}

/// Bootstrap uncertainty for the sweep fit: `n_resamples` datasets of the
/// same size drawn with replacement, each refit from the full-data point
/// estimate. Deterministic for a given seed; resamples run in parallel but
/// are reduced in resample order.
pub fn bootstrap(
    dataset: &SweepDataset,
    n_resamples: usize,
    seed: u64,
    sigma_z_th: f64,
    init: Option<&TlsFitParams>,
) -> Result<FitResult> {
    bootstrap_with_ci(dataset, n_resamples, seed, sigma_z_th, init, CiMode::Normal)
}

pub fn bootstrap_with_ci(
    dataset: &SweepDataset,
    n_resamples: usize,
    seed: u64,
    sigma_z_th: f64,
    init: Option<&TlsFitParams>,
    ci_mode: CiMode,
) -> Result<FitResult> {
    if n_resamples == 0 {
        return Err(Error::domain("bootstrap needs at least one resample"));
    }
    let full = fit(dataset, init, sigma_z_th)?;
    let n_points = dataset.len();

    let results: Vec<Option<[f64; 5]>> = (0..n_resamples)
        .into_par_iter()
        .map(|k| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let points: Vec<SweepPoint> = (0..n_points)
                .map(|_| dataset.points[rng.random_range(0..n_points)])
                .collect();
            let resampled = SweepDataset {
                points,
                omega_c_ref_hz: dataset.omega_c_ref_hz,
            };
            fit(&resampled, Some(&full.params), sigma_z_th)
                .ok()
                .map(|o| o.params.as_array())
        })
        .collect();

    let samples: Vec<[f64; 5]> = results.iter().flatten().cloned().collect();
    let n_failed = n_resamples - samples.len();
    if samples.is_empty() {
        return Err(Error::fit("every bootstrap resample failed to fit"));
    }
    let column = |j: usize| samples.iter().map(|s| s[j]).collect::<Vec<f64>>();
    let derived: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s[0] * s[1] * s[1], s[0] * s[2] / TWO_PI))
        .collect();

    Ok(FitResult {
        point_estimate: full.params,
        p0: stats_of(&column(0), ci_mode),
        g: stats_of(&column(1), ci_mode),
        gamma2: stats_of(&column(2), ci_mode),
        gamma_inf: stats_of(&column(3), ci_mode),
        omega_c: stats_of(&column(4), ci_mode),
        gamma_c0: stats_of(&derived.iter().map(|d| d.0).collect::<Vec<_>>(), ci_mode),
        n_tls: stats_of(&derived.iter().map(|d| d.1).collect::<Vec<_>>(), ci_mode),
        residual_norm: full.residual_norm,
        degenerate: full.degenerate,
        n_resamples,
        n_failed,
        unreliable: (n_failed as f64) > 0.2 * (n_resamples as f64),
        seed,
        ci_mode,
        samples,
    })
}

/// Synthetic dataset generator used by the verification suites: evaluates
/// the model at the given conditions and adds relative Gaussian noise.
pub fn synthesize_dataset(
    params: &TlsFitParams,
    sigma_z_th: f64,
    omega_c_ref_hz: f64,
    photon_numbers: &[f64],
    detunings_hz: &[f64],
    relative_noise: f64,
    seed: u64,
) -> SweepDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(photon_numbers.len() * detunings_hz.len());
    for &det in detunings_hz {
        for &n in photon_numbers {
            let (shift, gamma) = predict(n, det, params, sigma_z_th, omega_c_ref_hz);
            let noise = |rng: &mut ChaCha8Rng| -> f64 {
                // Box-Muller keeps the dependency surface small here.
                let u1: f64 = rng.random::<f64>().max(1e-300);
                let u2: f64 = rng.random::<f64>();
                (-2.0 * u1.ln()).sqrt() * (TWO_PI * u2).cos()
            };
            points.push(SweepPoint {
                n_photons: n,
                detuning_hz: det,
                shift_hz: shift * (1.0 + relative_noise * noise(&mut rng)),
                gamma_i_hz: gamma * (1.0 + relative_noise * noise(&mut rng)),
                sigma_shift_hz: None,
                sigma_gamma_hz: None,
            });
        }
    }
    SweepDataset {
        points,
        omega_c_ref_hz,
    }
}

/// The reference parameter set used throughout the synthetic studies
/// (the SiO₂-on-silicon resonator row: g/2π = 170 kHz, P₀ = 11 MHz⁻¹ in
/// table convention, Γ₁/2π = 2.8 MHz, ω_c/2π = 7.521 GHz), with a 200 kHz
/// non-TLS loss floor.
pub fn reference_params() -> TlsFitParams {
    TlsFitParams {
        p0: 11e-6,
        g: hz_to_angular(170e3),
        gamma2: hz_to_angular(1.4e6),
        gamma_inf: hz_to_angular(200e3),
        omega_c: hz_to_angular(7.521e9),
    }
}
