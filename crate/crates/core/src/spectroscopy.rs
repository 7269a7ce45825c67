//! Complex transmission model and fit for a notch-coupled resonator.
//!
//! The line shape is the diameter-correction form: an impedance-mismatch
//! phase φ rotates the resonance circle to account for standing waves in
//! the coupling waveguide, and a smooth complex background absorbs cable
//! amplitude slope and electrical delay:
//!
//! ```text
//! T(f) = a (1 + α (f-f₀)/f₀) e^{i(θ₀ + θ₁ (f-f₀))}
//!        · [1 − (Γ_ext/cos φ) e^{iφ} / (Γ + 2i (f − f_c))]
//! ```
//!
//! Everything in this module works in ordinary frequency (Hz); the line
//! shape is homogeneous in frequency units, and Γ here is the full width at
//! half depth of |T|² (multiply by 2π for the angular energy decay rate).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lsq::{self, LmOptions};

/// A measured complex transmission trace. Frequencies strictly increasing,
/// at least 16 points for fitting.
#[derive(Debug, Clone)]
pub struct SpectrumTrace {
    freqs_hz: Vec<f64>,
    transmission: Vec<Complex64>,
    sigma: Option<Vec<f64>>,
}

impl SpectrumTrace {
    pub fn new(
        freqs_hz: Vec<f64>,
        transmission: Vec<Complex64>,
        sigma: Option<Vec<f64>>,
    ) -> Result<Self> {
        if freqs_hz.len() != transmission.len() {
            return Err(Error::domain(format!(
                "{} frequencies vs {} transmission points",
                freqs_hz.len(),
                transmission.len()
            )));
        }
        if let Some(s) = &sigma {
            if s.len() != freqs_hz.len() {
                return Err(Error::domain("sigma length mismatch"));
            }
            if s.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::domain("noise estimates must be positive"));
            }
        }
        if freqs_hz.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain(
                "probe frequencies must be strictly increasing",
            ));
        }
        Ok(Self {
            freqs_hz,
            transmission,
            sigma,
        })
    }

    pub fn len(&self) -> usize {
        self.freqs_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_hz.is_empty()
    }

    pub fn freqs_hz(&self) -> &[f64] {
        &self.freqs_hz
    }

    pub fn transmission(&self) -> &[Complex64] {
        &self.transmission
    }

    pub fn sigma(&self) -> Option<&[f64]> {
        self.sigma.as_deref()
    }
}

/// Smooth complex background of a trace, relative to a reference frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    pub amplitude: f64,
    /// Fractional amplitude slope per unit of (f − f_ref)/f_ref.
    pub amplitude_slope: f64,
    pub phase_offset: f64,
    /// Phase slope in rad/Hz; the negative of the electrical delay.
    pub phase_slope: f64,
}

impl Background {
    pub fn flat() -> Self {
        Self {
            amplitude: 1.0,
            amplitude_slope: 0.0,
            phase_offset: 0.0,
            phase_slope: 0.0,
        }
    }

    /// Electrical delay in seconds implied by the phase slope.
    pub fn electrical_delay(&self) -> f64 {
        -self.phase_slope / crate::constants::TWO_PI
    }

    pub fn eval(&self, f_hz: f64, f_ref_hz: f64) -> Complex64 {
        let df = f_hz - f_ref_hz;
        let amp = self.amplitude * (1.0 + self.amplitude_slope * df / f_ref_hz);
        Complex64::from_polar(amp, self.phase_offset + self.phase_slope * df)
    }
}

/// Fitted notch resonance. All rates in Hz: `gamma_total_hz` is the full
/// width at half depth of |T|², and Γ = Γ_i + Γ_ext holds by construction.
#[derive(Debug, Clone)]
pub struct ResonanceFit {
    pub omega_c_hz: f64,
    pub gamma_total_hz: f64,
    pub gamma_ext_hz: f64,
    pub gamma_i_hz: f64,
    pub coupling_phase: f64,
    pub background: Background,
    pub reference_freq_hz: f64,
    pub residual_norm: f64,
}

impl ResonanceFit {
    /// Ideal resonance with flat unit background, for building model traces.
    pub fn ideal(omega_c_hz: f64, gamma_total_hz: f64, gamma_ext_hz: f64) -> Self {
        Self {
            omega_c_hz,
            gamma_total_hz,
            gamma_ext_hz,
            gamma_i_hz: gamma_total_hz - gamma_ext_hz,
            coupling_phase: 0.0,
            background: Background::flat(),
            reference_freq_hz: omega_c_hz,
            residual_norm: 0.0,
        }
    }

    /// Diameter of the resonance circle traced by T/B in the complex plane.
    pub fn circle_diameter(&self) -> f64 {
        self.gamma_ext_hz / (self.gamma_total_hz * self.coupling_phase.cos())
    }
}

/// Evaluate the notch model at one probe frequency.
pub fn transmission_model(f_hz: f64, fit: &ResonanceFit) -> Complex64 {
    let background = fit.background.eval(f_hz, fit.reference_freq_hz);
    let phi = fit.coupling_phase;
    let num = Complex64::from_polar(fit.gamma_ext_hz / phi.cos(), phi);
    let den = Complex64::new(fit.gamma_total_hz, 2.0 * (f_hz - fit.omega_c_hz));
    background * (Complex64::new(1.0, 0.0) - num / den)
}

/// Generate a model trace on a frequency grid (test and report support).
pub fn model_trace(freqs_hz: &[f64], fit: &ResonanceFit) -> Vec<Complex64> {
    freqs_hz
        .iter()
        .map(|&f| transmission_model(f, fit))
        .collect()
}

const MIN_TRACE_LEN: usize = 16;
const MIN_SPAN_LINEWIDTHS: f64 = 5.0;

/// Fit the notch model to a trace by weighted complex least squares over
/// the stacked real and imaginary parts.
///
/// `gamma_ext_prior_hz` pins the external coupling instead of fitting it
/// (it is geometric, so a power sweep of one resonator shares it).
pub fn fit_resonance(
    trace: &SpectrumTrace,
    gamma_ext_prior_hz: Option<f64>,
) -> Result<ResonanceFit> {
    if trace.len() < MIN_TRACE_LEN {
        return Err(Error::fit(format!(
            "trace has {} points; need at least {MIN_TRACE_LEN}",
            trace.len()
        )));
    }
    let freqs = trace.freqs_hz();
    let data = trace.transmission();
    let n = freqs.len();
    let f_ref = freqs.iter().sum::<f64>() / n as f64;
    let span = freqs[n - 1] - freqs[0];

    // --- initial background from the trace edges ---
    let n_edge = (n / 10).max(3);
    let edge_idx: Vec<usize> = (0..n_edge).chain(n - n_edge..n).collect();
    let (amp0, amp_slope0) = linear_fit(
        edge_idx.iter().map(|&i| (freqs[i] - f_ref, data[i].norm())),
    );
    let unwrapped = unwrap_phases(data);
    let (theta0, theta1) = linear_fit(edge_idx.iter().map(|&i| (freqs[i] - f_ref, unwrapped[i])));
    if !(amp0 > 0.0) {
        return Err(Error::fit("trace amplitude collapsed at the edges"));
    }
    let bg_init = Background {
        amplitude: amp0,
        amplitude_slope: amp_slope0 * f_ref / amp0,
        phase_offset: theta0,
        phase_slope: theta1,
    };

    // --- initial resonance from the normalized dip ---
    let norm_mag: Vec<f64> = (0..n)
        .map(|i| (data[i] / bg_init.eval(freqs[i], f_ref)).norm())
        .collect();
    let (i_min, min_mag) = norm_mag
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, v)| (i, *v))
        .unwrap();
    let f_c0 = freqs[i_min];
    let dip_floor = min_mag.powi(2);
    let half_level = 0.5 * (1.0 + dip_floor);
    let mut lo = freqs[0];
    for i in (0..i_min).rev() {
        if norm_mag[i].powi(2) > half_level {
            lo = freqs[i];
            break;
        }
    }
    let mut hi = freqs[n - 1];
    for (i, m) in norm_mag.iter().enumerate().skip(i_min + 1) {
        if m.powi(2) > half_level {
            hi = freqs[i];
            break;
        }
    }
    let gamma0 = (hi - lo).max(span / n as f64);
    if span < MIN_SPAN_LINEWIDTHS * gamma0 {
        return Err(Error::fit(format!(
            "trace spans {:.2} linewidths; need at least {MIN_SPAN_LINEWIDTHS}",
            span / gamma0
        )));
    }
    let depth = (1.0 - min_mag).clamp(1e-3, 0.999);
    let gamma_ext0 = gamma_ext_prior_hz.unwrap_or(depth * gamma0);

    // --- parameter vector ---
    // [f_c, ln Γ, (ln Γ_ext), atan-coded φ, ln a, α, θ₀, θ₁]
    let fit_ext = gamma_ext_prior_hz.is_none();
    let mut x0 = vec![f_c0, gamma0.ln()];
    let mut scales = vec![gamma0, 1.0];
    if fit_ext {
        x0.push(gamma_ext0.max(1e-6 * gamma0).ln());
        scales.push(1.0);
    }
    x0.extend_from_slice(&[
        0.0, // phi knob
        amp0.ln(),
        bg_init.amplitude_slope,
        theta0,
        theta1,
    ]);
    scales.extend_from_slice(&[1.0, 1.0, 1.0, 1.0, 1.0 / span]);

    let weights: Vec<f64> = match trace.sigma() {
        Some(s) => s.iter().map(|v| 1.0 / v).collect(),
        None => vec![1.0; n],
    };

    let unpack = |p: &[f64]| -> ResonanceFit {
        let mut k = 2;
        let gamma_ext = if fit_ext {
            k += 1;
            p[2].exp()
        } else {
            gamma_ext_prior_hz.unwrap()
        };
        let gamma = p[1].exp();
        ResonanceFit {
            omega_c_hz: p[0],
            gamma_total_hz: gamma,
            gamma_ext_hz: gamma_ext,
            gamma_i_hz: gamma - gamma_ext,
            coupling_phase: p[k].atan(),
            background: Background {
                amplitude: p[k + 1].exp(),
                amplitude_slope: p[k + 2],
                phase_offset: p[k + 3],
                phase_slope: p[k + 4],
            },
            reference_freq_hz: f_ref,
            residual_norm: 0.0,
        }
    };

    let freqs_owned = freqs.to_vec();
    let data_owned = data.to_vec();
    let residual_fn = move |p: &[f64], out: &mut Vec<f64>| {
        let fit = unpack(p);
        out.clear();
        for ((f, d), w) in freqs_owned.iter().zip(&data_owned).zip(&weights) {
            let diff = transmission_model(*f, &fit) - d;
            out.push(diff.re * w);
            out.push(diff.im * w);
        }
    };

    let report = lsq::levenberg_marquardt(
        &residual_fn,
        &x0,
        &scales,
        &LmOptions {
            max_iterations: 400,
            ..LmOptions::default()
        },
    )?;
    let mut fit = unpack(&report.params);
    fit.residual_norm = (2.0 * report.cost).sqrt();
    if fit.gamma_i_hz < 0.0 {
        return Err(Error::fit(format!(
            "extracted internal linewidth is negative ({:.3e} Hz); \
             gamma_ext {:.3e} exceeds gamma {:.3e}",
            fit.gamma_i_hz, fit.gamma_ext_hz, fit.gamma_total_hz
        )));
    }
    Ok(fit)
}

fn linear_fit(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut count = 0.0;
    for (x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        count += 1.0;
    }
    let det = count * sxx - sx * sx;
    if det.abs() < f64::MIN_POSITIVE {
        return (sy / count.max(1.0), 0.0);
    }
    let slope = (count * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / count;
    (intercept, slope)
}

fn unwrap_phases(data: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(data.len());
    let mut offset = 0.0;
    let mut prev = 0.0;
    for (i, z) in data.iter().enumerate() {
        let raw = z.arg();
        if i > 0 {
            let mut d = raw + offset - prev;
            while d > std::f64::consts::PI {
                offset -= crate::constants::TWO_PI;
                d -= crate::constants::TWO_PI;
            }
            while d < -std::f64::consts::PI {
                offset += crate::constants::TWO_PI;
                d += crate::constants::TWO_PI;
            }
        }
        prev = raw + offset;
        out.push(prev);
    }
    out
}
