//! Independent numerical verification of the closed-form bath response.
//!
//! Two oracles live here: a self-consistent steady-state solver for the
//! semi-classical cavity/TLS equations of motion, and an adaptive quadrature
//! of the bath convolution integral. Both are deliberately kept free of the
//! closed forms in [`crate::model`] so that agreement between the two routes
//! is meaningful.

pub mod quad;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ComplexShift;

/// A driven cavity coupled to a single TLS, with every rate in rad/s.
///
/// `kappa` is the bare cavity decay Γ₀ = Γ_ext + Γ∞ (the damping in the
/// absence of TLS); `drive_j` the coherent drive amplitude in the frame
/// rotating at the pump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MBSystem {
    pub omega_c: f64,
    pub omega_p: f64,
    pub omega_q: f64,
    pub g: f64,
    pub kappa: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub sigma_z_th: f64,
    pub drive_j: f64,
}

impl MBSystem {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(-1.0..=0.0).contains(&self.sigma_z_th) {
            return Err(Error::domain(format!(
                "sigma_z_th must lie in [-1, 0], got {}",
                self.sigma_z_th
            )));
        }
        Ok(())
    }

    fn pump_detuning(&self) -> f64 {
        self.omega_p - self.omega_c
    }
}

/// Stationary solution of the semi-classical equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MBSteadyState {
    pub alpha: Complex64,
    pub sigma0: Complex64,
    pub sigma_z0: f64,
}

impl MBSteadyState {
    /// Self-consistent cooperativity 4g²|α|²/Γ₁Γ₂ of this solution.
    pub fn cooperativity(&self, sys: &MBSystem) -> f64 {
        4.0 * sys.g * sys.g * self.alpha.norm_sqr() / (sys.gamma1 * sys.gamma2)
    }
}

const MB_MAX_ITER: usize = 20_000;
const MB_RELAXATION: f64 = 0.5;
const MB_RESIDUAL_TOL: f64 = 1e-11;

/// Solve the three coupled stationary equations
///
/// ```text
/// 0 = (-iΔ - κ/2) α + g σ₀ + J
/// 0 = (-i(ω_p - ω_q) - Γ₂) σ₀ + g α σ_z0
/// 0 = -2g (α* σ₀ + α σ₀*) - Γ₁ (σ_z0 - σ_z,th)
/// ```
///
/// by damped fixed-point iteration on |α|². The second and third equations
/// reduce σ₀ and σ_z0 to functions of |α|², leaving a scalar fixed point;
/// the bare-cavity amplitude seeds the iteration.
pub fn mb_steady_state(sys: &MBSystem) -> Result<MBSteadyState> {
    sys.validate()?;
    let delta = sys.pump_detuning();
    let dpq = sys.omega_p - sys.omega_q;
    let cavity_pole = Complex64::new(sys.kappa / 2.0, delta); // iΔ + κ/2
    let tls_pole = Complex64::new(sys.gamma2, dpq); // i(ω_p - ω_q) + Γ₂
    let drive = Complex64::new(sys.drive_j, 0.0);

    let sigma_z0_of = |alpha_sq: f64| -> f64 {
        let coop = 4.0 * sys.g * sys.g * alpha_sq / (sys.gamma1 * sys.gamma2);
        let g2sq = sys.gamma2 * sys.gamma2;
        sys.sigma_z_th * (1.0 - g2sq * coop / (dpq * dpq + g2sq * (1.0 + coop)))
    };
    let alpha_of = |sigma_z0: f64| -> Complex64 {
        // α(-iΔ - κ/2 + g² σz0 / tls_pole) = -J
        let denom = cavity_pole - Complex64::new(sys.g * sys.g * sigma_z0, 0.0) / tls_pole;
        drive / denom
    };

    let mut alpha_sq = (drive / cavity_pole).norm_sqr();
    let mut converged = false;
    for _ in 0..MB_MAX_ITER {
        let sz = sigma_z0_of(alpha_sq);
        let next = alpha_of(sz).norm_sqr();
        let step = next - alpha_sq;
        alpha_sq += MB_RELAXATION * step;
        if step.abs() <= 1e-15 * alpha_sq.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }

    let sigma_z0 = sigma_z0_of(alpha_sq);
    let alpha = alpha_of(sigma_z0);
    let sigma0 = sys.g * alpha * sigma_z0 / tls_pole;
    let state = MBSteadyState {
        alpha,
        sigma0,
        sigma_z0,
    };

    let residual = mb_residual(sys, &state);
    if !converged && residual > MB_RESIDUAL_TOL {
        return Err(Error::Convergence {
            context: "Maxwell-Bloch fixed point".into(),
            residual,
        });
    }
    if residual > MB_RESIDUAL_TOL {
        return Err(Error::Convergence {
            context: "Maxwell-Bloch residual check".into(),
            residual,
        });
    }
    Ok(state)
}

/// Relative norm of the three stationary equations at `state`.
pub fn mb_residual(sys: &MBSystem, state: &MBSteadyState) -> f64 {
    let delta = sys.pump_detuning();
    let dpq = sys.omega_p - sys.omega_q;

    let r1 = Complex64::new(-sys.kappa / 2.0, -delta) * state.alpha
        + sys.g * state.sigma0
        + sys.drive_j;
    let s1 = (sys.kappa / 2.0 * state.alpha.norm())
        .max(sys.g * state.sigma0.norm())
        .max(sys.drive_j.abs())
        .max(f64::MIN_POSITIVE);

    let r2 = Complex64::new(-sys.gamma2, -dpq) * state.sigma0
        + sys.g * state.alpha * state.sigma_z0;
    let s2 = (sys.gamma2 * state.sigma0.norm())
        .max(sys.g * state.alpha.norm() * state.sigma_z0.abs())
        .max(f64::MIN_POSITIVE);

    let r3 = -4.0 * sys.g * (state.alpha.conj() * state.sigma0).re
        - sys.gamma1 * (state.sigma_z0 - sys.sigma_z_th);
    let s3 = (sys.gamma1 * state.sigma_z0.abs().max(sys.sigma_z_th.abs()))
        .max(4.0 * sys.g * (state.alpha.conj() * state.sigma0).norm())
        .max(f64::MIN_POSITIVE);

    (r1.norm() / s1).max(r2.norm() / s2).max(r3.abs() / s3)
}

/// Complex cavity frequency pull obtained by adiabatic elimination of the
/// TLS dynamics around the steady state:
///
/// δω = g² σ_z0 / ((ω_q − ω_c) + iΓ₂)
pub fn mb_frequency_pull(sys: &MBSystem, state: &MBSteadyState) -> ComplexShift {
    let num = Complex64::new(sys.g * sys.g * state.sigma_z0, 0.0);
    let den = Complex64::new(sys.omega_q - sys.omega_c, sys.gamma2);
    ComplexShift::from_complex(num / den)
}

/// Window safety factor for the bath integral, in units of
/// Γ₂·max(1, √(1+𝒞)).
const WINDOW_FACTOR: f64 = 1e4;
/// Absolute quadrature tolerance in units of the zero-power damping P₀g²|σz|.
const QUAD_TOL_FACTOR: f64 = 1e-12;
const QUAD_MAX_SEGMENTS: usize = 40_000;

/// Direct quadrature of the bath convolution integral,
///
/// δω_c = ∫ dω_q (P₀/2π) g² σ_z(ω_q) / (ω_q − ω_c + iΓ₂),
///
/// with σ_z(ω_q) the saturation law at cooperativity `coop` and pump ω_p.
/// The window spans ±W around ω_c with W = 10⁴·Γ₂·max(1, √(1+𝒞), |δ|/100);
/// outside it the saturation dip has died off and the remaining
/// constant-times-Lorentzian tail of the unsaturated bath is added in closed
/// form. The neglected saturated tail is O(W⁻³) after odd-part cancellation
/// on the symmetric window.
pub fn numeric_bath_integral(
    bath: &crate::model::BathParams,
    omega_p: f64,
    omega_c: f64,
    coop: f64,
) -> Result<ComplexShift> {
    if !(coop >= 0.0) || !coop.is_finite() {
        return Err(Error::domain(format!(
            "cooperativity must be >= 0, got {coop}"
        )));
    }
    let p0 = bath.p0();
    let g = bath.g();
    let gamma2 = bath.gamma2();
    let sz_th = bath.sigma_z_th();
    let scale = p0 * g * g * sz_th.abs();
    if scale == 0.0 {
        return Ok(ComplexShift::new(0.0, 0.0));
    }

    let delta = (omega_p - omega_c) / gamma2;
    let half_window = gamma2
        * (WINDOW_FACTOR * (1.0 + coop).sqrt())
            .max(WINDOW_FACTOR)
            .max(100.0 * delta.abs());
    let (a, b) = (omega_c - half_window, omega_c + half_window);

    let prefactor = p0 * g * g / crate::constants::TWO_PI;
    let g2sq = gamma2 * gamma2;
    let integrand = move |omega_q: f64| -> Complex64 {
        let dq = omega_q - omega_p;
        let sz = sz_th * (1.0 - g2sq * coop / (dq * dq + g2sq * (1.0 + coop)));
        Complex64::new(prefactor * sz, 0.0) / Complex64::new(omega_q - omega_c, gamma2)
    };

    let breaks = [omega_p, omega_c, omega_p - gamma2, omega_p + gamma2];
    let tol = QUAD_TOL_FACTOR * scale;
    let windowed = quad::integrate(integrand, a, b, &breaks, tol, QUAD_MAX_SEGMENTS)?;

    // Unsaturated tail, exact: (P0/2π) g² σz_th ∫_{|x|>W} dx/(x + iΓ₂)
    //   = -i (P0/2π) g² σz_th (π − 2 atan(W/Γ₂)).
    let tail = Complex64::new(0.0, -prefactor * sz_th)
        * (std::f64::consts::PI - 2.0 * (half_window / gamma2).atan());

    Ok(ComplexShift::from_complex(windowed + tail))
}

/// Same integral with a caller-chosen window, used by the tail-independence
/// checks.
pub fn numeric_bath_integral_with_window(
    bath: &crate::model::BathParams,
    omega_p: f64,
    omega_c: f64,
    coop: f64,
    half_window_over_gamma2: f64,
) -> Result<ComplexShift> {
    let p0 = bath.p0();
    let g = bath.g();
    let gamma2 = bath.gamma2();
    let sz_th = bath.sigma_z_th();
    let scale = p0 * g * g * sz_th.abs();
    if scale == 0.0 {
        return Ok(ComplexShift::new(0.0, 0.0));
    }
    let half_window = gamma2 * half_window_over_gamma2;
    let (a, b) = (omega_c - half_window, omega_c + half_window);
    let prefactor = p0 * g * g / crate::constants::TWO_PI;
    let g2sq = gamma2 * gamma2;
    let integrand = move |omega_q: f64| -> Complex64 {
        let dq = omega_q - omega_p;
        let sz = sz_th * (1.0 - g2sq * coop / (dq * dq + g2sq * (1.0 + coop)));
        Complex64::new(prefactor * sz, 0.0) / Complex64::new(omega_q - omega_c, gamma2)
    };
    let breaks = [omega_p, omega_c, omega_p - gamma2, omega_p + gamma2];
    let windowed = quad::integrate(
        integrand,
        a,
        b,
        &breaks,
        QUAD_TOL_FACTOR * scale,
        QUAD_MAX_SEGMENTS,
    )?;
    let tail = Complex64::new(0.0, -prefactor * sz_th)
        * (std::f64::consts::PI - 2.0 * (half_window / gamma2).atan());
    Ok(ComplexShift::from_complex(windowed + tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{self, BathParams};
    use approx::assert_relative_eq;

    fn generic_system(drive_j: f64) -> MBSystem {
        MBSystem {
            omega_c: 0.0,
            omega_p: 12.0,
            omega_q: 3.5,
            g: 0.8,
            kappa: 2.0,
            gamma1: 2.4,
            gamma2: 1.2,
            sigma_z_th: -0.7,
            drive_j,
        }
    }

    #[test]
    fn undriven_fixed_point() {
        let state = mb_steady_state(&generic_system(0.0)).unwrap();
        assert_eq!(state.alpha, Complex64::new(0.0, 0.0));
        assert_eq!(state.sigma0, Complex64::new(0.0, 0.0));
        assert_eq!(state.sigma_z0, -0.7);
    }

    #[test]
    fn decoupled_system_reduces_to_bare_cavity() {
        let mut sys = generic_system(3.0);
        sys.g = 0.0;
        // validate() allows g = 0? g is not constrained by MBSystem, only
        // rates are; decoupled means the TLS keeps its thermal imbalance.
        let state = mb_steady_state(&sys).unwrap();
        let delta = sys.omega_p - sys.omega_c;
        let expected = Complex64::new(sys.drive_j, 0.0) / Complex64::new(sys.kappa / 2.0, delta);
        assert_relative_eq!(state.alpha.re, expected.re, max_relative = 1e-12);
        assert_relative_eq!(state.alpha.im, expected.im, max_relative = 1e-12);
        assert_eq!(state.sigma_z0, sys.sigma_z_th);
    }

    #[test]
    fn steady_state_satisfies_saturation_law() {
        // Strong drive, C ~ 10: sigma_z0 must match the closed-form law at
        // the self-consistent cooperativity.
        let sys = generic_system(40.0);
        let state = mb_steady_state(&sys).unwrap();
        let coop = state.cooperativity(&sys);
        assert!(coop > 1.0, "expected a strongly saturated system");
        let bath =
            BathParams::with_independent_rates(1.0, sys.g, sys.gamma1, sys.gamma2, sys.sigma_z_th)
                .unwrap();
        let expected =
            model::saturated_sigma_z(sys.omega_q, sys.omega_p, &bath, coop).unwrap();
        assert!(
            (state.sigma_z0 - expected).abs() < 1e-10,
            "sigma_z0 {} vs saturation law {}",
            state.sigma_z0,
            expected
        );
        assert!(mb_residual(&sys, &state) < 1e-11);
    }

    #[test]
    fn pull_matches_single_tls_shift() {
        let sys = generic_system(7.0);
        let state = mb_steady_state(&sys).unwrap();
        let pull = mb_frequency_pull(&sys, &state);
        let bath =
            BathParams::with_independent_rates(1.0, sys.g, sys.gamma1, sys.gamma2, sys.sigma_z_th)
                .unwrap();
        let reference =
            model::single_tls_shift(sys.omega_q, sys.omega_c, &bath, state.sigma_z0);
        assert_relative_eq!(pull.real_part, reference.real_part, max_relative = 1e-12);
        assert_relative_eq!(pull.imag_part, reference.imag_part, max_relative = 1e-12);
    }

    #[test]
    fn pull_is_purely_imaginary_on_resonance() {
        let mut sys = generic_system(5.0);
        sys.omega_q = sys.omega_c;
        let state = mb_steady_state(&sys).unwrap();
        let pull = mb_frequency_pull(&sys, &state);
        assert!(pull.real_part.abs() < 1e-15);
        assert!(pull.imag_part > 0.0);
    }

    #[test]
    fn saturated_tls_pulls_nothing() {
        let sys = generic_system(1.0);
        let state = MBSteadyState {
            alpha: Complex64::new(1.0, 0.0),
            sigma0: Complex64::new(0.0, 0.0),
            sigma_z0: 0.0,
        };
        let pull = mb_frequency_pull(&sys, &state);
        assert_eq!((pull.real_part, pull.imag_part), (0.0, 0.0));
    }

    #[test]
    fn fixed_point_converges_across_saturation_regimes() {
        for log_j in -3..=5 {
            let sys = generic_system(10f64.powi(log_j));
            let state = mb_steady_state(&sys).unwrap();
            assert!(mb_residual(&sys, &state) < 1e-11, "drive 1e{log_j}");
            assert!(state.sigma_z0 <= 0.0 && state.sigma_z0 >= sys.sigma_z_th);
        }
    }

    #[test]
    fn integral_unsaturated_limit_is_exact_hilbert_pair() {
        // coop = 0: shift 0, damping P0 g^2 |sigma_z_th|.
        let bath = BathParams::new(0.37, 1.3, 0.9, -0.81).unwrap();
        let z = numeric_bath_integral(&bath, 2.7, 0.0, 0.0).unwrap();
        assert!(z.shift().abs() < 1e-9 * bath.gamma_c0());
        assert_relative_eq!(
            z.damping(),
            bath.gamma_c0() * 0.81,
            max_relative = 1e-9
        );
    }

    #[test]
    fn integral_reproduces_hand_evaluated_closed_forms() {
        let bath = BathParams::new(1.0, 1.0, 1.0, -1.0).unwrap();
        // coop = 3, delta = 3: shift = P0 g^2 / 8.
        let z = numeric_bath_integral(&bath, 3.0, 0.0, 3.0).unwrap();
        assert_relative_eq!(z.shift(), bath.gamma_c0() / 8.0, max_relative = 1e-6);
        // coop = 3, delta = 0: damping = P0 g^2 / 2.
        let z = numeric_bath_integral(&bath, 0.0, 0.0, 3.0).unwrap();
        assert_relative_eq!(z.damping(), bath.gamma_c0() / 2.0, max_relative = 1e-6);
    }

    #[test]
    fn integral_matches_closed_form_on_coarse_grid() {
        // The dense grid lives in the acceptance suite; this is the smoke
        // version with physically scaled rates.
        let bath = BathParams::new(11e-6, 1.068e6, 8.80e6, -0.4982).unwrap();
        let mut worst: f64 = 0.0;
        for &coop in &[1e-3, 1.0, 30.0, 1e4] {
            for &delta in &[-20.0, -1.5, 0.0, 0.7, 45.0] {
                let omega_p = delta * bath.gamma2();
                let quad = numeric_bath_integral(&bath, omega_p, 0.0, coop).unwrap();
                let closed = model::bath_complex_shift(&bath, delta, coop);
                let rel = (quad.as_complex() - closed.as_complex()).norm()
                    / closed.as_complex().norm();
                worst = worst.max(rel);
            }
        }
        assert!(worst < 1e-6, "worst relative deviation {worst}");
    }

    #[test]
    fn integral_is_window_independent() {
        let bath = BathParams::new(1.0, 1.0, 1.0, -1.0).unwrap();
        let coop = 50.0f64;
        let omega_p = 4.0;
        let base = 1e4 * (1.0 + coop).sqrt();
        let z1 = numeric_bath_integral_with_window(&bath, omega_p, 0.0, coop, base).unwrap();
        let z2 =
            numeric_bath_integral_with_window(&bath, omega_p, 0.0, coop, 2.0 * base).unwrap();
        let rel = (z1.as_complex() - z2.as_complex()).norm() / z1.as_complex().norm();
        assert!(rel < 1e-8, "doubling the window moved the result by {rel}");
    }

    #[test]
    fn integral_rejects_negative_cooperativity() {
        let bath = BathParams::new(1.0, 1.0, 1.0, -1.0).unwrap();
        assert!(numeric_bath_integral(&bath, 0.0, 0.0, -1.0).is_err());
    }
}
