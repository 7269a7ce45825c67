//! Closed-form model of a resonator coupled to a detuned-pumped TLS bath.
//!
//! A strong pump at ω_p saturates two-level systems near its frequency; the
//! saturated population imbalance pulls the cavity frequency and reduces the
//! TLS-induced damping. All rates and frequencies here are angular (rad/s);
//! `delta` arguments are the dimensionless pump detuning (ω_p − ω_c)/Γ₂.

use num_complex::Complex64;

use crate::constants::{Constants, HBAR, K_B};
use crate::error::{Error, Result};

/// Thermal environment of the bath. Temperature is strictly positive; the
/// zero-temperature limit gets its own constructor so that σz_th = −1 holds
/// exactly rather than through a tanh overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnvironment {
    temperature: f64,
}

impl ThermalEnvironment {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be > 0 K, got {temperature}"
            )));
        }
        Ok(Self { temperature })
    }

    /// Zero-temperature environment: every TLS relaxes to its ground state.
    pub fn zero_temperature() -> Self {
        Self { temperature: 0.0 }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }
}

/// Equilibrium population imbalance ⟨σz⟩_th = −tanh(ħω_q / 2 k_B T).
///
/// Lies strictly in (−1, 0) for T > 0; exactly −1 for the zero-temperature
/// environment.
pub fn thermal_imbalance(omega_q: f64, env: &ThermalEnvironment) -> Result<f64> {
    thermal_imbalance_with(omega_q, env, &Constants::default())
}

/// Same as [`thermal_imbalance`] with explicit physical constants.
pub fn thermal_imbalance_with(
    omega_q: f64,
    env: &ThermalEnvironment,
    consts: &Constants,
) -> Result<f64> {
    if !(omega_q > 0.0) || !omega_q.is_finite() {
        return Err(Error::domain(format!(
            "TLS frequency must be > 0 rad/s, got {omega_q}"
        )));
    }
    if env.is_zero_temperature() {
        return Ok(-1.0);
    }
    let x = consts.hbar * omega_q / (2.0 * consts.k_b * env.temperature());
    Ok(-x.tanh())
}

/// TLS bath parameters entering the saturation law and the bath-integrated
/// frequency pull.
///
/// * `p0` — spectral density of TLS per unit angular frequency (s/rad),
/// * `g` — uniform TLS–cavity coupling rate (rad/s),
/// * `gamma1`, `gamma2` — TLS energy relaxation and dephasing rates (rad/s),
/// * `sigma_z_th` — thermal imbalance, in [−1, 0].
///
/// The default constructor ties Γ₁ = 2Γ₂ (pure radiative dephasing); the
/// independent-rate constructor is for solver studies and enforces the
/// physicality bound Γ₂ ≥ Γ₁/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    p0: f64,
    g: f64,
    gamma1: f64,
    gamma2: f64,
    sigma_z_th: f64,
}

impl BathParams {
    /// Standard constructor with the Γ₁ = 2Γ₂ tie.
    pub fn new(p0: f64, g: f64, gamma2: f64, sigma_z_th: f64) -> Result<Self> {
        Self::with_independent_rates(p0, g, 2.0 * gamma2, gamma2, sigma_z_th)
    }

    /// Bypass validation for internal hot paths whose inputs are positive
    /// by construction (log-domain optimizers).
    pub(crate) fn unchecked(p0: f64, g: f64, gamma1: f64, gamma2: f64, sigma_z_th: f64) -> Self {
        Self {
            p0,
            g,
            gamma1,
            gamma2,
            sigma_z_th,
        }
    }

    /// Expert constructor with independent Γ₁ and Γ₂.
    pub fn with_independent_rates(
        p0: f64,
        g: f64,
        gamma1: f64,
        gamma2: f64,
        sigma_z_th: f64,
    ) -> Result<Self> {
        for (name, v) in [("p0", p0), ("g", g), ("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if gamma2 < gamma1 / 2.0 {
            return Err(Error::domain(format!(
                "gamma2 = {gamma2} violates gamma2 >= gamma1/2 = {}",
                gamma1 / 2.0
            )));
        }
        if !(-1.0..=0.0).contains(&sigma_z_th) {
            return Err(Error::domain(format!(
                "sigma_z_th must lie in [-1, 0], got {sigma_z_th}"
            )));
        }
        Ok(Self {
            p0,
            g,
            gamma1,
            gamma2,
            sigma_z_th,
        })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }
    pub fn sigma_z_th(&self) -> f64 {
        self.sigma_z_th
    }

    /// Zero-temperature, zero-power TLS damping Γc⁰ = P₀g² (rad/s).
    pub fn gamma_c0(&self) -> f64 {
        self.p0 * self.g * self.g
    }
}

/// Pump drive condition: intracavity photon number and signed detuning
/// Δ = ω_p − ω_c (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpCondition {
    pub n_photons: f64,
    pub detuning: f64,
}

impl PumpCondition {
    pub fn new(n_photons: f64, detuning: f64) -> Result<Self> {
        if !(n_photons >= 0.0) || !n_photons.is_finite() {
            return Err(Error::domain(format!(
                "photon number must be >= 0, got {n_photons}"
            )));
        }
        Ok(Self {
            n_photons,
            detuning,
        })
    }
}

/// Complex cavity frequency pull δω. The real part is the frequency shift;
/// twice the imaginary part is the induced damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexShift {
    pub real_part: f64,
    pub imag_part: f64,
}

impl ComplexShift {
    pub fn new(real_part: f64, imag_part: f64) -> Self {
        Self {
            real_part,
            imag_part,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.real_part, self.imag_part)
    }

    /// Frequency shift Δω_c (rad/s).
    pub fn shift(&self) -> f64 {
        self.real_part
    }

    /// Damping rate Γ_c = 2 Im δω (rad/s); non-negative whenever σz ≤ 0.
    pub fn damping(&self) -> f64 {
        2.0 * self.imag_part
    }
}

/// Pump cooperativity 𝒞 = 4 n g² / (Γ₁ Γ₂).
pub fn cooperativity(pump: &PumpCondition, bath: &BathParams) -> f64 {
    4.0 * pump.n_photons * bath.g * bath.g / (bath.gamma1 * bath.gamma2)
}

/// Saturated population imbalance of a TLS at ω_q under a pump at ω_p:
///
/// ⟨σz⟩ = ⟨σz⟩_th · (1 − Γ₂²𝒞 / ((ω_q − ω_p)² + Γ₂²(1 + 𝒞)))
pub fn saturated_sigma_z(
    omega_q: f64,
    omega_p: f64,
    bath: &BathParams,
    coop: f64,
) -> Result<f64> {
    if !(coop >= 0.0) || !coop.is_finite() {
        return Err(Error::domain(format!(
            "cooperativity must be >= 0, got {coop}"
        )));
    }
    let g2sq = bath.gamma2 * bath.gamma2;
    let dq = omega_q - omega_p;
    Ok(bath.sigma_z_th * (1.0 - g2sq * coop / (dq * dq + g2sq * (1.0 + coop))))
}

/// Complex frequency pull of the cavity by a single TLS at ω_q:
///
/// δω = g² ⟨σz⟩ / (ω_q − ω_c + iΓ₂)
pub fn single_tls_shift(
    omega_q: f64,
    omega_c: f64,
    bath: &BathParams,
    sigma_z: f64,
) -> ComplexShift {
    let num = Complex64::new(bath.g * bath.g * sigma_z, 0.0);
    let den = Complex64::new(omega_q - omega_c, bath.gamma2);
    ComplexShift::from_complex(num / den)
}

/// Bath-integrated cavity frequency shift (rad/s):
///
/// Δω_c = −(P₀g²⟨σz⟩_th/2) · (𝒞/√(1+𝒞)) · δ/(δ² + (1+√(1+𝒞))²)
///
/// Odd in `delta`; vanishes at δ = 0 and in both the 𝒞 → 0 and 𝒞 → ∞
/// limits.
pub fn bath_frequency_shift(bath: &BathParams, delta: f64, coop: f64) -> f64 {
    let u = (1.0 + coop).sqrt();
    let denom = delta * delta + (1.0 + u) * (1.0 + u);
    -(bath.gamma_c0() * bath.sigma_z_th / 2.0) * (coop / u) * (delta / denom)
}

/// Bath-integrated TLS damping of the cavity (rad/s):
///
/// Γ_c = −P₀g²⟨σz⟩_th · [1 − (𝒞/√(1+𝒞)) · (1+√(1+𝒞))/(δ² + (1+√(1+𝒞))²)]
///
/// The bracket lies in [0, 1]; at δ = 0 it reduces to 1/√(1+𝒞).
pub fn bath_damping(bath: &BathParams, delta: f64, coop: f64) -> f64 {
    -bath.gamma_c0() * bath.sigma_z_th * damping_bracket(delta, coop)
}

/// The saturation bracket of the damping law, separated out because several
/// invariants are statements about it alone.
pub fn damping_bracket(delta: f64, coop: f64) -> f64 {
    let u = (1.0 + coop).sqrt();
    let denom = delta * delta + (1.0 + u) * (1.0 + u);
    1.0 - (coop / u) * (1.0 + u) / denom
}

/// Both halves of the bath response as one complex number,
/// δω_c = Δω_c + i·Γ_c/2. This is the closed form of the bath convolution
/// integral and the reference the numerical oracle is checked against.
pub fn bath_complex_shift(bath: &BathParams, delta: f64, coop: f64) -> ComplexShift {
    ComplexShift::new(
        bath_frequency_shift(bath, delta, coop),
        0.5 * bath_damping(bath, delta, coop),
    )
}

/// Convenience wrapper taking the dimensional pump detuning Δ = ω_p − ω_c
/// (rad/s) and normalizing by Γ₂ internally.
pub fn bath_complex_shift_detuned(bath: &BathParams, detuning: f64, coop: f64) -> ComplexShift {
    bath_complex_shift(bath, detuning / bath.gamma2, coop)
}

/// Ground-state population p_g(ω_q) = (1 − ⟨σz(ω_q)⟩)/2 on a grid of TLS
/// detunings ω_q − ω_c. The depletion dip is centered on the pump with
/// half-width Γ₂√(1+𝒞).
pub fn ground_state_population(
    detuning_grid: &[f64],
    omega_p: f64,
    omega_c: f64,
    bath: &BathParams,
    coop: f64,
) -> Result<Vec<f64>> {
    detuning_grid
        .iter()
        .map(|&d| {
            let omega_q = omega_c + d;
            saturated_sigma_z(omega_q, omega_p, bath, coop).map(|sz| (1.0 - sz) / 2.0)
        })
        .collect()
}

/// Convenience composite: thermal imbalance at the cavity frequency. The
/// imbalance is evaluated once per experiment, at ω_c, and then treated as a
/// constant of the bath.
pub fn sigma_z_th_at(omega_c: f64, temperature_k: f64) -> Result<f64> {
    let env = if temperature_k == 0.0 {
        ThermalEnvironment::zero_temperature()
    } else {
        ThermalEnvironment::new(temperature_k)?
    };
    thermal_imbalance(omega_c, &env)
}

/// ħω/k_BT in explicit form, used by tests pinning the paper's operating
/// point.
pub fn boltzmann_ratio(omega: f64, temperature_k: f64) -> f64 {
    HBAR * omega / (K_B * temperature_k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::TWO_PI;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn test_bath() -> BathParams {
        BathParams::new(1.0, 1.0, 1.0, -1.0).unwrap()
    }

    #[test]
    fn thermal_imbalance_zero_temperature_is_exactly_minus_one() {
        let env = ThermalEnvironment::zero_temperature();
        assert_eq!(thermal_imbalance(TWO_PI * 1e9, &env).unwrap(), -1.0);
        assert_eq!(thermal_imbalance(1e-3, &env).unwrap(), -1.0);
    }

    #[test]
    fn thermal_imbalance_low_frequency_limit() {
        let env = ThermalEnvironment::new(0.33).unwrap();
        let v = thermal_imbalance(1e-6, &env).unwrap();
        assert!(v.abs() < 1e-12, "tanh(~0) should vanish, got {v}");
    }

    #[test]
    fn thermal_imbalance_at_experiment_operating_point() {
        // 7.521 GHz at 330 mK evaluates to about -0.498 with CODATA
        // constants; the quoted experimental value is -0.52.
        let env = ThermalEnvironment::new(0.33).unwrap();
        let v = thermal_imbalance(TWO_PI * 7.521e9, &env).unwrap();
        assert_relative_eq!(v, -0.498, epsilon = 5e-3);
        assert!(
            (v - (-0.52)).abs() < 0.03,
            "operating point imbalance {v} strayed from -0.52 by more than 0.03"
        );
    }

    #[test]
    fn thermal_imbalance_rejects_nonpositive_frequency() {
        let env = ThermalEnvironment::new(0.33).unwrap();
        assert!(thermal_imbalance(0.0, &env).is_err());
        assert!(thermal_imbalance(-1.0, &env).is_err());
    }

    #[test]
    fn thermal_environment_rejects_nonpositive_temperature() {
        assert!(ThermalEnvironment::new(0.0).is_err());
        assert!(ThermalEnvironment::new(-1.0).is_err());
        assert!(ThermalEnvironment::new(f64::NAN).is_err());
    }

    #[test]
    fn cooperativity_vanishes_without_pump() {
        let bath = test_bath();
        let pump = PumpCondition::new(0.0, 0.0).unwrap();
        assert_eq!(cooperativity(&pump, &bath), 0.0);
    }

    #[test]
    fn cooperativity_identity_substitution() {
        // n = 1, g = 1, gamma1 = gamma2 = 1 gives exactly 4.
        let bath = BathParams::with_independent_rates(1.0, 1.0, 1.0, 1.0, -0.5).unwrap();
        let pump = PumpCondition::new(1.0, 0.0).unwrap();
        assert_eq!(cooperativity(&pump, &bath), 4.0);
    }

    #[test]
    fn cooperativity_at_table_row_values() {
        // g/2pi = 170 kHz, gamma1/2pi = 2.8 MHz, gamma2 = gamma1/2:
        // C = 4 n g^2/(gamma1 gamma2) = n * 0.0294898...
        let bath = BathParams::new(11e-6, TWO_PI * 170e3, TWO_PI * 1.4e6, -0.5).unwrap();
        let c1 = cooperativity(&PumpCondition::new(1.0, 0.0).unwrap(), &bath);
        assert_relative_eq!(c1, 0.029_489_795_918_367_346, max_relative = 1e-12);
        let c2 = cooperativity(&PumpCondition::new(2.0, 0.0).unwrap(), &bath);
        assert_relative_eq!(c2, 2.0 * c1, max_relative = 1e-14);
    }

    #[test]
    fn saturation_law_examples() {
        let bath = BathParams::new(1.0, 1.0, 1.0, -0.73).unwrap();
        // coop = 0: unsaturated bath.
        assert_eq!(
            saturated_sigma_z(5.0, 3.0, &bath, 0.0).unwrap(),
            bath.sigma_z_th()
        );
        // On resonance with coop = 1 the imbalance halves.
        assert_relative_eq!(
            saturated_sigma_z(3.0, 3.0, &bath, 1.0).unwrap(),
            bath.sigma_z_th() / 2.0,
            max_relative = 1e-15
        );
        // |wq - wp| = gamma2, coop = 3: factor 1 - 3/5.
        assert_relative_eq!(
            saturated_sigma_z(4.0, 3.0, &bath, 3.0).unwrap(),
            0.4 * bath.sigma_z_th(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn saturation_rejects_negative_cooperativity() {
        let bath = test_bath();
        assert!(saturated_sigma_z(1.0, 0.0, &bath, -0.1).is_err());
    }

    #[test]
    fn single_tls_shift_examples() {
        let bath = test_bath();
        // Saturated TLS contributes nothing.
        let z = single_tls_shift(2.0, 1.0, &bath, 0.0);
        assert_eq!((z.real_part, z.imag_part), (0.0, 0.0));
        // Resonant TLS gives a purely imaginary pull -i g^2 sz / gamma2.
        let z = single_tls_shift(1.0, 1.0, &bath, -0.6);
        assert!(z.real_part.abs() < 1e-15);
        assert_relative_eq!(z.imag_part, 0.6, max_relative = 1e-15);
        // wq - wc = gamma2 = g = 1, sz = -1: delta_omega = -(1 - i)/2.
        let z = single_tls_shift(2.0, 1.0, &bath, -1.0);
        assert_relative_eq!(z.real_part, -0.5, max_relative = 1e-15);
        assert_relative_eq!(z.imag_part, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn single_tls_shift_magnitude_bound() {
        let bath = BathParams::new(2.0, 1.7, 0.9, -0.8).unwrap();
        for i in 0..200 {
            let dq = -30.0 + 0.3 * i as f64;
            let z = single_tls_shift(dq, 0.0, &bath, bath.sigma_z_th());
            let bound = bath.g() * bath.g() * bath.sigma_z_th().abs() / bath.gamma2();
            assert!(z.as_complex().norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn bath_shift_hand_values() {
        let bath = test_bath();
        // delta = 0 is exactly zero for any cooperativity.
        assert_eq!(bath_frequency_shift(&bath, 0.0, 17.3), 0.0);
        // coop = 0 kills the shift.
        assert_eq!(bath_frequency_shift(&bath, 2.5, 0.0), 0.0);
        // coop = 3, delta = 3, sigma_z_th = -1: +P0 g^2 / 8.
        assert_relative_eq!(
            bath_frequency_shift(&bath, 3.0, 3.0),
            bath.gamma_c0() / 8.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn bath_damping_hand_values() {
        let bath = test_bath();
        // Zero power: full unsaturated damping P0 g^2 |sigma_z_th|.
        assert_eq!(bath_damping(&bath, 0.7, 0.0), bath.gamma_c0());
        // coop = 3, delta = 0: bracket = 1/2.
        assert_relative_eq!(
            bath_damping(&bath, 0.0, 3.0),
            bath.gamma_c0() / 2.0,
            max_relative = 1e-15
        );
        // Large cooperativity saturates the bath away.
        let residual = bath_damping(&bath, 1.0, 1e12) / bath.gamma_c0();
        assert!(residual < 2e-6, "damping should vanish, got {residual}");
    }

    #[test]
    fn ground_state_population_limits() {
        let bath = BathParams::new(1.0, 1.0, 1.0, -0.9).unwrap();
        // Unsaturated: uniform (1 - sigma_z_th)/2.
        let grid: Vec<f64> = (-50..=50).map(|k| k as f64 * 0.2).collect();
        let p = ground_state_population(&grid, 0.0, 0.0, &bath, 0.0).unwrap();
        for v in &p {
            assert_relative_eq!(*v, (1.0 - bath.sigma_z_th()) / 2.0, max_relative = 1e-15);
        }
        // Fully saturated at the pump: population -> 1/2.
        let p = ground_state_population(&[0.0], 0.0, 0.0, &bath, 1e14).unwrap();
        assert_relative_eq!(p[0], 0.5, epsilon = 1e-9);
        // Empty grid passes through as an empty output.
        assert!(ground_state_population(&[], 0.0, 0.0, &bath, 1.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn ground_state_dip_width_measured_numerically() {
        // The full width at half depth of the depletion dip is
        // 2 gamma2 sqrt(1 + C); locate the crossings on a fine grid.
        let bath = BathParams::new(1.0, 1.0, 1.0, -0.8).unwrap();
        let coop = 7.0f64;
        let expected_half_width = bath.gamma2() * (1.0 + coop).sqrt();
        let span = 8.0 * expected_half_width;
        let n = 400_001;
        let grid: Vec<f64> = (0..n)
            .map(|k| -span + 2.0 * span * k as f64 / (n - 1) as f64)
            .collect();
        let p = ground_state_population(&grid, 0.0, 0.0, &bath, coop).unwrap();
        let baseline = (1.0 - bath.sigma_z_th()) / 2.0;
        let depth = baseline - p.iter().cloned().fold(f64::INFINITY, f64::min);
        let half = baseline - depth / 2.0;
        let mut crossings = Vec::new();
        for i in 1..n {
            if (p[i - 1] > half) != (p[i] > half) {
                // linear interpolation of the crossing
                let t = (half - p[i - 1]) / (p[i] - p[i - 1]);
                crossings.push(grid[i - 1] + t * (grid[i] - grid[i - 1]));
            }
        }
        assert_eq!(crossings.len(), 2, "expected a single dip");
        let width = crossings[1] - crossings[0];
        assert_relative_eq!(width, 2.0 * expected_half_width, max_relative = 1e-6);
    }

    #[test]
    fn bath_params_validation() {
        assert!(BathParams::new(0.0, 1.0, 1.0, -0.5).is_err());
        assert!(BathParams::new(1.0, -1.0, 1.0, -0.5).is_err());
        assert!(BathParams::new(1.0, 1.0, 0.0, -0.5).is_err());
        assert!(BathParams::new(1.0, 1.0, 1.0, 0.5).is_err());
        assert!(BathParams::new(1.0, 1.0, 1.0, -1.5).is_err());
        // gamma2 < gamma1/2 is unphysical.
        assert!(BathParams::with_independent_rates(1.0, 1.0, 4.0, 1.0, -0.5).is_err());
        assert!(BathParams::with_independent_rates(1.0, 1.0, 2.0, 1.0, -0.5).is_ok());
    }

    #[test]
    fn shift_is_nonmonotonic_in_cooperativity() {
        // At fixed delta != 0 the shift rises from 0 and returns to 0;
        // the maximizer over C in [1e-3, 1e6] is interior.
        let bath = test_bath();
        let delta = 4.0;
        let n = 600;
        let mut best = (0usize, 0.0f64);
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let c = 10f64.powf(-3.0 + 9.0 * k as f64 / (n - 1) as f64);
            let v = bath_frequency_shift(&bath, delta, c).abs();
            if v > best.1 {
                best = (k, v);
            }
            values.push(v);
        }
        assert!(best.0 > 0 && best.0 < n - 1, "maximizer must be interior");
        assert!(values[0] < 0.05 * best.1);
        assert!(values[n - 1] < 0.05 * best.1);
    }

    proptest! {
        #[test]
        fn saturation_bound_property(
            sz_th in -1.0f64..=0.0,
            dq in -100.0f64..100.0,
            coop in 0.0f64..1e6,
        ) {
            let bath = BathParams::new(1.0, 1.0, 1.0, sz_th).unwrap();
            let sz = saturated_sigma_z(dq, 0.0, &bath, coop).unwrap();
            prop_assert!(sz >= bath.sigma_z_th() - 1e-12);
            prop_assert!(sz <= 0.0);
        }

        #[test]
        fn shift_antisymmetry_and_damping_symmetry(
            delta in -50.0f64..50.0,
            coop in 0.0f64..1e5,
        ) {
            let bath = test_bath();
            prop_assert_eq!(
                bath_frequency_shift(&bath, delta, coop),
                -bath_frequency_shift(&bath, -delta, coop)
            );
            prop_assert_eq!(
                bath_damping(&bath, delta, coop),
                bath_damping(&bath, -delta, coop)
            );
        }

        #[test]
        fn damping_bracket_lies_in_unit_interval(
            delta in -1e4f64..1e4,
            log_coop in -6.0f64..8.0,
        ) {
            let bracket = damping_bracket(delta, 10f64.powf(log_coop));
            prop_assert!(bracket >= 0.0);
            prop_assert!(bracket <= 1.0);
        }

        #[test]
        fn shift_sign_follows_detuning_sign(
            delta in 1e-3f64..50.0,
            log_coop in -3.0f64..6.0,
        ) {
            // Pull toward the pump: positive detuning pulls the frequency up
            // when sigma_z_th < 0.
            let bath = test_bath();
            let coop = 10f64.powf(log_coop);
            prop_assert!(bath_frequency_shift(&bath, delta, coop) > 0.0);
            prop_assert!(bath_frequency_shift(&bath, -delta, coop) < 0.0);
        }

        #[test]
        fn damping_decreases_with_cooperativity_at_zero_detuning(
            log_coop in -3.0f64..6.0,
        ) {
            let bath = test_bath();
            let c = 10f64.powf(log_coop);
            let lo = bath_damping(&bath, 0.0, c);
            let hi = bath_damping(&bath, 0.0, c * 1.5);
            prop_assert!(hi < lo);
        }
    }
}
