//! Electrostatics of the interdigitated capacitor and the lumped LC circuit.
//!
//! The analytic layer is the first-harmonic approximation of the comb field:
//! the potential decays over a/2π, the capacitance is S ε₀ (1+ε_s)/a, and
//! the LC resonance follows. A finite-difference solver for the mixed
//! boundary-value problem on one electrode period provides the numerical
//! check, including the fraction of electrostatic energy carried by the
//! first Fourier harmonic.

use crate::constants::{Constants, TWO_PI};
use crate::error::{Error, Result};

/// Interdigitated capacitor geometry. The period must satisfy a = 2(s + w).
///
/// `area_s` is the authoritative area entering the capacitance formula; the
/// constructor derives it as the comb footprint n_pairs · p · a (one full
/// period per tooth pair), which is the convention under which the closed
/// form agrees with the per-pair charge integral q = p ε₀ (1+ε_s) V₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitorGeometry {
    pub period_a: f64,
    pub finger_width_w: f64,
    pub gap_s: f64,
    pub finger_length_p: f64,
    pub n_pairs: usize,
    pub area_s: f64,
    pub eps_substrate: f64,
}

impl CapacitorGeometry {
    pub fn new(
        finger_width_w: f64,
        gap_s: f64,
        finger_length_p: f64,
        n_pairs: usize,
        eps_substrate: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("finger_width_w", finger_width_w),
            ("gap_s", gap_s),
            ("finger_length_p", finger_length_p),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if n_pairs == 0 {
            return Err(Error::domain("n_pairs must be at least 1"));
        }
        if !(eps_substrate >= 1.0) {
            return Err(Error::domain(format!(
                "relative permittivity must be >= 1, got {eps_substrate}"
            )));
        }
        let period_a = 2.0 * (gap_s + finger_width_w);
        let area_s = n_pairs as f64 * finger_length_p * period_a;
        Ok(Self {
            period_a,
            finger_width_w,
            gap_s,
            finger_length_p,
            n_pairs,
            area_s,
            eps_substrate,
        })
    }

    /// Override the derived electrode area (e.g. to account for edge terms
    /// or to match a measured layout).
    pub fn with_area(mut self, area_s: f64) -> Result<Self> {
        if !(area_s > 0.0) {
            return Err(Error::domain(format!("area must be > 0, got {area_s}")));
        }
        self.area_s = area_s;
        Ok(self)
    }
}

/// Lumped LC circuit formed by the meander inductor and the comb capacitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedCircuit {
    pub inductance_l: f64,
    pub capacitance_c: f64,
    pub meander_length_l: f64,
}

impl LumpedCircuit {
    pub fn new(inductance_l: f64, capacitance_c: f64) -> Result<Self> {
        if !(inductance_l > 0.0) || !(capacitance_c > 0.0) {
            return Err(Error::domain(format!(
                "L and C must be > 0, got L = {inductance_l}, C = {capacitance_c}"
            )));
        }
        Ok(Self {
            inductance_l,
            capacitance_c,
            meander_length_l: 0.0,
        })
    }

    /// Estimate the inductance of a meander of length `l` as L ≈ μ₀ l.
    pub fn from_meander(meander_length_l: f64, capacitance_c: f64) -> Result<Self> {
        Self::from_meander_with(meander_length_l, capacitance_c, &Constants::default())
    }

    pub fn from_meander_with(
        meander_length_l: f64,
        capacitance_c: f64,
        consts: &Constants,
    ) -> Result<Self> {
        if !(meander_length_l > 0.0) {
            return Err(Error::domain(format!(
                "meander length must be > 0, got {meander_length_l}"
            )));
        }
        let mut circ = Self::new(consts.mu_0 * meander_length_l, capacitance_c)?;
        circ.meander_length_l = meander_length_l;
        Ok(circ)
    }
}

/// First-harmonic electrostatic potential V₀ sin(2πx/a) e^(−2π|z|/a).
pub fn potential(x: f64, z: f64, v0: f64, geom: &CapacitorGeometry) -> f64 {
    let k = TWO_PI / geom.period_a;
    v0 * (k * x).sin() * (-k * z.abs()).exp()
}

/// First-harmonic free surface charge density on the electrode plane
/// (C/m²). Uses the half-amplitude convention of the truncated series, with
/// both half-spaces contributing:
///
/// σ(x) = ε₀ (1+ε_s) (V₀/2) (2π/a) sin(2πx/a)
///
/// so that the charge per tooth q = p ∫₀^{a/2} σ dx = p ε₀ (1+ε_s) V₀.
pub fn surface_charge(x: f64, v0: f64, geom: &CapacitorGeometry) -> f64 {
    surface_charge_with(x, v0, geom, &Constants::default())
}

pub fn surface_charge_with(
    x: f64,
    v0: f64,
    geom: &CapacitorGeometry,
    consts: &Constants,
) -> f64 {
    let k = TWO_PI / geom.period_a;
    consts.eps_0 * (1.0 + geom.eps_substrate) * (v0 / 2.0) * k * (k * x).sin()
}

/// Closed-form comb capacitance C = S ε₀ (1 + ε_s)/a.
pub fn capacitance(geom: &CapacitorGeometry) -> f64 {
    capacitance_with(geom, &Constants::default())
}

pub fn capacitance_with(geom: &CapacitorGeometry, consts: &Constants) -> f64 {
    geom.area_s * consts.eps_0 * (1.0 + geom.eps_substrate) / geom.period_a
}

/// LC resonance frequency in Hz.
pub fn lc_resonance(circ: &LumpedCircuit) -> f64 {
    1.0 / (TWO_PI * (circ.inductance_l * circ.capacitance_c).sqrt())
}

/// Evanescent confinement depth a/2π of the comb field.
pub fn confinement_depth(geom: &CapacitorGeometry) -> f64 {
    geom.period_a / TWO_PI
}

/// Result of the finite-difference solve of the electrode boundary-value
/// problem on one period.
#[derive(Debug, Clone)]
pub struct LaplaceSolution {
    /// Sine-series coefficients B_n of V(x, 0), n = 1.. (index 0 is n = 1).
    pub fourier_coefficients: Vec<f64>,
    /// Fraction of the stored electrostatic energy in the n = 1 harmonic.
    pub energy_fraction_first_harmonic: f64,
    /// Capacitance from the integrated electrode charge, scaled to the full
    /// device (n_pairs teeth of length p).
    pub capacitance_numeric: f64,
    /// Final max node update of the relaxation, in units of V₀.
    pub residual: f64,
    pub sweeps: usize,
}

const SOR_TOL: f64 = 1e-10;
const SOR_MAX_SWEEPS: usize = 200_000;
/// Domain height above and below the electrode plane, in periods. The
/// truncation error of the Dirichlet lid decays as e^(−2π·height).
const DOMAIN_HEIGHT_PERIODS: f64 = 3.0;

struct SorGrid {
    v: Vec<f64>,
    fixed: Vec<bool>,
    n: usize,
    zi0: usize,
    dx: f64,
    residual: f64,
    sweeps: usize,
}

#[cfg(test)]
impl SorGrid {
    fn at(&self, j: usize, i: usize) -> f64 {
        self.v[j * self.n + i]
    }
}

/// Solve the mixed Dirichlet problem for the comb potential on one period:
/// ∇·(ε∇V) = 0 with V = ±V₀/2 on the electrodes at z = 0, periodic in x,
/// V = 0 on the lids at z = ±3a, and permittivity ε_s below the plane.
/// Successive over-relaxation on a uniform grid with `grid_resolution`
/// points per period (at least 64).
pub fn laplace_bvp_solve(
    geom: &CapacitorGeometry,
    grid_resolution: usize,
) -> Result<LaplaceSolution> {
    let grid = sor_solve(geom, grid_resolution)?;
    extract_solution(geom, &grid)
}

fn sor_solve(geom: &CapacitorGeometry, grid_resolution: usize) -> Result<SorGrid> {
    if grid_resolution < 64 {
        return Err(Error::domain(format!(
            "grid resolution must be >= 64 points per period, got {grid_resolution}"
        )));
    }
    let n = grid_resolution;
    let a = geom.period_a;
    let dx = a / n as f64;
    let rows = (2.0 * DOMAIN_HEIGHT_PERIODS * a / dx).round() as usize + 1;
    let zi0 = (rows - 1) / 2;
    let eps_s = geom.eps_substrate;
    let v0 = 1.0;

    // Electrode masks on the z = 0 row.
    let s = geom.gap_s;
    let w = geom.finger_width_w;
    let mut fixed = vec![false; rows * n];
    let mut v = vec![0.0f64; rows * n];
    let idx = |j: usize, i: usize| j * n + i;
    for i in 0..n {
        let x = i as f64 * dx;
        if x >= s / 2.0 - 1e-12 * a && x <= s / 2.0 + w + 1e-12 * a {
            v[idx(zi0, i)] = v0 / 2.0;
            fixed[idx(zi0, i)] = true;
        } else if x >= a - s / 2.0 - w - 1e-12 * a && x <= a - s / 2.0 + 1e-12 * a {
            v[idx(zi0, i)] = -v0 / 2.0;
            fixed[idx(zi0, i)] = true;
        }
    }
    for i in 0..n {
        fixed[idx(0, i)] = true;
        fixed[idx(rows - 1, i)] = true;
    }

    // Face permittivities per row: up/down faces sit at z ± dx/2, in-plane
    // faces on the interface row average the two half-spaces.
    let mut eps_up = vec![0.0f64; rows];
    let mut eps_dn = vec![0.0f64; rows];
    let mut eps_h = vec![0.0f64; rows];
    for j in 0..rows {
        let z = (j as isize - zi0 as isize) as f64 * dx;
        eps_up[j] = if z + dx / 2.0 > 0.0 { 1.0 } else { eps_s };
        eps_dn[j] = if z - dx / 2.0 > 0.0 { 1.0 } else { eps_s };
        eps_h[j] = if z > 0.0 {
            1.0
        } else if z < 0.0 {
            eps_s
        } else {
            (1.0 + eps_s) / 2.0
        };
    }

    let omega = 2.0 / (1.0 + (std::f64::consts::PI / n as f64).sin());
    let mut sweeps = 0;
    let mut residual = f64::INFINITY;
    // Red-black ordering so the update is a proper Gauss-Seidel sweep.
    while sweeps < SOR_MAX_SWEEPS {
        let mut max_delta = 0.0f64;
        for color in 0..2usize {
            for j in 1..rows - 1 {
                let den = eps_up[j] + eps_dn[j] + 2.0 * eps_h[j];
                for i in 0..n {
                    if (i + j) % 2 != color || fixed[idx(j, i)] {
                        continue;
                    }
                    let e = v[idx(j, (i + 1) % n)];
                    let wv = v[idx(j, (i + n - 1) % n)];
                    let up = v[idx(j + 1, i)];
                    let dn = v[idx(j - 1, i)];
                    let target = (eps_up[j] * up + eps_dn[j] * dn + eps_h[j] * (e + wv)) / den;
                    let delta = omega * (target - v[idx(j, i)]);
                    v[idx(j, i)] += delta;
                    max_delta = max_delta.max(delta.abs());
                }
            }
        }
        sweeps += 1;
        residual = max_delta / v0;
        if residual < SOR_TOL {
            break;
        }
    }
    if residual >= SOR_TOL {
        return Err(Error::Numerical {
            context: "SOR did not converge".into(),
            achieved: residual,
            requested: SOR_TOL,
        });
    }
    Ok(SorGrid {
        v,
        fixed,
        n,
        zi0,
        dx,
        residual,
        sweeps,
    })
}

fn extract_solution(geom: &CapacitorGeometry, grid: &SorGrid) -> Result<LaplaceSolution> {
    let SorGrid {
        v,
        fixed,
        n,
        zi0,
        dx,
        residual,
        sweeps,
        ..
    } = grid;
    let (n, zi0, dx) = (*n, *zi0, *dx);
    let idx = |j: usize, i: usize| j * n + i;
    let eps_s = geom.eps_substrate;
    let v0 = 1.0;

    // Sine coefficients of the z = 0 row: B_m = (2/N) sum_i V_i sin(2π m i/N).
    let nmax = n / 2 - 1;
    let mut coeffs = Vec::with_capacity(nmax);
    for m in 1..=nmax {
        let mut acc = 0.0;
        for i in 0..n {
            acc += v[idx(zi0, i)] * (TWO_PI * m as f64 * i as f64 / n as f64).sin();
        }
        coeffs.push(2.0 * acc / n as f64);
    }
    // Per-harmonic energy of the series solution scales as m B_m².
    let energies: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| (k + 1) as f64 * b * b)
        .collect();
    let total: f64 = energies.iter().sum();
    let energy_fraction_first_harmonic = energies[0] / total;

    // Integrated free charge on the positive electrode, one-sided
    // second-order normal derivatives on both faces of the plane.
    let consts = Constants::default();
    let mut lambda = 0.0;
    for i in 0..n {
        if !fixed[idx(zi0, i)] || v[idx(zi0, i)] <= 0.0 {
            continue;
        }
        let dv_up =
            (-3.0 * v[idx(zi0, i)] + 4.0 * v[idx(zi0 + 1, i)] - v[idx(zi0 + 2, i)]) / (2.0 * dx);
        let dv_dn =
            (3.0 * v[idx(zi0, i)] - 4.0 * v[idx(zi0 - 1, i)] + v[idx(zi0 - 2, i)]) / (2.0 * dx);
        lambda += (-dv_up + eps_s * dv_dn) * dx;
    }
    let capacitance_numeric =
        geom.n_pairs as f64 * geom.finger_length_p * consts.eps_0 * lambda / v0;

    Ok(LaplaceSolution {
        fourier_coefficients: coeffs,
        energy_fraction_first_harmonic,
        capacitance_numeric,
        residual: *residual,
        sweeps: *sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EPS_0;
    use approx::assert_relative_eq;

    fn symmetric_geom(eps: f64) -> CapacitorGeometry {
        // w = s = 0.25 um, a = 1 um
        CapacitorGeometry::new(0.25e-6, 0.25e-6, 50e-6, 21, eps).unwrap()
    }

    #[test]
    fn geometry_invariants() {
        let g = symmetric_geom(11.7);
        assert_relative_eq!(g.period_a, 1e-6, max_relative = 1e-12);
        assert!(CapacitorGeometry::new(0.0, 1.0, 1.0, 1, 1.0).is_err());
        assert!(CapacitorGeometry::new(1.0, 1.0, 1.0, 0, 1.0).is_err());
        assert!(CapacitorGeometry::new(1.0, 1.0, 1.0, 1, 0.5).is_err());
    }

    #[test]
    fn potential_examples() {
        let g = symmetric_geom(11.7);
        let a = g.period_a;
        let v0 = 3.0;
        // Sine maximum at x = a/4 on the plane.
        assert_relative_eq!(potential(a / 4.0, 0.0, v0, &g), v0, max_relative = 1e-12);
        // 1/e decay over a/2pi.
        assert_relative_eq!(
            potential(a / 4.0, a / TWO_PI, v0, &g),
            v0 / std::f64::consts::E,
            max_relative = 1e-12
        );
        // Evanescent decay.
        assert!(potential(a / 4.0, 50.0 * a, v0, &g).abs() < 1e-50);
    }

    #[test]
    fn potential_satisfies_laplace_off_plane() {
        // Fourth-order discrete Laplacian at h = 1e-3 a, off the electrode
        // plane; relative to the curvature scale k^2 V0.
        let g = symmetric_geom(4.0);
        let a = g.period_a;
        let h = 1e-3 * a;
        let k = TWO_PI / a;
        let v0 = 1.0;
        let second = |f: &dyn Fn(f64) -> f64, x0: f64| {
            (-f(x0 + 2.0 * h) + 16.0 * f(x0 + h) - 30.0 * f(x0)
                + 16.0 * f(x0 - h)
                - f(x0 - 2.0 * h))
                / (12.0 * h * h)
        };
        let mut worst: f64 = 0.0;
        for trial in 0..50 {
            let x = (trial as f64 * 0.083 + 0.01) % 1.0 * a;
            let z = 0.02 * a + (trial as f64 * 0.047) % 1.0 * a;
            let z = if trial % 2 == 0 { z } else { -z };
            let vxx = second(&|xx| potential(xx, z, v0, &g), x);
            let vzz = second(&|zz| potential(x, zz, v0, &g), z);
            let scale = k * k * v0;
            worst = worst.max((vxx + vzz).abs() / scale);
        }
        assert!(worst < 1e-8, "discrete Laplacian residual {worst}");
    }

    #[test]
    fn surface_charge_examples() {
        let g = symmetric_geom(11.7);
        let a = g.period_a;
        let v0 = 2.0;
        assert_eq!(surface_charge(0.0, v0, &g), 0.0);
        // Integral over half a period times p gives p eps0 (1+eps) V0.
        let n = 20_000;
        let mut q = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) / n as f64 * (a / 2.0);
            q += surface_charge(x, v0, &g) * (a / 2.0 / n as f64);
        }
        q *= g.finger_length_p;
        let expected = g.finger_length_p * EPS_0 * (1.0 + g.eps_substrate) * v0;
        assert_relative_eq!(q, expected, max_relative = 1e-8);
        // Vacuum on both sides halves the density relative to (1+eps)=2... i.e.
        // the two-sided form stays symmetric.
        let gv = symmetric_geom(1.0);
        assert_relative_eq!(
            surface_charge(a / 4.0, v0, &gv),
            EPS_0 * v0 * TWO_PI / a,
            max_relative = 1e-12
        );
    }

    #[test]
    fn capacitance_examples() {
        // Vacuum symmetric case: C = 2 eps0 S / a.
        let g = symmetric_geom(1.0).with_area(1e-6 * 1.0).unwrap();
        assert_relative_eq!(
            capacitance(&g),
            2.0 * EPS_0 * 1e-6 / g.period_a,
            max_relative = 1e-12
        );
        // The design-point values: S = 1.07e-9 m^2, a = 1 um, eps = 11.7.
        let g = symmetric_geom(11.7).with_area(1.07e-9).unwrap();
        let c = capacitance(&g);
        assert!((0.115e-12..=0.125e-12).contains(&c), "C = {c:e}");
        assert_relative_eq!(c, 1.203_195_582e-13, max_relative = 1e-6);
    }

    #[test]
    fn capacitance_scaling_laws() {
        let g1 = CapacitorGeometry::new(0.25e-6, 0.25e-6, 50e-6, 21, 5.0).unwrap();
        let g2 = CapacitorGeometry::new(0.5e-6, 0.5e-6, 50e-6, 21, 5.0)
            .unwrap()
            .with_area(g1.area_s)
            .unwrap();
        // Doubling a at fixed S halves C; linear in S and (1+eps).
        assert_relative_eq!(capacitance(&g2), capacitance(&g1) / 2.0, max_relative = 1e-12);
        let g3 = g1.with_area(2.0 * g1.area_s).unwrap();
        assert_relative_eq!(capacitance(&g3), 2.0 * capacitance(&g1), max_relative = 1e-12);
        let g4 = CapacitorGeometry::new(0.25e-6, 0.25e-6, 50e-6, 21, 11.0)
            .unwrap()
            .with_area(g1.area_s)
            .unwrap();
        assert_relative_eq!(
            capacitance(&g4) / capacitance(&g1),
            12.0 / 6.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn lc_resonance_examples() {
        let unit = LumpedCircuit::new(1.0, 1.0).unwrap();
        assert_relative_eq!(lc_resonance(&unit), 1.0 / TWO_PI, max_relative = 1e-12);
        // 5 nH with the design-point C lands near 6.5 GHz.
        let c = 1.203_195_582e-13;
        let circ = LumpedCircuit::new(5e-9, c).unwrap();
        let f = lc_resonance(&circ);
        assert!((6.2e9..=6.8e9).contains(&f), "f = {f:e}");
        assert_relative_eq!(f, 6.488_76e9, max_relative = 1e-4);
        // Quadrupling C halves the frequency.
        let circ4 = LumpedCircuit::new(5e-9, 4.0 * c).unwrap();
        assert_relative_eq!(lc_resonance(&circ4), f / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn confinement_examples() {
        let g = symmetric_geom(11.7);
        assert_relative_eq!(confinement_depth(&g), 1e-6 / TWO_PI, max_relative = 1e-12);
        let g2 = CapacitorGeometry::new(0.5e-6, 0.5e-6, 50e-6, 21, 11.7).unwrap();
        assert_relative_eq!(
            confinement_depth(&g2),
            2.0 * confinement_depth(&g),
            max_relative = 1e-12
        );
    }

    #[test]
    fn bvp_energy_fraction_and_capacitance() {
        let g = symmetric_geom(11.7);
        let sol = laplace_bvp_solve(&g, 128).unwrap();
        assert!(
            (sol.energy_fraction_first_harmonic - 0.92).abs() < 0.03,
            "first-harmonic energy fraction {}",
            sol.energy_fraction_first_harmonic
        );
        // Closed form with the footprint area against the charge integral.
        let c_closed = capacitance(&g);
        let rel = (sol.capacitance_numeric - c_closed).abs() / c_closed;
        assert!(rel < 0.15, "numeric vs closed-form capacitance off by {rel}");
    }

    #[test]
    fn bvp_even_harmonics_vanish_for_symmetric_layout() {
        let g = symmetric_geom(11.7);
        let sol = laplace_bvp_solve(&g, 128).unwrap();
        let b = &sol.fourier_coefficients;
        assert!(b[1].abs() < 1e-8 * b[0].abs(), "B2 = {}", b[1]);
        assert!(b[3].abs() < 1e-8 * b[0].abs(), "B4 = {}", b[3]);
    }

    #[test]
    fn bvp_vacuum_solution_is_antisymmetric() {
        // eps = 1: the grid solution obeys V(-x, -z) = -V(x, z), where
        // -x wraps periodically to n - i and -z mirrors about the plane.
        let g = symmetric_geom(1.0);
        let grid = sor_solve(&g, 96).unwrap();
        let n = grid.n;
        let zi0 = grid.zi0;
        let mut worst: f64 = 0.0;
        for dj in [1usize, 5, 20, 77] {
            for i in 1..n {
                let direct = grid.at(zi0 + dj, i);
                let mirrored = grid.at(zi0 - dj, n - i);
                worst = worst.max((mirrored + direct).abs());
            }
        }
        assert!(worst < 1e-8, "antisymmetry violated by {worst}");
    }

    #[test]
    fn bvp_richardson_convergence() {
        let g = symmetric_geom(11.7);
        let lo = laplace_bvp_solve(&g, 96).unwrap();
        let hi = laplace_bvp_solve(&g, 192).unwrap();
        let drift = (hi.energy_fraction_first_harmonic - lo.energy_fraction_first_harmonic).abs();
        assert!(drift < 0.01, "energy fraction drift {drift}");
        assert!(hi.residual < SOR_TOL);
    }

    #[test]
    fn bvp_rejects_coarse_grids() {
        let g = symmetric_geom(11.7);
        assert!(laplace_bvp_solve(&g, 32).is_err());
    }
}
