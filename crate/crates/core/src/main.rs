//! Command-line front end: model verification, spectrum fitting, photon
//! calibration, TLS bath inference, and plot-ready model evaluation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tlsbath::calibration;
use tlsbath::config::Config;
use tlsbath::constants::{angular_to_hz, hz_to_angular, Constants, TWO_PI};
use tlsbath::error::{Error, Result};
use tlsbath::geometry;
use tlsbath::inference::{self, CiMode};
use tlsbath::io::{self, OutputHeader};
use tlsbath::model::{self, BathParams};
use tlsbath::oracle;
use tlsbath::report;
use tlsbath::spectroscopy;

#[derive(Parser)]
#[command(name = "tlsbath", version, about = "Pumped TLS-bath resonator analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the closed-form bath response against the numerical oracles.
    Verify(VerifyArgs),
    /// Fit a notch resonance to a complex transmission trace.
    FitSpectrum(FitSpectrumArgs),
    /// Fit the TLS bath model to a pump sweep and bootstrap uncertainties.
    FitTls(FitTlsArgs),
    /// Extract chain gain and added noise from a noise thermometry sweep.
    Calibrate(CalibrateArgs),
    /// Evaluate capacitor geometry: C, LC resonance, confinement depth.
    Geometry(GeometryArgs),
    /// Evaluate the bath model on an (n, detuning) grid to CSV.
    ModelEval(ModelEvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Use a 4x denser verification grid.
    #[arg(long)]
    grid_dense: bool,
    /// Seed for the randomized steady-state systems.
    #[arg(long, default_value_t = 0xD1CE)]
    seed: u64,
    /// Corrupt one check on purpose to exercise the failure path.
    #[arg(long, hide = true)]
    inject_error: bool,
}

#[derive(Args)]
struct FitSpectrumArgs {
    /// Trace CSV: freq_hz,re_t,im_t[,sigma]
    trace: PathBuf,
    /// Pin the external coupling rate (Hz) instead of fitting it.
    #[arg(long)]
    gamma_ext_prior_hz: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct FitTlsArgs {
    /// Sweep CSV: n_photons,pump_detuning_hz,shift_hz,gamma_i_hz[,...]
    sweep: PathBuf,
    /// Configuration file ([pipeline] section); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Reference resonance frequency the detunings are measured from (Hz).
    #[arg(long)]
    omega_c_ref_hz: Option<f64>,
    /// Bath temperature (K) for the thermal imbalance.
    #[arg(long)]
    temperature_k: Option<f64>,
    /// Bootstrap resample count; 0 skips the bootstrap.
    #[arg(long)]
    bootstrap: Option<usize>,
    /// Bootstrap seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report percentile confidence intervals instead of mean +- 1.96 std.
    #[arg(long)]
    ci_percentile: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Noise sweep CSV: temperature_k,psd_w_per_hz
    sweep: PathBuf,
    /// Resonance frequency the noise was measured at (Hz).
    #[arg(long)]
    resonance_hz: f64,
    /// Known input-line attenuation to embed in the calibration (dB).
    #[arg(long, default_value_t = 0.0)]
    attenuation_db: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct GeometryArgs {
    /// Configuration file with a [geometry] section (and optional
    /// [circuit]).
    #[arg(long)]
    config: PathBuf,
    /// Also solve the boundary-value problem at this resolution.
    #[arg(long)]
    bvp_resolution: Option<usize>,
}

#[derive(Args)]
struct ModelEvalArgs {
    /// TLS spectral density in table units (MHz^-1).
    #[arg(long)]
    p0_mhz_inv: f64,
    /// Coupling rate g/2pi in kHz.
    #[arg(long)]
    g_khz: f64,
    /// Dephasing rate Gamma2/2pi in kHz.
    #[arg(long)]
    gamma2_khz: f64,
    /// Thermal imbalance; computed from temperature if omitted.
    #[arg(long, allow_hyphen_values = true)]
    sigma_z_th: Option<f64>,
    /// Bath temperature (K), used with --omega-c-ghz when --sigma-z-th is
    /// not given.
    #[arg(long)]
    temperature_k: Option<f64>,
    /// Resonance frequency in GHz for the thermal imbalance.
    #[arg(long)]
    omega_c_ghz: Option<f64>,
    /// Comma-separated pump detunings in MHz.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    detunings_mhz: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    n_min: f64,
    #[arg(long, default_value_t = 1e4)]
    n_max: f64,
    #[arg(long, default_value_t = 60)]
    n_points: usize,
    /// Output CSV path.
    #[arg(long, default_value = "model_eval.csv")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let consts = match load_constants() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(&args),
        Command::FitSpectrum(args) => cmd_fit_spectrum(&args),
        Command::FitTls(args) => cmd_fit_tls(&args, &consts),
        Command::Calibrate(args) => cmd_calibrate(&args),
        Command::Geometry(args) => cmd_geometry(&args, &consts),
        Command::ModelEval(args) => cmd_model_eval(&args, &consts),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Constants override file via TLSBATH_CONSTANTS: flat keys hbar, k_b,
/// eps_0, mu_0.
fn load_constants() -> Result<Constants> {
    let mut consts = Constants::default();
    if let Ok(path) = std::env::var("TLSBATH_CONSTANTS") {
        let cfg = Config::load(Path::new(&path))?;
        if let Some(v) = cfg.get_f64_opt("hbar")? {
            consts.hbar = v;
        }
        if let Some(v) = cfg.get_f64_opt("k_b")? {
            consts.k_b = v;
        }
        if let Some(v) = cfg.get_f64_opt("eps_0")? {
            consts.eps_0 = v;
        }
        if let Some(v) = cfg.get_f64_opt("mu_0")? {
            consts.mu_0 = v;
        }
    }
    Ok(consts)
}

struct CheckLine {
    name: &'static str,
    worst: f64,
    tolerance: f64,
}

impl CheckLine {
    fn passed(&self) -> bool {
        self.worst < self.tolerance
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let density = if args.grid_dense { 4 } else { 1 };
    let mut checks = Vec::new();

    // --- closed form vs quadrature over the (C, delta) grid ---
    let bath = BathParams::new(11e-6, hz_to_angular(170e3), hz_to_angular(1.4e6), -0.4982)?;
    let coop_grid: Vec<f64> = log_grid(1e-3, 1e4, 8 * density);
    let delta_grid: Vec<f64> = lin_grid(-50.0, 50.0, 25 * density);
    let mut worst = 0.0f64;
    let mut points = 0usize;
    for &coop in &coop_grid {
        for &delta in &delta_grid {
            let omega_p = delta * bath.gamma2();
            let quad = oracle::numeric_bath_integral(&bath, omega_p, 0.0, coop)?;
            let closed = model::bath_complex_shift(&bath, delta, coop);
            let rel =
                (quad.as_complex() - closed.as_complex()).norm() / closed.as_complex().norm();
            worst = worst.max(rel);
            points += 1;
        }
    }
    if args.inject_error {
        worst += 1.0;
    }
    checks.push(CheckLine {
        name: "bath integral vs closed form",
        worst,
        tolerance: 1e-6,
    });
    println!("grid points: {points}");

    // --- randomized steady-state systems ---
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst_sz = 0.0f64;
    let mut worst_pull = 0.0f64;
    let mut worst_residual = 0.0f64;
    for _ in 0..50 {
        let gamma2 = hz_to_angular(10f64.powf(rng.random_range(5.0..6.5)));
        let gamma1 = 2.0 * gamma2;
        let g = hz_to_angular(10f64.powf(rng.random_range(4.5..5.8)));
        let kappa = hz_to_angular(10f64.powf(rng.random_range(5.5..6.5)));
        let sigma_z_th = -rng.random_range(0.2..1.0);
        let omega_c = hz_to_angular(6e9);
        let omega_p = omega_c + rng.random_range(-5.0..5.0) * gamma2;
        let omega_q = omega_c + rng.random_range(-8.0..8.0) * gamma2;
        // drive sized to land the bare-cavity cooperativity in [1e-3, 1e3]
        let target_coop = 10f64.powf(rng.random_range(-3.0..3.0));
        let delta = omega_p - omega_c;
        let alpha_sq = target_coop * gamma1 * gamma2 / (4.0 * g * g);
        let drive_j = (alpha_sq * (delta * delta + kappa * kappa / 4.0)).sqrt();
        let sys = oracle::MBSystem {
            omega_c,
            omega_p,
            omega_q,
            g,
            kappa,
            gamma1,
            gamma2,
            sigma_z_th,
            drive_j,
        };
        let state = oracle::mb_steady_state(&sys)?;
        worst_residual = worst_residual.max(oracle::mb_residual(&sys, &state));
        let coop = state.cooperativity(&sys);
        let bath_one =
            BathParams::with_independent_rates(1.0, g, gamma1, gamma2, sigma_z_th)?;
        let sz_law = model::saturated_sigma_z(omega_q, omega_p, &bath_one, coop)?;
        worst_sz = worst_sz.max((state.sigma_z0 - sz_law).abs());
        let pull = oracle::mb_frequency_pull(&sys, &state);
        let reference = model::single_tls_shift(omega_q, omega_c, &bath_one, state.sigma_z0);
        let rel = (pull.as_complex() - reference.as_complex()).norm()
            / reference.as_complex().norm().max(f64::MIN_POSITIVE);
        worst_pull = worst_pull.max(rel);
    }
    checks.push(CheckLine {
        name: "steady-state saturation law",
        worst: worst_sz,
        tolerance: 1e-10,
    });
    checks.push(CheckLine {
        name: "steady-state equation residuals",
        worst: worst_residual,
        tolerance: 1e-10,
    });
    checks.push(CheckLine {
        name: "adiabatic pull vs single-TLS shift",
        worst: worst_pull,
        tolerance: 1e-12,
    });

    let mut ok = true;
    for check in &checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        println!(
            "{:<38} max rel err {:>10.3e}  [tol {:.1e}]  {status}",
            check.name, check.worst, check.tolerance
        );
        ok &= check.passed();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1).max(1) as f64))
        .collect()
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64)
        .collect()
}

fn cmd_fit_spectrum(args: &FitSpectrumArgs) -> Result<ExitCode> {
    let trace = io::read_trace(&args.trace)?;
    let fit = spectroscopy::fit_resonance(&trace, args.gamma_ext_prior_hz)?;
    std::fs::create_dir_all(&args.out)?;
    let header = OutputHeader::new().with_input(&args.trace)?;

    let report_path = args.out.join("spectrum_fit.txt");
    {
        use std::io::Write;
        let mut out = std::fs::File::create(&report_path)?;
        header.write_to(&mut out)?;
        writeln!(out, "[resonance]")?;
        writeln!(out, "omega_c_hz = {}", io::full_precision(fit.omega_c_hz))?;
        writeln!(
            out,
            "gamma_total_hz = {}",
            io::full_precision(fit.gamma_total_hz)
        )?;
        writeln!(
            out,
            "gamma_ext_hz = {}",
            io::full_precision(fit.gamma_ext_hz)
        )?;
        writeln!(out, "gamma_i_hz = {}", io::full_precision(fit.gamma_i_hz))?;
        writeln!(
            out,
            "coupling_phase_rad = {}",
            io::full_precision(fit.coupling_phase)
        )?;
        writeln!(out)?;
        writeln!(out, "[background]")?;
        writeln!(
            out,
            "amplitude = {}",
            io::full_precision(fit.background.amplitude)
        )?;
        writeln!(
            out,
            "amplitude_slope = {}",
            io::full_precision(fit.background.amplitude_slope)
        )?;
        writeln!(
            out,
            "phase_offset_rad = {}",
            io::full_precision(fit.background.phase_offset)
        )?;
        writeln!(
            out,
            "phase_slope_rad_per_hz = {}",
            io::full_precision(fit.background.phase_slope)
        )?;
        writeln!(
            out,
            "electrical_delay_s = {}",
            io::full_precision(fit.background.electrical_delay())
        )?;
        writeln!(
            out,
            "reference_freq_hz = {}",
            io::full_precision(fit.reference_freq_hz)
        )?;
        writeln!(out)?;
        writeln!(out, "[quality]")?;
        writeln!(
            out,
            "residual_norm = {}",
            io::full_precision(fit.residual_norm)
        )?;
        writeln!(out, "n_points = {}", trace.len())?;
    }

    // Model overlay on the measured grid.
    let curve_path = args.out.join("spectrum_curve.csv");
    {
        use std::io::Write;
        let mut out = std::fs::File::create(&curve_path)?;
        header.write_to(&mut out)?;
        writeln!(out, "freq_hz,re_t_model,im_t_model")?;
        for &f in trace.freqs_hz() {
            let t = spectroscopy::transmission_model(f, &fit);
            writeln!(
                out,
                "{},{},{}",
                io::full_precision(f),
                io::full_precision(t.re),
                io::full_precision(t.im)
            )?;
        }
    }

    println!(
        "omega_c = {:.6} GHz, gamma = {:.3} kHz, gamma_i = {:.3} kHz, gamma_ext = {:.3} kHz",
        fit.omega_c_hz / 1e9,
        fit.gamma_total_hz / 1e3,
        fit.gamma_i_hz / 1e3,
        fit.gamma_ext_hz / 1e3
    );
    println!("wrote {} and {}", report_path.display(), curve_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit_tls(args: &FitTlsArgs, consts: &Constants) -> Result<ExitCode> {
    let cfg = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let omega_c_ref_hz = match args.omega_c_ref_hz {
        Some(v) => v,
        None => cfg.get_f64("pipeline.omega_c_ref_hz")?,
    };
    let temperature_k = match args.temperature_k {
        Some(v) => v,
        None => cfg.get_f64("pipeline.temperature_k")?,
    };
    let n_resamples = match args.bootstrap {
        Some(v) => v,
        None => cfg.get_usize_opt("pipeline.bootstrap")?.unwrap_or(1000),
    };
    let seed = match args.seed {
        Some(v) => v,
        None => cfg.get_u64_opt("pipeline.seed")?.unwrap_or(0),
    };

    let dataset = io::read_sweep(&args.sweep, omega_c_ref_hz)?;
    let env = model::ThermalEnvironment::new(temperature_k)?;
    let sigma_z_th =
        model::thermal_imbalance_with(hz_to_angular(omega_c_ref_hz), &env, consts)?;

    std::fs::create_dir_all(&args.out)?;
    let header = io::OutputHeader::new()
        .with_input(&args.sweep)?
        .with_seed(seed);

    let mut detunings: Vec<f64> = dataset.points.iter().map(|p| p.detuning_hz).collect();
    detunings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    detunings.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * a.abs().max(1.0));
    let n_lo = dataset
        .points
        .iter()
        .map(|p| p.n_photons)
        .filter(|n| *n > 0.0)
        .fold(f64::INFINITY, f64::min);
    let n_hi = dataset
        .points
        .iter()
        .map(|p| p.n_photons)
        .fold(0.0f64, f64::max);

    if n_resamples == 0 {
        let outcome = inference::fit(&dataset, None, sigma_z_th)?;
        let path = args.out.join("report.txt");
        {
            use std::io::Write;
            let mut out = std::fs::File::create(&path)?;
            header.write_to(&mut out)?;
            writeln!(out, "[fit]")?;
            writeln!(out, "sigma_z_th = {}", io::full_precision(sigma_z_th))?;
            writeln!(
                out,
                "residual_norm = {}",
                io::full_precision(outcome.residual_norm)
            )?;
            writeln!(out, "degenerate_dataset = {}", outcome.degenerate)?;
            writeln!(out, "bootstrap = skipped")?;
            writeln!(out)?;
            writeln!(out, "[parameters]")?;
            let p = &outcome.params;
            writeln!(out, "p0_per_rad_s = {}", io::full_precision(p.p0))?;
            writeln!(out, "g_rad_s = {}", io::full_precision(p.g))?;
            writeln!(out, "gamma2_rad_s = {}", io::full_precision(p.gamma2))?;
            writeln!(out, "gamma_inf_rad_s = {}", io::full_precision(p.gamma_inf))?;
            writeln!(out, "omega_c_rad_s = {}", io::full_precision(p.omega_c))?;
        }
        write_all_curves(
            &args.out,
            &outcome.params,
            sigma_z_th,
            omega_c_ref_hz,
            &detunings,
            (n_lo, n_hi),
            &header,
        )?;
        println!("point estimate written to {} (bootstrap skipped)", path.display());
        return Ok(ExitCode::SUCCESS);
    }

    let ci_mode = if args.ci_percentile {
        CiMode::Percentile
    } else {
        CiMode::Normal
    };
    let result =
        inference::bootstrap_with_ci(&dataset, n_resamples, seed, sigma_z_th, None, ci_mode)?;

    report::write_report(
        &args.out.join("report.txt"),
        &result,
        &dataset,
        sigma_z_th,
        &header,
    )?;
    report::write_table_row(&args.out.join("table_row.csv"), &result, &header)?;
    write_all_curves(
        &args.out,
        &result.point_estimate,
        sigma_z_th,
        omega_c_ref_hz,
        &detunings,
        (n_lo, n_hi),
        &header,
    )?;

    let row = report::TableRow::from_result(&result);
    println!(
        "gamma_c0/2pi = {:.0} +- {:.0} kHz | g/2pi = {:.0} +- {:.0} kHz | P0 = {:.2} +- {:.2} MHz^-1 | gamma1/2pi = {:.0} +- {:.0} kHz | omega_c/2pi = {:.6} GHz",
        row.gamma_c0_khz.0,
        row.gamma_c0_khz.1,
        row.g_khz.0,
        row.g_khz.1,
        row.p0_mhz_inv.0,
        row.p0_mhz_inv.1,
        row.gamma1_khz.0,
        row.gamma1_khz.1,
        row.omega_c_ghz.0
    );
    if result.unreliable {
        eprintln!(
            "warning: {}/{} bootstrap resamples failed; intervals unreliable",
            result.n_failed, result.n_resamples
        );
    }
    if result.degenerate {
        eprintln!("warning: dataset detunings do not span both signs; parameters may be degenerate");
    }
    println!("wrote report.txt, table_row.csv, curves in {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn write_all_curves(
    out_dir: &Path,
    params: &inference::TlsFitParams,
    sigma_z_th: f64,
    omega_c_ref_hz: f64,
    detunings: &[f64],
    n_range: (f64, f64),
    header: &OutputHeader,
) -> Result<()> {
    for &det in detunings {
        let path = out_dir.join(format!("curves_{:+.0}hz.csv", det));
        report::write_curve(
            &path,
            params,
            sigma_z_th,
            omega_c_ref_hz,
            det,
            n_range,
            60,
            header,
        )?;
    }
    Ok(())
}

fn cmd_calibrate(args: &CalibrateArgs) -> Result<ExitCode> {
    let sweep = io::read_noise_sweep(&args.sweep)?;
    let omega_c = hz_to_angular(args.resonance_hz);
    let mut cal = calibration::fit_chain(&sweep, omega_c)?;
    cal.attenuation_db = args.attenuation_db;

    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("calibration.txt");
    {
        use std::io::Write;
        let header = OutputHeader::new().with_input(&args.sweep)?;
        let mut out = std::fs::File::create(&path)?;
        header.write_to(&mut out)?;
        writeln!(out, "[chain]")?;
        writeln!(out, "gain_db = {}", io::full_precision(cal.gain_db))?;
        writeln!(
            out,
            "added_noise_kelvin = {}",
            io::full_precision(cal.added_noise_kelvin)
        )?;
        writeln!(
            out,
            "attenuation_db = {}",
            io::full_precision(cal.attenuation_db)
        )?;
        writeln!(out, "resonance_hz = {}", io::full_precision(args.resonance_hz))?;
        writeln!(out, "n_points = {}", sweep.len())?;
    }
    println!(
        "G = {:.2} dB, S_amp = kB x {:.2} K ({} sweep points)",
        cal.gain_db,
        cal.added_noise_kelvin,
        sweep.len()
    );
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_geometry(args: &GeometryArgs, consts: &Constants) -> Result<ExitCode> {
    let cfg = Config::load(&args.config)?;
    let geom = geometry::CapacitorGeometry::new(
        cfg.get_f64("geometry.finger_width_w_m")?,
        cfg.get_f64("geometry.gap_s_m")?,
        cfg.get_f64("geometry.finger_length_p_m")?,
        cfg.get_f64("geometry.n_pairs")? as usize,
        cfg.get_f64("geometry.eps_substrate")?,
    )?;
    let geom = match cfg.get_f64_opt("geometry.area_s_m2")? {
        Some(area) => geom.with_area(area)?,
        None => geom,
    };

    let c = geometry::capacitance_with(&geom, consts);
    println!("period a = {:.3e} m", geom.period_a);
    println!("area S = {:.4e} m^2", geom.area_s);
    println!("capacitance C = {:.4e} F ({:.4} pF)", c, c / 1e-12);
    println!(
        "confinement depth a/2pi = {:.4e} m",
        geometry::confinement_depth(&geom)
    );

    let inductance = match cfg.get_f64_opt("circuit.inductance_l_h")? {
        Some(l) => Some(l),
        None => cfg
            .get_f64_opt("circuit.meander_length_m")?
            .map(|l| consts.mu_0 * l),
    };
    if let Some(l) = inductance {
        let circ = geometry::LumpedCircuit::new(l, c)?;
        println!(
            "LC resonance f = {:.6e} Hz ({:.4} GHz) at L = {:.3e} H",
            geometry::lc_resonance(&circ),
            geometry::lc_resonance(&circ) / 1e9,
            l
        );
    }

    if let Some(resolution) = args.bvp_resolution {
        let sol = geometry::laplace_bvp_solve(&geom, resolution)?;
        println!(
            "BVP: first-harmonic energy fraction = {:.4} ({} sweeps, residual {:.2e})",
            sol.energy_fraction_first_harmonic, sol.sweeps, sol.residual
        );
        println!(
            "BVP: numeric capacitance = {:.4e} F ({:+.2}% vs closed form)",
            sol.capacitance_numeric,
            100.0 * (sol.capacitance_numeric - c) / c
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_model_eval(args: &ModelEvalArgs, consts: &Constants) -> Result<ExitCode> {
    if args.detunings_mhz.is_empty() {
        return Err(Error::config("at least one detuning required (--detunings-mhz)"));
    }
    let sigma_z_th = match args.sigma_z_th {
        Some(v) => v,
        None => {
            let t = args.temperature_k.ok_or_else(|| {
                Error::config("provide --sigma-z-th or --temperature-k with --omega-c-ghz")
            })?;
            let f = args.omega_c_ghz.ok_or_else(|| {
                Error::config("provide --omega-c-ghz with --temperature-k")
            })?;
            let env = model::ThermalEnvironment::new(t)?;
            model::thermal_imbalance_with(hz_to_angular(f * 1e9), &env, consts)?
        }
    };
    let bath = BathParams::new(
        report::p0_from_table(args.p0_mhz_inv),
        hz_to_angular(args.g_khz * 1e3),
        hz_to_angular(args.gamma2_khz * 1e3),
        sigma_z_th,
    )?;
    // photon number to cooperativity with the gamma1 = 2 gamma2 tie
    let photon_to_coop = 2.0 * (bath.g() / bath.gamma2()).powi(2);
    let detunings_hz: Vec<f64> = args.detunings_mhz.iter().map(|d| d * 1e6).collect();
    let header = OutputHeader::new();
    report::write_model_eval(
        &args.out,
        &bath,
        photon_to_coop,
        &detunings_hz,
        (args.n_min, args.n_max),
        args.n_points,
        &header,
    )?;
    println!(
        "model grid written to {} (gamma_c0/2pi = {:.1} kHz)",
        args.out.display(),
        angular_to_hz(bath.gamma_c0()) / 1e3
    );
    let _ = TWO_PI;
    Ok(ExitCode::SUCCESS)
}
