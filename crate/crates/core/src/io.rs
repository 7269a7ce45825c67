//! CSV readers and writers for the measurement file formats.
//!
//! Three schemas, all with `#`-comment headers tolerated:
//!   traces:      `freq_hz,re_t,im_t[,sigma]`
//!   pump sweeps: `n_photons,pump_detuning_hz,shift_hz,gamma_i_hz[,sigma_shift_hz,sigma_gamma_hz]`
//!   noise data:  `temperature_k,psd_w_per_hz`
//!
//! Machine-readable outputs serialize numbers at full precision (17
//! significant digits) and carry a provenance header: tool version, input
//! hashes, and the seed in use.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::calibration::NoiseSweepPoint;
use crate::error::{Error, Result};
use crate::inference::{SweepDataset, SweepPoint};
use crate::spectroscopy::SpectrumTrace;

/// Full-precision float formatting for machine files.
pub fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

/// SHA-256 of a file, hex-encoded, for output provenance headers.
pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex_string(&hasher.finalize()))
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Provenance header written at the top of every output file.
pub struct OutputHeader<'a> {
    pub inputs: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub extra: Vec<(&'a str, String)>,
}

impl<'a> OutputHeader<'a> {
    pub fn new() -> Self {
        Self {
            inputs: Vec::new(),
            seed: None,
            extra: Vec::new(),
        }
    }

    pub fn with_input(mut self, path: &Path) -> Result<Self> {
        self.inputs
            .push((path.display().to_string(), file_sha256(path)?));
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn write_to(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# tlsbath {}", env!("CARGO_PKG_VERSION"))?;
        for (path, hash) in &self.inputs {
            writeln!(out, "# input {path} sha256={hash}")?;
        }
        if let Some(seed) = self.seed {
            writeln!(out, "# seed {seed}")?;
        }
        for (k, v) in &self.extra {
            writeln!(out, "# {k} {v}")?;
        }
        Ok(())
    }
}

impl<'a> Default for OutputHeader<'a> {
    fn default() -> Self {
        Self::new()
    }
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    Ok(csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn check_columns(
    headers: &csv::StringRecord,
    required: &[&str],
    optional: &[&str],
    path: &Path,
) -> Result<()> {
    let names: Vec<&str> = headers.iter().collect();
    for col in required {
        if !names.contains(col) {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("missing required column `{col}` (found: {names:?})"),
            });
        }
    }
    for name in &names {
        if !required.contains(name) && !optional.contains(name) {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("unknown column `{name}`"),
            });
        }
    }
    Ok(())
}

fn field(
    record: &csv::StringRecord,
    headers: &csv::StringRecord,
    name: &str,
    path: &Path,
    line: usize,
) -> Result<f64> {
    let idx = headers.iter().position(|h| h == name).unwrap();
    let raw = record.get(idx).unwrap_or("");
    raw.parse::<f64>().map_err(|_| Error::Parse {
        path: path.display().to_string(),
        line,
        message: format!("column `{name}`: not a number: `{raw}`"),
    })
}

fn field_opt(
    record: &csv::StringRecord,
    headers: &csv::StringRecord,
    name: &str,
    path: &Path,
    line: usize,
) -> Result<Option<f64>> {
    match headers.iter().position(|h| h == name) {
        None => Ok(None),
        Some(idx) => {
            let raw = record.get(idx).unwrap_or("");
            if raw.is_empty() {
                return Ok(None);
            }
            raw.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                path: path.display().to_string(),
                line,
                message: format!("column `{name}`: not a number: `{raw}`"),
            })
        }
    }
}

/// Read a complex transmission trace (`freq_hz,re_t,im_t[,sigma]`).
pub fn read_trace(path: &Path) -> Result<SpectrumTrace> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| parse_err(path, 1, &e))?.clone();
    check_columns(&headers, &["freq_hz", "re_t", "im_t"], &["sigma"], path)?;
    let mut freqs = Vec::new();
    let mut tx = Vec::new();
    let mut sigma = Vec::new();
    let has_sigma = headers.iter().any(|h| h == "sigma");
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, &e))?;
        freqs.push(field(&rec, &headers, "freq_hz", path, line)?);
        tx.push(Complex64::new(
            field(&rec, &headers, "re_t", path, line)?,
            field(&rec, &headers, "im_t", path, line)?,
        ));
        if has_sigma {
            sigma.push(
                field_opt(&rec, &headers, "sigma", path, line)?.ok_or_else(|| Error::Parse {
                    path: path.display().to_string(),
                    line,
                    message: "empty sigma".into(),
                })?,
            );
        }
    }
    if freqs.is_empty() {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "no data rows".into(),
        });
    }
    SpectrumTrace::new(freqs, tx, if has_sigma { Some(sigma) } else { None })
}

/// Read a pump-sweep dataset; the reference frequency is supplied by the
/// caller (config or flag), not the file.
pub fn read_sweep(path: &Path, omega_c_ref_hz: f64) -> Result<SweepDataset> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| parse_err(path, 1, &e))?.clone();
    check_columns(
        &headers,
        &["n_photons", "pump_detuning_hz", "shift_hz", "gamma_i_hz"],
        &["sigma_shift_hz", "sigma_gamma_hz"],
        path,
    )?;
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, &e))?;
        points.push(SweepPoint {
            n_photons: field(&rec, &headers, "n_photons", path, line)?,
            detuning_hz: field(&rec, &headers, "pump_detuning_hz", path, line)?,
            shift_hz: field(&rec, &headers, "shift_hz", path, line)?,
            gamma_i_hz: field(&rec, &headers, "gamma_i_hz", path, line)?,
            sigma_shift_hz: field_opt(&rec, &headers, "sigma_shift_hz", path, line)?,
            sigma_gamma_hz: field_opt(&rec, &headers, "sigma_gamma_hz", path, line)?,
        });
    }
    if points.is_empty() {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "no data rows".into(),
        });
    }
    SweepDataset::new(points, omega_c_ref_hz)
}

/// Read a noise thermometry sweep (`temperature_k,psd_w_per_hz`).
pub fn read_noise_sweep(path: &Path) -> Result<Vec<NoiseSweepPoint>> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| parse_err(path, 1, &e))?.clone();
    check_columns(&headers, &["temperature_k", "psd_w_per_hz"], &[], path)?;
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, &e))?;
        points.push(NoiseSweepPoint::new(
            field(&rec, &headers, "temperature_k", path, line)?,
            field(&rec, &headers, "psd_w_per_hz", path, line)?,
        )?);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "no data rows".into(),
        });
    }
    Ok(points)
}

fn parse_err(path: &Path, line: usize, err: &dyn std::fmt::Display) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: err.to_string(),
    }
}

/// Write a trace CSV (used by synthetic-data generation and tests).
pub fn write_trace(path: &Path, trace: &SpectrumTrace, header: &OutputHeader) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    header.write_to(&mut out)?;
    match trace.sigma() {
        Some(sigma) => {
            writeln!(out, "freq_hz,re_t,im_t,sigma")?;
            for ((f, t), s) in trace
                .freqs_hz()
                .iter()
                .zip(trace.transmission())
                .zip(sigma)
            {
                writeln!(
                    out,
                    "{},{},{},{}",
                    full_precision(*f),
                    full_precision(t.re),
                    full_precision(t.im),
                    full_precision(*s)
                )?;
            }
        }
        None => {
            writeln!(out, "freq_hz,re_t,im_t")?;
            for (f, t) in trace.freqs_hz().iter().zip(trace.transmission()) {
                writeln!(
                    out,
                    "{},{},{}",
                    full_precision(*f),
                    full_precision(t.re),
                    full_precision(t.im)
                )?;
            }
        }
    }
    Ok(())
}

/// Write a sweep CSV.
pub fn write_sweep(path: &Path, dataset: &SweepDataset, header: &OutputHeader) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    header.write_to(&mut out)?;
    let has_sigma = dataset
        .points
        .iter()
        .all(|p| p.sigma_shift_hz.is_some() && p.sigma_gamma_hz.is_some());
    if has_sigma {
        writeln!(
            out,
            "n_photons,pump_detuning_hz,shift_hz,gamma_i_hz,sigma_shift_hz,sigma_gamma_hz"
        )?;
    } else {
        writeln!(out, "n_photons,pump_detuning_hz,shift_hz,gamma_i_hz")?;
    }
    for p in &dataset.points {
        if has_sigma {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                full_precision(p.n_photons),
                full_precision(p.detuning_hz),
                full_precision(p.shift_hz),
                full_precision(p.gamma_i_hz),
                full_precision(p.sigma_shift_hz.unwrap()),
                full_precision(p.sigma_gamma_hz.unwrap())
            )?;
        } else {
            writeln!(
                out,
                "{},{},{},{}",
                full_precision(p.n_photons),
                full_precision(p.detuning_hz),
                full_precision(p.shift_hz),
                full_precision(p.gamma_i_hz)
            )?;
        }
    }
    Ok(())
}
