//! CSV writing and reading with deterministic formatting.
//!
//! All floats are emitted with 12 significant digits in scientific
//! notation so identical runs produce byte-identical files.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qad_core::response::{SpectroscopyMap, TransmissionTrace};
use std::fs;
use std::path::Path;

pub fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn write_complex_spectrum(path: &Path, f: &[f64], values: &[Complex64]) -> Result<()> {
    let mut out = String::from("f_hz,re,im\n");
    for (fi, z) in f.iter().zip(values.iter()) {
        out.push_str(&format!("{},{},{}\n", fmt(*fi), fmt(z.re), fmt(z.im)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_trace(path: &Path, trace: &TransmissionTrace) -> Result<()> {
    let mut out = String::from("f_hz,mag,phase_rad\n");
    for (fi, z) in trace.f.iter().zip(trace.t.iter()) {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt(*fi),
            fmt(z.norm()),
            fmt(z.arg())
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_map(path: &Path, map: &SpectroscopyMap) -> Result<()> {
    let mut out = String::from("flux_ratio,f_hz,mag,phase_rad\n");
    for (i, x) in map.x_axis.iter().enumerate() {
        for (y, z) in map.column(i) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt(*x),
                fmt(y),
                fmt(z.norm()),
                fmt(z.arg())
            ));
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_flux_levels(path: &Path, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut out = String::from("flux_ratio,e01_hz,e12_hz\n");
    for (flux, e01, e12) in rows {
        out.push_str(&format!("{},{},{}\n", fmt(*flux), fmt(*e01), fmt(*e12)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_dressed_levels(path: &Path, rows: &[(f64, usize, f64)]) -> Result<()> {
    let mut out = String::from("fq_hz,level_index,energy_hz\n");
    for (fq, index, energy) in rows {
        out.push_str(&format!("{},{},{}\n", fmt(*fq), index, fmt(*energy)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_modes(path: &Path, rows: &[(usize, f64, f64)]) -> Result<()> {
    let mut out = String::from("mode_index,f_hz,weight\n");
    for (idx, f, w) in rows {
        out.push_str(&format!("{},{},{}\n", idx, fmt(*f), fmt(*w)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_fit_result(
    path: &Path,
    params: &[(String, f64, f64)],
    residual_norm: f64,
    iterations: usize,
    converged: bool,
) -> Result<()> {
    let mut out = String::from("param,value,stderr_proxy\n");
    for (name, value, stderr) in params {
        out.push_str(&format!("{},{},{}\n", name, fmt(*value), fmt(*stderr)));
    }
    out.push_str(&format!("residual_norm,{},0e0\n", fmt(residual_norm)));
    out.push_str(&format!("iterations,{},0e0\n", fmt(iterations as f64)));
    out.push_str(&format!(
        "converged,{},0e0\n",
        fmt(if converged { 1.0 } else { 0.0 })
    ));
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn write_residuals(path: &Path, rows: &[(f64, f64)]) -> Result<()> {
    let mut out = String::from("x,residual\n");
    for (x, r) in rows {
        out.push_str(&format!("{},{}\n", fmt(*x), fmt(*r)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn parse_field(line: &str, field: &str, lineno: usize) -> Result<f64> {
    line.trim()
        .parse::<f64>()
        .with_context(|| format!("line {lineno}: bad {field} value '{line}'"))
}

/// Read a trace CSV: `f_hz,mag,phase_rad` or the magnitude-only `f_hz,mag`.
pub fn read_trace(path: &Path) -> Result<TransmissionTrace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        bail!("{}: empty file", path.display());
    };
    let with_phase = match header.trim() {
        "f_hz,mag,phase_rad" => true,
        "f_hz,mag" => false,
        other => bail!("{}: unsupported trace header '{other}'", path.display()),
    };
    let mut f = Vec::new();
    let mut t = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let expected = if with_phase { 3 } else { 2 };
        if cols.len() != expected {
            bail!(
                "{}: line {}: expected {} columns",
                path.display(),
                i + 1,
                expected
            );
        }
        f.push(parse_field(cols[0], "f_hz", i + 1)?);
        let mag = parse_field(cols[1], "mag", i + 1)?;
        let phase = if with_phase {
            parse_field(cols[2], "phase_rad", i + 1)?
        } else {
            0.0
        };
        t.push(Complex64::from_polar(mag, phase));
    }
    TransmissionTrace::new(f, t).map_err(Into::into)
}

/// Read a map CSV (`flux_ratio,f_hz,mag,phase_rad`) written column-major.
pub fn read_map(path: &Path) -> Result<SpectroscopyMap> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "flux_ratio,f_hz,mag,phase_rad" => {}
        Some((_, h)) => bail!("{}: unsupported map header '{h}'", path.display()),
        None => bail!("{}: empty file", path.display()),
    }
    let mut x_axis: Vec<f64> = Vec::new();
    let mut y_axis: Vec<f64> = Vec::new();
    let mut values: Vec<Vec<Complex64>> = Vec::new();
    let mut first_column = true;
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            bail!("{}: line {}: expected 4 columns", path.display(), i + 1);
        }
        let x = parse_field(cols[0], "flux_ratio", i + 1)?;
        let y = parse_field(cols[1], "f_hz", i + 1)?;
        let mag = parse_field(cols[2], "mag", i + 1)?;
        let phase = parse_field(cols[3], "phase_rad", i + 1)?;
        if x_axis.last() != Some(&x) {
            x_axis.push(x);
            values.push(Vec::new());
            first_column = x_axis.len() == 1;
        }
        if first_column {
            y_axis.push(y);
        }
        values
            .last_mut()
            .unwrap()
            .push(Complex64::from_polar(mag, phase));
    }
    if values.iter().any(|c| c.len() != y_axis.len()) {
        bail!("{}: ragged map columns", path.display());
    }
    let flagged = vec![false; x_axis.len()];
    Ok(SpectroscopyMap {
        x_axis,
        y_axis,
        values,
        flagged_columns: flagged,
    })
}

/// Read ridge points: `flux_ratio,e01_hz` with an optional trailing
/// `e12_hz` column (ignored).
pub fn read_ridge(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h))
            if h.trim() == "flux_ratio,e01_hz,e12_hz" || h.trim() == "flux_ratio,e01_hz" => {}
        Some((_, h)) => bail!("{}: unsupported ridge header '{h}'", path.display()),
        None => bail!("{}: empty file", path.display()),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 2 {
            bail!(
                "{}: line {}: expected at least 2 columns",
                path.display(),
                i + 1
            );
        }
        rows.push((
            parse_field(cols[0], "flux_ratio", i + 1)?,
            parse_field(cols[1], "e01_hz", i + 1)?,
        ));
    }
    Ok(rows)
}
