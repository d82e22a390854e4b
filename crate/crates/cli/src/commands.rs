//! Subcommand implementations.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fs;
use std::path::{Path, PathBuf};

use qad_core::config::{ExperimentConfig, ZetaMode};
use qad_core::device::ReflectionSpectrum;
use qad_core::device::{
    cavity_modes, idt_array_factor, mirror_stopband_width, mode_coupling_weight, response_fwhm,
    stopband_interval, synchronous_frequency,
};
use qad_core::fitting::{
    extract_peaks, fit_anticrossing, fit_flux_spectroscopy, fit_lorentzian, Dataset,
    DatasetPayload, FitResult,
};
use qad_core::grid::linspace;
use qad_core::jc::{jc_dressed_levels, JcParams};
use qad_core::response::{
    anticrossing_map, apply_idt_envelope, two_tone_map, SpectroscopyMap, TransmissionTrace,
};
use qad_core::transmon::{spectrum_at_flux, zeta, FluxPoint};
use qad_core::zero_point::{
    coupling_estimate, drive_couplings, zero_point_displacement, zero_point_voltage,
};

use crate::csvio;
use crate::manifest::write_manifest;

pub struct RunContext {
    pub cfg: ExperimentConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
}

impl RunContext {
    fn prepare(&self, subcommand: &str) -> Result<()> {
        fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("creating {}", self.out_dir.display()))?;
        write_manifest(
            &self.out_dir.join("manifest.txt"),
            &self.cfg,
            subcommand,
            self.seed,
            self.threads,
        )
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Seeded multiplicative magnitude noise (approximately Gaussian via
    /// the Irwin-Hall sum), applied only when `noise.sigma_rel > 0`.
    fn noise_factors(&self, count: usize) -> Option<Vec<f64>> {
        if self.cfg.noise_sigma_rel <= 0.0 {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let sigma = self.cfg.noise_sigma_rel;
        Some(
            (0..count)
                .map(|_| {
                    let gauss: f64 = (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0;
                    1.0 + sigma * gauss
                })
                .collect(),
        )
    }

    fn apply_map_noise(&self, map: &mut SpectroscopyMap) {
        if let Some(factors) = self.noise_factors(map.x_axis.len() * map.y_axis.len()) {
            let mut k = 0;
            for column in map.values.iter_mut() {
                for z in column.iter_mut() {
                    *z *= factors[k];
                    k += 1;
                }
            }
        }
    }
}

pub fn run_device(ctx: &RunContext) -> Result<()> {
    ctx.prepare("device")?;
    let cfg = &ctx.cfg;
    let material = cfg.material()?;
    let cavity = cfg.cavity()?;

    let grid = linspace(
        cfg.device_f_start_hz,
        cfg.device_f_stop_hz,
        cfg.device_f_points,
    );
    let port: Vec<Complex64> = grid
        .iter()
        .map(|&f| idt_array_factor(&cavity.port_idts[0], &material, f))
        .collect::<qad_core::Result<_>>()?;
    let qubit: Vec<Complex64> = grid
        .iter()
        .map(|&f| idt_array_factor(&cavity.qubit_idt, &material, f))
        .collect::<qad_core::Result<_>>()?;
    let mirror = ReflectionSpectrum::sample(
        &cavity.left_mirror,
        &material,
        cfg.device_f_start_hz,
        cfg.device_f_stop_hz,
        cfg.device_f_points,
    )?;
    csvio::write_complex_spectrum(&ctx.path("port_idt_response.csv"), &grid, &port)?;
    csvio::write_complex_spectrum(&ctx.path("qubit_idt_response.csv"), &grid, &qubit)?;
    csvio::write_complex_spectrum(
        &ctx.path("mirror_reflection.csv"),
        &mirror.frequencies,
        &mirror.values,
    )?;

    let band = stopband_interval(&cavity.left_mirror, &material, 0.5)?;
    let modes = cavity_modes(&cavity, &material, band)?;
    let mode_rows: Vec<(usize, f64, f64)> = modes
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            mode_coupling_weight(&cavity.qubit_idt, &cavity, &material, f).map(|w| (i, f, w))
        })
        .collect::<qad_core::Result<_>>()?;
    csvio::write_modes(&ctx.path("modes.csv"), &mode_rows)?;

    let f_sync = synchronous_frequency(&material, cfg.port_period_m)?;
    let stopband = mirror_stopband_width(&cavity.left_mirror, &material)?;
    let port_mag: Vec<f64> = port.iter().map(|z| z.norm()).collect();
    let qubit_mag: Vec<f64> = qubit.iter().map(|z| z.norm()).collect();
    println!("synchronous_frequency_hz = {}", csvio::fmt(f_sync));
    println!("mirror_stopband_width_hz = {}", csvio::fmt(stopband));
    println!(
        "mode_search_band_hz = {} .. {}",
        csvio::fmt(band.0),
        csvio::fmt(band.1)
    );
    println!(
        "port_idt_fwhm_hz = {}",
        csvio::fmt(response_fwhm(&grid, &port_mag)?)
    );
    println!(
        "qubit_idt_fwhm_hz = {}",
        csvio::fmt(response_fwhm(&grid, &qubit_mag)?)
    );
    for (i, f, w) in &mode_rows {
        println!("mode {i}: f_hz = {} weight = {:.4}", csvio::fmt(*f), w);
    }
    Ok(())
}

pub fn run_transmon(ctx: &RunContext) -> Result<()> {
    ctx.prepare("transmon")?;
    let cfg = &ctx.cfg;
    let params = cfg.transmon_params()?;
    let grid = linspace(
        cfg.transmon_flux_start,
        cfg.transmon_flux_stop,
        cfg.transmon_flux_points,
    );
    let rows: Vec<(f64, f64, f64)> = grid
        .iter()
        .map(|&flux| {
            let spectrum = spectrum_at_flux(&params, FluxPoint::new(flux))?;
            Ok((flux, spectrum.e01(), spectrum.e12()))
        })
        .collect::<qad_core::Result<_>>()?;
    csvio::write_flux_levels(&ctx.path("transmon_levels.csv"), &rows)?;
    println!("rows = {}", rows.len());
    Ok(())
}

pub fn run_anticrossing(ctx: &RunContext) -> Result<()> {
    ctx.prepare("anticrossing")?;
    let cfg = &ctx.cfg;
    let sys = cfg.system()?;
    let dec = cfg.decoherence()?;
    let flux = linspace(
        cfg.anticrossing_flux_start,
        cfg.anticrossing_flux_stop,
        cfg.anticrossing_flux_points,
    );
    let f = linspace(
        cfg.anticrossing_f_start_hz,
        cfg.anticrossing_f_stop_hz,
        cfg.anticrossing_f_points,
    );
    let mut map = anticrossing_map(&sys, &dec, &flux, &f)?;
    if cfg.idt_filter {
        let material = cfg.material()?;
        let cavity = cfg.cavity()?;
        apply_idt_envelope(
            &mut map,
            &cavity.port_idts[0],
            &cavity.port_idts[1],
            &material,
        )?;
    }
    ctx.apply_map_noise(&mut map);
    csvio::write_map(&ctx.path("anticrossing_map.csv"), &map)?;

    // The probe-frequency cut at the flux closest to the crossing.
    let crossing = flux
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = spectrum_at_flux(&sys.transmon, FluxPoint::new(*a.1))
                .map(|s| (s.e01() - sys.f_r).abs())
                .unwrap_or(f64::INFINITY);
            let db = spectrum_at_flux(&sys.transmon, FluxPoint::new(*b.1))
                .map(|s| (s.e01() - sys.f_r).abs())
                .unwrap_or(f64::INFINITY);
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    let trace = TransmissionTrace::new(map.y_axis.clone(), map.values[crossing].clone())?;
    csvio::write_trace(&ctx.path("crossing_trace.csv"), &trace)?;

    // Dressed-level sweep over the same flux window: the level pattern the
    // map's branches trace out.
    let mut dressed_rows = Vec::new();
    for &fx in &flux {
        let fq = spectrum_at_flux(&sys.transmon, FluxPoint::new(fx))?.e01();
        let params = JcParams::new(sys.f_r, fq, sys.g, 4, 2)?;
        let levels = jc_dressed_levels(&params, &params.two_level_ladder())?;
        for (index, energy) in levels.energies.iter().enumerate() {
            dressed_rows.push((fq, index, *energy));
        }
    }
    csvio::write_dressed_levels(&ctx.path("dressed_levels.csv"), &dressed_rows)?;
    println!(
        "map = {} flux x {} frequency points (crossing cut at flux_ratio = {})",
        map.x_axis.len(),
        map.y_axis.len(),
        csvio::fmt(flux[crossing])
    );
    Ok(())
}

pub fn run_twotone(ctx: &RunContext) -> Result<()> {
    ctx.prepare("twotone")?;
    let cfg = &ctx.cfg;
    let sys = cfg.system()?;
    let dec = cfg.decoherence()?;
    let drv = cfg.drive_params()?;
    let flux = linspace(
        cfg.twotone_flux_start,
        cfg.twotone_flux_stop,
        cfg.twotone_flux_points,
    );
    let f2 = linspace(
        cfg.twotone_f2_start_hz,
        cfg.twotone_f2_stop_hz,
        cfg.twotone_f2_points,
    );
    let mut map = two_tone_map(&sys, &dec, &drv, &flux, &f2)?;
    ctx.apply_map_noise(&mut map);
    csvio::write_map(&ctx.path("twotone_map.csv"), &map)?;
    let flagged = map.flagged_columns.iter().filter(|&&b| b).count();
    println!(
        "map = {} flux x {} second-tone points ({} columns flagged non-dispersive)",
        map.x_axis.len(),
        map.y_axis.len(),
        flagged
    );
    Ok(())
}

pub fn run_estimate(ctx: &RunContext) -> Result<()> {
    ctx.prepare("estimate")?;
    let cfg = &ctx.cfg;
    let inputs = cfg.zero_point_inputs()?;
    let u0 = zero_point_displacement(&inputs.material, inputs.cavity_area)?;
    let v0 = zero_point_voltage(&inputs.material, u0)?;
    let g = coupling_estimate(inputs.zeta, v0)?;
    let drives = drive_couplings(&inputs, v0)?;
    let zeta_note = match cfg.zeta_mode {
        ZetaMode::Resonance => "(E_J at the resonance bias / 32 E_C)^(1/4)",
        ZetaMode::Maximal => "(E_J0 / 32 E_C)^(1/4)",
    };
    let zeta_max = zeta(cfg.ec_hz, cfg.ej0_hz)?;
    println!("quantity     value            derivation");
    println!(
        "u0_m         {}  sqrt(hbar / (2 rho A_c v))",
        csvio::fmt(u0.0)
    );
    println!("v0_v         {}  (e_pz/eps) u0", csvio::fmt(v0.0));
    println!("zeta         {}  {}", csvio::fmt(inputs.zeta), zeta_note);
    println!(
        "zeta_maximal {}  (E_J0 / 32 E_C)^(1/4)",
        csvio::fmt(zeta_max)
    );
    println!("g_hz         {}  zeta e v0 / h", csvio::fmt(g));
    println!("mu_ac_e      {}  C_IDT v0 / e", csvio::fmt(drives.mu_ac));
    println!("mu_el_e      {}  2 C_g / C_Sigma", csvio::fmt(drives.mu_el));
    println!("mu_ratio     {}  mu_ac / mu_el", csvio::fmt(drives.ratio));
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FitModel {
    Lorentzian,
    Anticrossing,
    Flux,
}

pub fn run_fit(ctx: &RunContext, input: &Path, model: FitModel, prominence: f64) -> Result<()> {
    ctx.prepare("fit")?;
    let meta = vec![
        ("source".to_string(), input.display().to_string()),
        ("model".to_string(), format!("{model:?}").to_lowercase()),
    ];
    match model {
        FitModel::Lorentzian => {
            let dataset = Dataset {
                payload: DatasetPayload::Trace(csvio::read_trace(input)?),
                meta,
            };
            let DatasetPayload::Trace(trace) = &dataset.payload else {
                unreachable!()
            };
            fit_trace_data(ctx, trace)
        }
        FitModel::Anticrossing => {
            let dataset = Dataset {
                payload: DatasetPayload::Map(csvio::read_map(input)?),
                meta,
            };
            let DatasetPayload::Map(map) = &dataset.payload else {
                unreachable!()
            };
            fit_map_data(ctx, map, prominence)
        }
        FitModel::Flux => fit_ridge_file(ctx, input),
    }
}

fn report(ctx: &RunContext, fit: &FitResult, residuals: &[(f64, f64)]) -> Result<()> {
    let rows: Vec<(String, f64, f64)> = fit
        .params
        .iter()
        .map(|p| (p.name.to_string(), p.value, p.stderr_proxy))
        .collect();
    csvio::write_fit_result(
        &ctx.path("fit_result.csv"),
        &rows,
        fit.residual_norm,
        fit.iterations,
        fit.converged,
    )?;
    csvio::write_residuals(&ctx.path("fit_residuals.csv"), residuals)?;
    for (name, value, stderr) in &rows {
        println!("{name} = {} +- {}", csvio::fmt(*value), csvio::fmt(*stderr));
    }
    println!(
        "converged = {} (residual_norm = {}, iterations = {})",
        fit.converged,
        csvio::fmt(fit.residual_norm),
        fit.iterations
    );
    if !fit.converged {
        bail!("fit did not converge");
    }
    Ok(())
}

fn fit_trace_data(ctx: &RunContext, trace: &TransmissionTrace) -> Result<()> {
    let fit = fit_lorentzian(trace, None)?;
    let center = fit.value("center").unwrap_or_default();
    let fwhm = fit.value("fwhm").unwrap_or_default();
    let amplitude = fit.value("amplitude").unwrap_or_default();
    let offset = fit.value("offset").unwrap_or_default();
    let residuals: Vec<(f64, f64)> = trace
        .f
        .iter()
        .zip(trace.t.iter())
        .map(|(&f, z)| {
            let hw = 0.5 * fwhm;
            let model = amplitude * hw * hw / ((f - center) * (f - center) + hw * hw) + offset;
            (f, model - z.norm_sqr())
        })
        .collect();
    report(ctx, &fit, &residuals)
}

fn map_branch_points(map: &SpectroscopyMap, prominence: f64) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (i, &flux) in map.x_axis.iter().enumerate() {
        let trace = TransmissionTrace::new(map.y_axis.clone(), map.values[i].clone())?;
        for peak in extract_peaks(&trace, prominence)? {
            points.push((flux, peak.frequency));
        }
    }
    Ok(points)
}

fn fit_map_data(ctx: &RunContext, map: &SpectroscopyMap, prominence: f64) -> Result<()> {
    let points = map_branch_points(map, prominence)?;
    if points.is_empty() {
        bail!("no branch points extracted from the map");
    }
    let transmon = ctx.cfg.transmon_params()?;
    let e01 = move |flux: f64| {
        spectrum_at_flux(&transmon, FluxPoint::new(flux))
            .map(|s| s.e01())
            .unwrap_or(f64::NAN)
    };
    let fit = fit_anticrossing(&points, e01, None)?;
    let g = fit.value("g").unwrap_or_default();
    let f0 = fit.value("f0").unwrap_or_default();
    let residuals: Vec<(f64, f64)> = points
        .iter()
        .map(|&(flux, f)| {
            let (upper, lower) = qad_core::jc::eq2_branches(f0, e01(flux), g);
            let du = f - upper;
            let dl = f - lower;
            (flux, if du.abs() < dl.abs() { du } else { dl })
        })
        .collect();
    report(ctx, &fit, &residuals)
}

fn fit_ridge_file(ctx: &RunContext, input: &Path) -> Result<()> {
    let points = csvio::read_ridge(input)?;
    let base = ctx.cfg.transmon_params()?;
    let fit = fit_flux_spectroscopy(&points, &base)?;
    let ec = fit.value("ec").ok_or_else(|| anyhow!("missing ec"))?;
    let ej0 = fit.value("ej0").ok_or_else(|| anyhow!("missing ej0"))?;
    let offset = fit.value("flux_offset").unwrap_or_default();
    let scale = fit.value("flux_period_scale").unwrap_or_default();
    let residuals: Vec<(f64, f64)> = points
        .iter()
        .map(|&(bias, e)| {
            let params = qad_core::transmon::TransmonParams {
                ec,
                ej0,
                charge_offset: base.charge_offset,
                charge_cutoff: base.charge_cutoff,
            };
            let flux = FluxPoint::new(scale * (bias - offset));
            let model = spectrum_at_flux(&params, flux)
                .map(|s| s.e01())
                .unwrap_or(f64::NAN);
            (bias, model - e)
        })
        .collect();
    report(ctx, &fit, &residuals)
}
