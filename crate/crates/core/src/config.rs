//! Experiment configuration: a flat-key structured-text format shared by
//! the library and the command line.
//!
//! Each line is `key = value`; `#` starts a comment line. Keys are dotted
//! paths with SI units suffixed in the last segment
//! (`device.idt_port.period_m = 980e-9`). Unknown keys are errors; missing
//! keys fall back to the built-in default device. Keys under `run.` are
//! accepted and ignored so a run manifest can be reloaded as a config.

use crate::device::{CavityGeometry, IdtGeometry, MaterialParams, MirrorGeometry};
use crate::error::{Error, Result};
use crate::response::{DecoherenceParams, DriveParams, SystemParams};
use crate::transmon::TransmonParams;
use crate::zero_point::ZeroPointInputs;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    // material
    pub saw_speed_mps: f64,
    pub density_kgm3: f64,
    pub piezo_module_vpm: f64,
    pub strip_reflectivity: f64,
    // device
    pub port_cells: usize,
    pub port_period_m: f64,
    pub port_electrodes_per_period: usize,
    pub port_electrode_width_m: f64,
    pub port_aperture_m: f64,
    pub qubit_cells: usize,
    pub qubit_period_m: f64,
    pub qubit_electrodes_per_period: usize,
    pub qubit_electrode_width_m: f64,
    pub qubit_aperture_m: f64,
    pub qubit_center_offset_m: f64,
    pub mirror_strips: usize,
    pub mirror_strip_period_m: f64,
    pub mirror_gap_m: f64,
    pub port_offset_m: f64,
    // transmon
    pub ec_hz: f64,
    pub ej0_hz: f64,
    pub charge_offset: f64,
    pub charge_cutoff: usize,
    pub squid_asymmetry: f64,
    // coupled system
    pub f0_hz: f64,
    pub g_hz: f64,
    // decoherence
    pub kappa_hz: f64,
    pub gamma1_hz: f64,
    pub gamma_phi_hz: f64,
    // drive
    pub omega_ac_hz: f64,
    pub omega_el_hz: f64,
    pub probe_f_hz: f64,
    // response options
    pub idt_filter: bool,
    // grids
    pub device_f_start_hz: f64,
    pub device_f_stop_hz: f64,
    pub device_f_points: usize,
    pub transmon_flux_start: f64,
    pub transmon_flux_stop: f64,
    pub transmon_flux_points: usize,
    pub anticrossing_flux_start: f64,
    pub anticrossing_flux_stop: f64,
    pub anticrossing_flux_points: usize,
    pub anticrossing_f_start_hz: f64,
    pub anticrossing_f_stop_hz: f64,
    pub anticrossing_f_points: usize,
    pub twotone_flux_start: f64,
    pub twotone_flux_stop: f64,
    pub twotone_flux_points: usize,
    pub twotone_f2_start_hz: f64,
    pub twotone_f2_stop_hz: f64,
    pub twotone_f2_points: usize,
    // zero-point estimate
    pub cavity_area_m2: f64,
    pub c_idt_f: f64,
    pub c_gate_f: f64,
    pub c_sigma_f: f64,
    pub zeta_mode: ZetaMode,
    // synthetic measurement noise (off by default)
    pub noise_sigma_rel: f64,
    // outputs
    pub output_dir: String,
}

/// Which Josephson energy enters the zeta prefactor of the coupling
/// estimate: the value at the flux bias where the qubit meets the resonator,
/// or the maximal (zero-flux) value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMode {
    Resonance,
    Maximal,
}

impl ZetaMode {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "resonance" => Ok(ZetaMode::Resonance),
            "maximal" => Ok(ZetaMode::Maximal),
            other => Err(Error::config(format!(
                "zero_point.zeta_mode must be 'resonance' or 'maximal', got '{other}'"
            ))),
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            ZetaMode::Resonance => "resonance",
            ZetaMode::Maximal => "maximal",
        }
    }
}

impl Default for ExperimentConfig {
    /// The measured device: 980 nm IDT period, 29-cell ports, an 18-cell
    /// three-electrode qubit IDT, 200-strip gratings separated by 110.7 um.
    fn default() -> Self {
        let p = 980e-9;
        Self {
            saw_speed_mps: 3160.0,
            density_kgm3: 2647.0,
            piezo_module_vpm: 2.0e9,
            strip_reflectivity: 0.02,
            port_cells: 29,
            port_period_m: p,
            port_electrodes_per_period: 2,
            port_electrode_width_m: p / 4.0,
            port_aperture_m: 100e-6,
            qubit_cells: 18,
            qubit_period_m: p,
            qubit_electrodes_per_period: 3,
            qubit_electrode_width_m: p / 6.0,
            qubit_aperture_m: 100e-6,
            qubit_center_offset_m: QUBIT_ALIGNMENT_OFFSET_M,
            mirror_strips: 200,
            mirror_strip_period_m: p / 2.0,
            mirror_gap_m: 110.7e-6,
            port_offset_m: 1.125 * p,
            ec_hz: 0.21e9,
            ej0_hz: 17.4e9,
            charge_offset: 0.0,
            charge_cutoff: 15,
            squid_asymmetry: 0.0,
            f0_hz: 3.176e9,
            g_hz: 13e6,
            kappa_hz: 0.332e6,
            gamma1_hz: 10e6,
            gamma_phi_hz: 0.0,
            omega_ac_hz: 0.05 * 0.332e6,
            omega_el_hz: 2e6,
            probe_f_hz: 3.176e9,
            idt_filter: false,
            device_f_start_hz: 3.10e9,
            device_f_stop_hz: 3.35e9,
            device_f_points: 2001,
            transmon_flux_start: -1.0,
            transmon_flux_stop: 1.0,
            transmon_flux_points: 401,
            anticrossing_flux_start: 0.355,
            anticrossing_flux_stop: 0.388,
            anticrossing_flux_points: 201,
            anticrossing_f_start_hz: 3.176e9 - 40e6,
            anticrossing_f_stop_hz: 3.176e9 + 40e6,
            anticrossing_f_points: 401,
            twotone_flux_start: 0.25,
            twotone_flux_stop: 0.45,
            twotone_flux_points: 101,
            twotone_f2_start_hz: 2.8e9,
            twotone_f2_stop_hz: 5.4e9,
            twotone_f2_points: 261,
            cavity_area_m2: 1.5e-8,
            c_idt_f: 98e-15,
            c_gate_f: 0.1e-15,
            c_sigma_f: 90e-15,
            zeta_mode: ZetaMode::Resonance,
            noise_sigma_rel: 0.0,
            output_dir: "out".to_string(),
        }
    }
}

/// Offset of the qubit IDT center from the cavity midpoint that puts its
/// three-electrode polarity pattern on the antinodes of the central cavity
/// mode of the default device. The phase center of the (+,-,-) cell lies
/// a sixth of a period away from the geometric cell center, and an offset
/// scan shows maxima repeating every half period from here.
pub const QUBIT_ALIGNMENT_OFFSET_M: f64 = -980e-9 / 6.0;

impl ExperimentConfig {
    /// Parse a config from text, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply `key = value` lines on top of the current values, without
    /// validating.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::config(format!(
                    "line {}: expected 'key = value', got '{line}'",
                    lineno + 1
                )));
            };
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    /// Set one key (also the entry point for `--set key=value` overrides).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if key.starts_with("run.") {
            return Ok(()); // manifest metadata, not configuration
        }
        let f = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| Error::config(format!("key '{key}': '{value}' is not a number")))
        };
        let u = || -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| Error::config(format!("key '{key}': '{value}' is not a count")))
        };
        match key {
            "material.saw_speed_mps" => self.saw_speed_mps = f()?,
            "material.density_kgm3" => self.density_kgm3 = f()?,
            "material.piezo_module_vpm" => self.piezo_module_vpm = f()?,
            "material.strip_reflectivity" => self.strip_reflectivity = f()?,
            "device.idt_port.cells" => self.port_cells = u()?,
            "device.idt_port.period_m" => self.port_period_m = f()?,
            "device.idt_port.electrodes_per_period" => self.port_electrodes_per_period = u()?,
            "device.idt_port.electrode_width_m" => self.port_electrode_width_m = f()?,
            "device.idt_port.aperture_m" => self.port_aperture_m = f()?,
            "device.qubit_idt.cells" => self.qubit_cells = u()?,
            "device.qubit_idt.period_m" => self.qubit_period_m = f()?,
            "device.qubit_idt.electrodes_per_period" => self.qubit_electrodes_per_period = u()?,
            "device.qubit_idt.electrode_width_m" => self.qubit_electrode_width_m = f()?,
            "device.qubit_idt.aperture_m" => self.qubit_aperture_m = f()?,
            "device.qubit_idt.center_offset_m" => self.qubit_center_offset_m = f()?,
            "device.mirror.strips" => self.mirror_strips = u()?,
            "device.mirror.strip_period_m" => self.mirror_strip_period_m = f()?,
            "device.mirror_gap_m" => self.mirror_gap_m = f()?,
            "device.port_offset_m" => self.port_offset_m = f()?,
            "transmon.ec_hz" => self.ec_hz = f()?,
            "transmon.ej0_hz" => self.ej0_hz = f()?,
            "transmon.charge_offset" => self.charge_offset = f()?,
            "transmon.charge_cutoff" => self.charge_cutoff = u()?,
            "transmon.squid_asymmetry" => self.squid_asymmetry = f()?,
            "system.f0_hz" => self.f0_hz = f()?,
            "system.g_hz" => self.g_hz = f()?,
            "decoherence.kappa_hz" => self.kappa_hz = f()?,
            "decoherence.gamma1_hz" => self.gamma1_hz = f()?,
            "decoherence.gamma_phi_hz" => self.gamma_phi_hz = f()?,
            "drive.omega_ac_hz" => self.omega_ac_hz = f()?,
            "drive.omega_el_hz" => self.omega_el_hz = f()?,
            "drive.probe_f_hz" => self.probe_f_hz = f()?,
            "response.idt_filter" => {
                self.idt_filter = match value {
                    "0" | "false" => false,
                    "1" | "true" => true,
                    other => {
                        return Err(Error::config(format!(
                            "key '{key}': '{other}' is not a boolean (use 0/1)"
                        )))
                    }
                }
            }
            "grids.device.f_start_hz" => self.device_f_start_hz = f()?,
            "grids.device.f_stop_hz" => self.device_f_stop_hz = f()?,
            "grids.device.points" => self.device_f_points = u()?,
            "grids.transmon.flux_start" => self.transmon_flux_start = f()?,
            "grids.transmon.flux_stop" => self.transmon_flux_stop = f()?,
            "grids.transmon.points" => self.transmon_flux_points = u()?,
            "grids.anticrossing.flux_start" => self.anticrossing_flux_start = f()?,
            "grids.anticrossing.flux_stop" => self.anticrossing_flux_stop = f()?,
            "grids.anticrossing.flux_points" => self.anticrossing_flux_points = u()?,
            "grids.anticrossing.f_start_hz" => self.anticrossing_f_start_hz = f()?,
            "grids.anticrossing.f_stop_hz" => self.anticrossing_f_stop_hz = f()?,
            "grids.anticrossing.f_points" => self.anticrossing_f_points = u()?,
            "grids.twotone.flux_start" => self.twotone_flux_start = f()?,
            "grids.twotone.flux_stop" => self.twotone_flux_stop = f()?,
            "grids.twotone.flux_points" => self.twotone_flux_points = u()?,
            "grids.twotone.f2_start_hz" => self.twotone_f2_start_hz = f()?,
            "grids.twotone.f2_stop_hz" => self.twotone_f2_stop_hz = f()?,
            "grids.twotone.f2_points" => self.twotone_f2_points = u()?,
            "zero_point.cavity_area_m2" => self.cavity_area_m2 = f()?,
            "zero_point.c_idt_f" => self.c_idt_f = f()?,
            "zero_point.c_gate_f" => self.c_gate_f = f()?,
            "zero_point.c_sigma_f" => self.c_sigma_f = f()?,
            "zero_point.zeta_mode" => self.zeta_mode = ZetaMode::parse(value)?,
            "noise.sigma_rel" => self.noise_sigma_rel = f()?,
            "outputs.dir" => self.output_dir = value.to_string(),
            other => {
                return Err(Error::config(format!("unknown key '{other}'")));
            }
        }
        Ok(())
    }

    /// Canonical text form carrying every key, reloadable by [`parse`].
    ///
    /// [`parse`]: ExperimentConfig::parse
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            out.push_str(&key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        }
        out
    }

    /// All keys with their current values, in canonical order.
    pub fn entries(&self) -> Vec<(String, String)> {
        fn e(v: f64) -> String {
            format!("{v:e}")
        }
        vec![
            ("material.saw_speed_mps".into(), e(self.saw_speed_mps)),
            ("material.density_kgm3".into(), e(self.density_kgm3)),
            ("material.piezo_module_vpm".into(), e(self.piezo_module_vpm)),
            (
                "material.strip_reflectivity".into(),
                e(self.strip_reflectivity),
            ),
            ("device.idt_port.cells".into(), self.port_cells.to_string()),
            ("device.idt_port.period_m".into(), e(self.port_period_m)),
            (
                "device.idt_port.electrodes_per_period".into(),
                self.port_electrodes_per_period.to_string(),
            ),
            (
                "device.idt_port.electrode_width_m".into(),
                e(self.port_electrode_width_m),
            ),
            ("device.idt_port.aperture_m".into(), e(self.port_aperture_m)),
            (
                "device.qubit_idt.cells".into(),
                self.qubit_cells.to_string(),
            ),
            ("device.qubit_idt.period_m".into(), e(self.qubit_period_m)),
            (
                "device.qubit_idt.electrodes_per_period".into(),
                self.qubit_electrodes_per_period.to_string(),
            ),
            (
                "device.qubit_idt.electrode_width_m".into(),
                e(self.qubit_electrode_width_m),
            ),
            (
                "device.qubit_idt.aperture_m".into(),
                e(self.qubit_aperture_m),
            ),
            (
                "device.qubit_idt.center_offset_m".into(),
                e(self.qubit_center_offset_m),
            ),
            (
                "device.mirror.strips".into(),
                self.mirror_strips.to_string(),
            ),
            (
                "device.mirror.strip_period_m".into(),
                e(self.mirror_strip_period_m),
            ),
            ("device.mirror_gap_m".into(), e(self.mirror_gap_m)),
            ("device.port_offset_m".into(), e(self.port_offset_m)),
            ("transmon.ec_hz".into(), e(self.ec_hz)),
            ("transmon.ej0_hz".into(), e(self.ej0_hz)),
            ("transmon.charge_offset".into(), e(self.charge_offset)),
            (
                "transmon.charge_cutoff".into(),
                self.charge_cutoff.to_string(),
            ),
            ("transmon.squid_asymmetry".into(), e(self.squid_asymmetry)),
            ("system.f0_hz".into(), e(self.f0_hz)),
            ("system.g_hz".into(), e(self.g_hz)),
            ("decoherence.kappa_hz".into(), e(self.kappa_hz)),
            ("decoherence.gamma1_hz".into(), e(self.gamma1_hz)),
            ("decoherence.gamma_phi_hz".into(), e(self.gamma_phi_hz)),
            ("drive.omega_ac_hz".into(), e(self.omega_ac_hz)),
            ("drive.omega_el_hz".into(), e(self.omega_el_hz)),
            ("drive.probe_f_hz".into(), e(self.probe_f_hz)),
            (
                "response.idt_filter".into(),
                if self.idt_filter { "1" } else { "0" }.to_string(),
            ),
            ("grids.device.f_start_hz".into(), e(self.device_f_start_hz)),
            ("grids.device.f_stop_hz".into(), e(self.device_f_stop_hz)),
            (
                "grids.device.points".into(),
                self.device_f_points.to_string(),
            ),
            (
                "grids.transmon.flux_start".into(),
                e(self.transmon_flux_start),
            ),
            (
                "grids.transmon.flux_stop".into(),
                e(self.transmon_flux_stop),
            ),
            (
                "grids.transmon.points".into(),
                self.transmon_flux_points.to_string(),
            ),
            (
                "grids.anticrossing.flux_start".into(),
                e(self.anticrossing_flux_start),
            ),
            (
                "grids.anticrossing.flux_stop".into(),
                e(self.anticrossing_flux_stop),
            ),
            (
                "grids.anticrossing.flux_points".into(),
                self.anticrossing_flux_points.to_string(),
            ),
            (
                "grids.anticrossing.f_start_hz".into(),
                e(self.anticrossing_f_start_hz),
            ),
            (
                "grids.anticrossing.f_stop_hz".into(),
                e(self.anticrossing_f_stop_hz),
            ),
            (
                "grids.anticrossing.f_points".into(),
                self.anticrossing_f_points.to_string(),
            ),
            (
                "grids.twotone.flux_start".into(),
                e(self.twotone_flux_start),
            ),
            ("grids.twotone.flux_stop".into(), e(self.twotone_flux_stop)),
            (
                "grids.twotone.flux_points".into(),
                self.twotone_flux_points.to_string(),
            ),
            (
                "grids.twotone.f2_start_hz".into(),
                e(self.twotone_f2_start_hz),
            ),
            (
                "grids.twotone.f2_stop_hz".into(),
                e(self.twotone_f2_stop_hz),
            ),
            (
                "grids.twotone.f2_points".into(),
                self.twotone_f2_points.to_string(),
            ),
            ("zero_point.cavity_area_m2".into(), e(self.cavity_area_m2)),
            ("zero_point.c_idt_f".into(), e(self.c_idt_f)),
            ("zero_point.c_gate_f".into(), e(self.c_gate_f)),
            ("zero_point.c_sigma_f".into(), e(self.c_sigma_f)),
            (
                "zero_point.zeta_mode".into(),
                self.zeta_mode.as_str().to_string(),
            ),
            ("noise.sigma_rel".into(), e(self.noise_sigma_rel)),
            ("outputs.dir".into(), self.output_dir.clone()),
        ]
    }

    /// Check every invariant by constructing the domain objects.
    pub fn validate(&self) -> Result<()> {
        self.material()?;
        self.cavity()?;
        self.transmon_params()?;
        self.decoherence()?;
        self.drive_params()?;
        self.zero_point_inputs()?;
        if self.squid_asymmetry != 0.0 {
            return Err(Error::config(
                "transmon.squid_asymmetry is reserved and must be 0",
            ));
        }
        if !(self.f0_hz > 0.0) {
            return Err(Error::config("system.f0_hz must be > 0"));
        }
        if self.g_hz < 0.0 {
            return Err(Error::config("system.g_hz must be >= 0"));
        }
        if self.noise_sigma_rel < 0.0 {
            return Err(Error::config("noise.sigma_rel must be >= 0"));
        }
        for (name, points) in [
            ("grids.device.points", self.device_f_points),
            ("grids.transmon.points", self.transmon_flux_points),
            (
                "grids.anticrossing.flux_points",
                self.anticrossing_flux_points,
            ),
            ("grids.anticrossing.f_points", self.anticrossing_f_points),
            ("grids.twotone.flux_points", self.twotone_flux_points),
            ("grids.twotone.f2_points", self.twotone_f2_points),
        ] {
            if points < 2 {
                return Err(Error::config(format!("{name} must be >= 2")));
            }
        }
        for (name, lo, hi) in [
            (
                "grids.device",
                self.device_f_start_hz,
                self.device_f_stop_hz,
            ),
            (
                "grids.anticrossing (frequency)",
                self.anticrossing_f_start_hz,
                self.anticrossing_f_stop_hz,
            ),
            (
                "grids.twotone (frequency)",
                self.twotone_f2_start_hz,
                self.twotone_f2_stop_hz,
            ),
        ] {
            if !(hi > lo) || !(lo > 0.0) {
                return Err(Error::config(format!(
                    "{name} must satisfy 0 < start < stop"
                )));
            }
        }
        Ok(())
    }

    pub fn material(&self) -> Result<MaterialParams> {
        MaterialParams::new(
            self.saw_speed_mps,
            self.density_kgm3,
            self.piezo_module_vpm,
            self.strip_reflectivity,
        )
    }

    pub fn port_idt(&self, center_position: f64) -> Result<IdtGeometry> {
        IdtGeometry::new(
            self.port_period_m,
            self.port_cells,
            self.port_electrodes_per_period,
            self.port_aperture_m,
            center_position,
            self.port_electrode_width_m,
        )
    }

    pub fn qubit_idt(&self) -> Result<IdtGeometry> {
        IdtGeometry::new(
            self.qubit_period_m,
            self.qubit_cells,
            self.qubit_electrodes_per_period,
            self.qubit_aperture_m,
            0.5 * self.mirror_gap_m + self.qubit_center_offset_m,
            self.qubit_electrode_width_m,
        )
    }

    /// Device layout with the left grating's inner edge at x = 0.
    pub fn cavity(&self) -> Result<CavityGeometry> {
        let left = MirrorGeometry::new(self.mirror_strip_period_m, self.mirror_strips, 0.0)?;
        let right = MirrorGeometry::new(
            self.mirror_strip_period_m,
            self.mirror_strips,
            self.mirror_gap_m,
        )?;
        let port_len = self.port_cells as f64 * self.port_period_m;
        let port_left = self.port_idt(self.port_offset_m + 0.5 * port_len)?;
        let port_right = self.port_idt(self.mirror_gap_m - self.port_offset_m - 0.5 * port_len)?;
        CavityGeometry::new(
            left,
            right,
            self.mirror_gap_m,
            [port_left, port_right],
            self.qubit_idt()?,
            self.port_offset_m,
        )
    }

    pub fn transmon_params(&self) -> Result<TransmonParams> {
        TransmonParams::new(
            self.ec_hz,
            self.ej0_hz,
            self.charge_offset,
            self.charge_cutoff,
        )
    }

    pub fn decoherence(&self) -> Result<DecoherenceParams> {
        DecoherenceParams::new(self.kappa_hz, self.gamma1_hz, self.gamma_phi_hz)
    }

    pub fn drive_params(&self) -> Result<DriveParams> {
        DriveParams::new(self.omega_ac_hz, self.omega_el_hz, self.probe_f_hz, None)
    }

    pub fn system(&self) -> Result<SystemParams> {
        Ok(SystemParams {
            transmon: self.transmon_params()?,
            f_r: self.f0_hz,
            g: self.g_hz,
        })
    }

    /// Zeta prefactor for the coupling estimate, resolved per `zeta_mode`.
    pub fn resolved_zeta(&self) -> Result<f64> {
        match self.zeta_mode {
            ZetaMode::Maximal => crate::transmon::zeta(self.ec_hz, self.ej0_hz),
            ZetaMode::Resonance => {
                // Josephson energy at the bias where E01 meets the resonator,
                // from inverting the asymptotic transition formula.
                let ej = (self.f0_hz + self.ec_hz) * (self.f0_hz + self.ec_hz) / (8.0 * self.ec_hz);
                crate::transmon::zeta(self.ec_hz, ej)
            }
        }
    }

    pub fn zero_point_inputs(&self) -> Result<ZeroPointInputs> {
        ZeroPointInputs::new(
            self.material()?,
            self.cavity_area_m2,
            self.resolved_zeta()?,
            self.c_idt_f,
            self.c_gate_f,
            self.c_sigma_f,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_the_default_device() {
        let cfg = ExperimentConfig::parse("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.port_cells, 29);
        assert_eq!(cfg.qubit_cells, 18);
        assert_eq!(cfg.mirror_strips, 200);
    }

    #[test]
    fn invalid_value_names_the_invariant() {
        let err = ExperimentConfig::parse("transmon.ec_hz = -1").unwrap_err();
        assert!(err.to_string().contains("ec"), "{err}");
    }

    #[test]
    fn unknown_key_is_an_error_with_line() {
        let err = ExperimentConfig::parse("\n\nnot.a.key = 3\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("not.a.key"), "{msg}");
    }

    #[test]
    fn round_trip_is_identical() {
        let cfg = ExperimentConfig::parse("system.g_hz = 11.5e6\noutputs.dir = data").unwrap();
        let text = cfg.serialize();
        let again = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn run_keys_are_ignored() {
        let cfg = ExperimentConfig::parse("run.version = 1.2.3\nrun.seed = 7").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
    }

    #[test]
    fn comments_and_blank_lines_ok() {
        let cfg = ExperimentConfig::parse("# a comment\n\nsystem.g_hz = 10e6\n").unwrap();
        assert_eq!(cfg.g_hz, 10e6);
    }

    #[test]
    fn default_validates() {
        ExperimentConfig::default().validate().unwrap();
    }
}
