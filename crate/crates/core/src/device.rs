//! Acoustic device model: IDT frequency responses, Bragg-mirror reflection,
//! cavity mode solving and mode-selective qubit coupling weights.
//!
//! Geometry is one-dimensional along the cavity axis; all lengths are in
//! meters and all frequencies in Hz. Mirrors are modeled as reflective
//! arrays of identical weak strip reflectors; IDTs as uniform arrays of
//! cells (the electrode element factor is neglected).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::linspace;

/// Substrate and metallization parameters of the acoustic medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// SAW propagation speed, m/s.
    pub saw_speed: f64,
    /// Substrate mass density, kg/m^3.
    pub density: f64,
    /// Piezoelectric module normalized to the dielectric constant, V/m.
    pub piezo_module: f64,
    /// Per-strip reflection magnitude of a grating stripe (dimensionless).
    pub strip_reflectivity: f64,
}

impl MaterialParams {
    pub fn new(
        saw_speed: f64,
        density: f64,
        piezo_module: f64,
        strip_reflectivity: f64,
    ) -> Result<Self> {
        if !(saw_speed > 0.0) {
            return Err(Error::invalid("material.saw_speed must be > 0"));
        }
        if !(density > 0.0) {
            return Err(Error::invalid("material.density must be > 0"));
        }
        if !(piezo_module > 0.0) {
            return Err(Error::invalid("material.piezo_module must be > 0"));
        }
        if !(strip_reflectivity > 0.0 && strip_reflectivity < 0.1) {
            return Err(Error::invalid(
                "material.strip_reflectivity must lie in (0, 0.1): the reflective-array \
                 model assumes weak per-strip reflection",
            ));
        }
        Ok(Self {
            saw_speed,
            density,
            piezo_module,
            strip_reflectivity,
        })
    }
}

/// Uniform interdigitated transducer described by its cell array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdtGeometry {
    /// Cell period p, m.
    pub period: f64,
    /// Number of periodic cells N_p.
    pub cells: usize,
    /// Electrodes per period (2 for port IDTs, 3 for the qubit IDT).
    pub electrodes_per_period: usize,
    /// Acoustic aperture W (electrode overlap length), m.
    pub aperture: f64,
    /// x-coordinate of the IDT center along the cavity axis, m.
    pub center_position: f64,
    /// Single-electrode width, m.
    pub electrode_width: f64,
}

impl IdtGeometry {
    pub fn new(
        period: f64,
        cells: usize,
        electrodes_per_period: usize,
        aperture: f64,
        center_position: f64,
        electrode_width: f64,
    ) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::invalid("idt.period must be > 0"));
        }
        if cells < 1 {
            return Err(Error::invalid("idt.cells must be >= 1"));
        }
        if electrodes_per_period != 2 && electrodes_per_period != 3 {
            return Err(Error::invalid("idt.electrodes_per_period must be 2 or 3"));
        }
        if !(aperture > 0.0) {
            return Err(Error::invalid("idt.aperture must be > 0"));
        }
        if !(electrode_width > 0.0) || electrode_width >= period / electrodes_per_period as f64 {
            return Err(Error::invalid(
                "idt.electrode_width must lie in (0, period / electrodes_per_period)",
            ));
        }
        Ok(Self {
            period,
            cells,
            electrodes_per_period,
            aperture,
            center_position,
            electrode_width,
        })
    }

    /// Total array length along the cavity axis, m.
    pub fn length(&self) -> f64 {
        self.cells as f64 * self.period
    }

    /// Leftmost coordinate of the cell array, m.
    pub fn start(&self) -> f64 {
        self.center_position - 0.5 * self.length()
    }

    /// Electrode center coordinates in array order, m.
    ///
    /// Electrodes are evenly spaced at `period / electrodes_per_period`
    /// with the first electrode centered half a pitch into the cell.
    pub fn electrode_positions(&self) -> Vec<f64> {
        let pitch = self.period / self.electrodes_per_period as f64;
        let x0 = self.start() + 0.5 * pitch;
        (0..self.cells * self.electrodes_per_period)
            .map(|j| x0 + pitch * j as f64)
            .collect()
    }
}

/// Bus polarity pattern of one IDT cell.
///
/// Two electrodes per period alternate hot/ground; for three electrodes per
/// period the default is one hot electrode followed by two grounded ones,
/// the reflection-suppressing split-electrode layout.
pub fn default_polarity(electrodes_per_period: usize) -> Vec<f64> {
    match electrodes_per_period {
        2 => vec![1.0, -1.0],
        _ => vec![1.0, -1.0, -1.0],
    }
}

/// Bragg grating described by its strip array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorGeometry {
    /// Strip period (half the IDT period for the fundamental stopband), m.
    pub strip_period: f64,
    /// Number of stripe electrodes N_s.
    pub strips: usize,
    /// x-coordinate of the grating edge facing the cavity, m.
    pub inner_edge_position: f64,
}

impl MirrorGeometry {
    pub fn new(strip_period: f64, strips: usize, inner_edge_position: f64) -> Result<Self> {
        if !(strip_period > 0.0) {
            return Err(Error::invalid("mirror.strip_period must be > 0"));
        }
        if strips < 1 {
            return Err(Error::invalid("mirror.strips must be >= 1"));
        }
        Ok(Self {
            strip_period,
            strips,
            inner_edge_position,
        })
    }

    /// Center of the fundamental stopband, Hz.
    pub fn bragg_frequency(&self, material: &MaterialParams) -> f64 {
        material.saw_speed / (2.0 * self.strip_period)
    }
}

/// Full cavity layout: two gratings facing each other with the port IDTs and
/// the qubit IDT in between.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityGeometry {
    pub left_mirror: MirrorGeometry,
    pub right_mirror: MirrorGeometry,
    /// Distance between the gratings' inner edges, m.
    pub mirror_gap: f64,
    pub port_idts: [IdtGeometry; 2],
    pub qubit_idt: IdtGeometry,
    /// Gap between a port IDT and the adjacent grating (d1), m.
    pub port_offset: f64,
}

impl CavityGeometry {
    pub fn new(
        left_mirror: MirrorGeometry,
        right_mirror: MirrorGeometry,
        mirror_gap: f64,
        port_idts: [IdtGeometry; 2],
        qubit_idt: IdtGeometry,
        port_offset: f64,
    ) -> Result<Self> {
        if !(mirror_gap > 0.0) {
            return Err(Error::invalid("cavity.mirror_gap must be > 0"));
        }
        let gap = right_mirror.inner_edge_position - left_mirror.inner_edge_position;
        if (gap - mirror_gap).abs() > 1e-12 {
            return Err(Error::invalid(
                "cavity: right inner edge minus left inner edge must equal mirror_gap",
            ));
        }
        let lo = left_mirror.inner_edge_position;
        let hi = right_mirror.inner_edge_position;
        for (name, idt) in [
            ("port_idts[0]", &port_idts[0]),
            ("port_idts[1]", &port_idts[1]),
            ("qubit_idt", &qubit_idt),
        ] {
            let a = idt.start();
            let b = idt.start() + idt.length();
            if !(a > lo && b < hi) {
                return Err(Error::invalid(format!(
                    "cavity: {name} must lie strictly between the mirrors' inner edges"
                )));
            }
        }
        Ok(Self {
            left_mirror,
            right_mirror,
            mirror_gap,
            port_idts,
            qubit_idt,
            port_offset,
        })
    }
}

/// Sampled complex reflection (or transduction) response.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSpectrum {
    pub frequencies: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl ReflectionSpectrum {
    /// Sample the clamped mirror reflection on `n` points of `[f_lo, f_hi]`.
    pub fn sample(
        geom: &MirrorGeometry,
        material: &MaterialParams,
        f_lo: f64,
        f_hi: f64,
        n: usize,
    ) -> Result<Self> {
        let frequencies = linspace(f_lo, f_hi, n);
        let values = frequencies
            .iter()
            .map(|&f| mirror_reflection(geom, material, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            frequencies,
            values,
        })
    }
}

/// Frequency at which the array period matches the SAW wavelength, v / p.
pub fn synchronous_frequency(material: &MaterialParams, period: f64) -> Result<f64> {
    if !(period > 0.0) {
        return Err(Error::invalid("synchronous_frequency: period must be > 0"));
    }
    Ok(material.saw_speed / period)
}

/// Normalized uniform array factor of an IDT at frequency `f`.
///
/// `A(f) = (1/N) sum_n exp(i 2 pi n (f - f0) p / v)` over the N cells, so
/// `|A| = 1` at the synchronous frequency `f0 = v / p`.
pub fn idt_array_factor(
    geom: &IdtGeometry,
    material: &MaterialParams,
    f: f64,
) -> Result<Complex64> {
    if !(f > 0.0) {
        return Err(Error::invalid("idt_array_factor: f must be > 0"));
    }
    let f0 = synchronous_frequency(material, geom.period)?;
    let phase_step = 2.0 * PI * (f - f0) * geom.period / material.saw_speed;
    let n = geom.cells;
    let sum: Complex64 = (0..n)
        .map(|k| Complex64::from_polar(1.0, phase_step * k as f64))
        .sum();
    Ok(sum / n as f64)
}

/// Unclamped reflective-array sum of a grating.
///
/// `r_s sum_n exp(-i 4 pi f n q / v)` with q the strip period; the n-th
/// strip sits n periods behind the inner edge, and the wave accrues the
/// round-trip phase to it.
fn mirror_array_sum(geom: &MirrorGeometry, material: &MaterialParams, f: f64) -> Complex64 {
    let phase_step = -4.0 * PI * f * geom.strip_period / material.saw_speed;
    let sum: Complex64 = (0..geom.strips)
        .map(|n| Complex64::from_polar(1.0, phase_step * n as f64))
        .sum();
    material.strip_reflectivity * sum
}

/// Complex reflection coefficient of a Bragg grating, referenced to its
/// inner edge.
///
/// The magnitude of the coherent array sum is saturated as
/// `|Gamma| = tanh(|sum|)` so the mirror stays passive in the strong-grating
/// limit; the phase is the argument of the unclamped sum.
pub fn mirror_reflection(
    geom: &MirrorGeometry,
    material: &MaterialParams,
    f: f64,
) -> Result<Complex64> {
    if !(f > 0.0) {
        return Err(Error::invalid("mirror_reflection: f must be > 0"));
    }
    let sum = mirror_array_sum(geom, material, f);
    let mag = sum.norm();
    if mag == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(Complex64::from_polar(mag.tanh(), sum.arg()))
}

/// Full width of the grating's main reflectivity maximum, measured between
/// the first nulls of the array sum on either side of the Bragg frequency.
pub fn mirror_stopband_width(geom: &MirrorGeometry, material: &MaterialParams) -> Result<f64> {
    let f_b = geom.bragg_frequency(material);
    // Expected null spacing v / (2 N q); scan at 1/50 of it.
    let null_scale = material.saw_speed / (2.0 * geom.strips as f64 * geom.strip_period);
    let step = null_scale / 50.0;
    let magnitude = |f: f64| mirror_array_sum(geom, material, f).norm();
    let left = first_minimum(&magnitude, f_b, -step)?;
    let right = first_minimum(&magnitude, f_b, step)?;
    Ok(right - left)
}

/// Walk from `start` in increments of `step` (sign gives the direction)
/// until a local minimum is bracketed, then refine by golden-section search.
fn first_minimum(f: &impl Fn(f64) -> f64, start: f64, step: f64) -> Result<f64> {
    let mut x_prev = start;
    let mut y_prev = f(start);
    let mut x_mid = start + step;
    let mut y_mid = f(x_mid);
    for _ in 0..100_000 {
        let x_next = x_mid + step;
        let y_next = f(x_next);
        if y_mid <= y_prev && y_mid <= y_next {
            let (a, b) = if step > 0.0 {
                (x_prev, x_next)
            } else {
                (x_next, x_prev)
            };
            return Ok(golden_minimum(f, a, b));
        }
        x_prev = x_mid;
        y_prev = y_mid;
        x_mid = x_next;
        y_mid = y_next;
    }
    Err(Error::numerical(
        "first_minimum: no local minimum found within the scan range",
    ))
}

fn golden_minimum(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Frequency interval around the Bragg frequency where the clamped mirror
/// reflectivity stays above `threshold`. This is the valid search band for
/// [`cavity_modes`] (whose round-trip model needs strongly reflective
/// mirrors).
pub fn stopband_interval(
    geom: &MirrorGeometry,
    material: &MaterialParams,
    threshold: f64,
) -> Result<(f64, f64)> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(
            "stopband_interval: threshold must be in (0, 1)",
        ));
    }
    let f_b = geom.bragg_frequency(material);
    let center = mirror_reflection(geom, material, f_b)?.norm();
    if center <= threshold {
        return Err(Error::invalid(
            "stopband_interval: reflectivity at the Bragg frequency is below the threshold",
        ));
    }
    let step = material.saw_speed / (2.0 * geom.strips as f64 * geom.strip_period) / 200.0;
    let crossing = |direction: f64| -> f64 {
        let mut f = f_b;
        loop {
            let next = f + direction * step;
            let mag = mirror_reflection(geom, material, next)
                .map(|g| g.norm())
                .unwrap_or(0.0);
            if mag < threshold {
                return f;
            }
            f = next;
        }
    };
    Ok((crossing(-1.0), crossing(1.0)))
}

/// Solve the round-trip resonance condition for a cavity bounded by two
/// reflectors with phase responses `arg_left` and `arg_right`.
///
/// A mode satisfies `4 pi f L / v - arg_left(f) - arg_right(f) = 2 pi m`;
/// with the e^{-ikx} phasor convention of [`mirror_reflection`] both mirror
/// phases enter with a minus sign (the round-trip factor is
/// `conj(G_L) conj(G_R) exp(i 4 pi f L / v)` on the unit circle).
///
/// Roots are located by sampling the unit-circle round-trip factor on a
/// uniform grid (at least 4096 points, at most 10 kHz spacing) and bisecting
/// sign changes of its imaginary part where the real part is positive.
pub fn round_trip_modes(
    arg_left: &impl Fn(f64) -> f64,
    arg_right: &impl Fn(f64) -> f64,
    gap: f64,
    speed: f64,
    band: (f64, f64),
) -> Result<Vec<f64>> {
    let (f_lo, f_hi) = band;
    if !(gap > 0.0) || !(speed > 0.0) {
        return Err(Error::invalid(
            "round_trip_modes: gap and speed must be > 0",
        ));
    }
    if !(f_hi > f_lo) || !(f_lo > 0.0) {
        return Err(Error::invalid(
            "round_trip_modes: band must be ascending and positive",
        ));
    }
    let circle = |f: f64| {
        let phase = 4.0 * PI * f * gap / speed - arg_left(f) - arg_right(f);
        Complex64::from_polar(1.0, phase)
    };
    let n_points = (4096usize).max(((f_hi - f_lo) / 1.0e4).ceil() as usize + 1);
    let grid = linspace(f_lo, f_hi, n_points);
    let values: Vec<Complex64> = grid.iter().map(|&f| circle(f)).collect();

    let mut modes = Vec::new();
    for i in 0..grid.len() - 1 {
        let (za, zb) = (values[i], values[i + 1]);
        if za.im == 0.0 && za.re > 0.0 && i == 0 {
            modes.push(grid[i]);
            continue;
        }
        if za.im * zb.im > 0.0 {
            continue;
        }
        if za.re <= 0.0 && zb.re <= 0.0 {
            // Crossing of the negative real axis: antiresonance, not a mode.
            continue;
        }
        let (mut a, mut b) = (grid[i], grid[i + 1]);
        let mut ya = circle(a).im;
        if ya == 0.0 {
            if circle(a).re > 0.0 {
                modes.push(a);
            }
            continue;
        }
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            let ym = circle(m).im;
            if ya * ym <= 0.0 {
                b = m;
            } else {
                a = m;
                ya = ym;
            }
        }
        let root = 0.5 * (a + b);
        if circle(root).re > 0.0 {
            modes.push(root);
        }
    }
    modes.dedup_by(|a, b| (*a - *b).abs() < 1.0);
    Ok(modes)
}

/// Cavity mode frequencies inside `band`, ascending.
///
/// Returns an empty list when no mode falls in the band.
pub fn cavity_modes(
    cav: &CavityGeometry,
    material: &MaterialParams,
    band: (f64, f64),
) -> Result<Vec<f64>> {
    let arg_left = |f: f64| mirror_array_sum(&cav.left_mirror, material, f).arg();
    let arg_right = |f: f64| mirror_array_sum(&cav.right_mirror, material, f).arg();
    round_trip_modes(
        &arg_left,
        &arg_right,
        cav.mirror_gap,
        material.saw_speed,
        band,
    )
}

/// Standing-wave amplitude of the mode at position `x`, with the antinode
/// pinned to the left mirror's effective reflection plane.
fn standing_wave(cav: &CavityGeometry, material: &MaterialParams, f: f64, x: f64) -> f64 {
    let k = 2.0 * PI * f / material.saw_speed;
    let theta = mirror_array_sum(&cav.left_mirror, material, f).arg();
    (k * (x - cav.left_mirror.inner_edge_position) - 0.5 * theta).cos()
}

/// Overlap of the qubit IDT's polarity pattern with the standing wave of a
/// cavity mode, normalized so 1 means the pattern is phased for maximum
/// coupling. Adjacent cavity modes place nodes at the electrodes and give
/// weights near 0.
pub fn mode_coupling_weight(
    qubit_idt: &IdtGeometry,
    cav: &CavityGeometry,
    material: &MaterialParams,
    f_mode: f64,
) -> Result<f64> {
    mode_coupling_weight_with(
        qubit_idt,
        cav,
        material,
        f_mode,
        &default_polarity(qubit_idt.electrodes_per_period),
    )
}

/// [`mode_coupling_weight`] with an explicit per-cell polarity pattern.
pub fn mode_coupling_weight_with(
    qubit_idt: &IdtGeometry,
    cav: &CavityGeometry,
    material: &MaterialParams,
    f_mode: f64,
    polarity: &[f64],
) -> Result<f64> {
    if !(f_mode > 0.0) {
        return Err(Error::invalid("mode_coupling_weight: f_mode must be > 0"));
    }
    if polarity.len() != qubit_idt.electrodes_per_period {
        return Err(Error::invalid(
            "mode_coupling_weight: polarity pattern length must equal electrodes_per_period",
        ));
    }
    let k = 2.0 * PI * f_mode / material.saw_speed;
    let positions = qubit_idt.electrode_positions();
    let mut overlap = 0.0;
    let mut pattern_response = Complex64::new(0.0, 0.0);
    for (j, &x) in positions.iter().enumerate() {
        let s = polarity[j % polarity.len()];
        overlap += s * standing_wave(cav, material, f_mode, x);
        pattern_response +=
            s * Complex64::from_polar(1.0, k * (x - cav.left_mirror.inner_edge_position));
    }
    let denom = pattern_response.norm();
    if denom == 0.0 {
        return Err(Error::invalid(
            "mode_coupling_weight: polarity pattern has zero response at this frequency",
        ));
    }
    Ok((overlap.abs() / denom).min(1.0))
}

/// Full width at half maximum of the power profile `magnitude^2`, linearly
/// interpolated between grid points.
pub fn response_fwhm(f: &[f64], magnitude: &[f64]) -> Result<f64> {
    if f.len() != magnitude.len() || f.len() < 3 {
        return Err(Error::invalid(
            "response_fwhm: need equal-length arrays with at least 3 samples",
        ));
    }
    let power: Vec<f64> = magnitude.iter().map(|m| m * m).collect();
    let (i_max, &p_max) = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    if i_max == 0 || i_max == power.len() - 1 {
        return Err(Error::invalid(
            "response_fwhm: maximum lies on the grid boundary",
        ));
    }
    let half = 0.5 * p_max;
    let crossing = |i: usize, j: usize| -> f64 {
        let (p0, p1) = (power[i], power[j]);
        let t = (half - p0) / (p1 - p0);
        f[i] + t * (f[j] - f[i])
    };
    let mut left = None;
    for i in (0..i_max).rev() {
        if power[i] <= half {
            left = Some(crossing(i, i + 1));
            break;
        }
    }
    let mut right = None;
    for (i, p) in power.iter().enumerate().skip(i_max + 1) {
        if *p <= half {
            right = Some(crossing(i, i - 1));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(Error::invalid(
            "response_fwhm: half-maximum crossing not bracketed by the grid",
        )),
    }
}
