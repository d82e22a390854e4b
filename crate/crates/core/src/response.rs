//! Steady-state complex transmission through the coupled cavity-qubit
//! system: an analytic weak-probe formula, a Lindblad steady-state solver
//! that serves as its numerical oracle, and the anticrossing / two-tone
//! map generators.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::device::{idt_array_factor, IdtGeometry, MaterialParams};
use crate::error::{Error, Result};
use crate::jc::{dispersive_shift, JcParams};
use crate::lindblad;
use crate::transmon::{spectrum_at_flux, FluxPoint, TransmonParams};

/// Decoherence rates, all as linear-frequency FWHM-style rates in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceParams {
    /// Cavity linewidth kappa (FWHM of the bare power peak).
    pub kappa: f64,
    /// Qubit relaxation rate Gamma_1.
    pub gamma1: f64,
    /// Pure dephasing rate Gamma_phi.
    pub gamma_phi: f64,
}

impl DecoherenceParams {
    pub fn new(kappa: f64, gamma1: f64, gamma_phi: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::invalid("decoherence.kappa must be > 0"));
        }
        if gamma1 < 0.0 || gamma_phi < 0.0 {
            return Err(Error::invalid(
                "decoherence.gamma1 and gamma_phi must be >= 0",
            ));
        }
        Ok(Self {
            kappa,
            gamma1,
            gamma_phi,
        })
    }

    /// Total transverse relaxation rate `gamma_2 = gamma_1 + 2 gamma_phi`.
    pub fn gamma2(&self) -> f64 {
        self.gamma1 + 2.0 * self.gamma_phi
    }
}

/// Drive amplitudes and tone frequencies, Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Acoustic (cavity) drive amplitude Omega_ac.
    pub omega_ac: f64,
    /// Electric (qubit) drive amplitude Omega_el.
    pub omega_el: f64,
    /// First-tone (probe) frequency.
    pub probe_f: f64,
    /// Second-tone frequency, when a two-tone drive is configured.
    pub second_tone_f: Option<f64>,
}

impl DriveParams {
    pub fn new(
        omega_ac: f64,
        omega_el: f64,
        probe_f: f64,
        second_tone_f: Option<f64>,
    ) -> Result<Self> {
        if omega_ac < 0.0 || omega_el < 0.0 {
            return Err(Error::invalid("drive amplitudes must be >= 0"));
        }
        Ok(Self {
            omega_ac,
            omega_el,
            probe_f,
            second_tone_f,
        })
    }
}

/// Sampled complex transmission over a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionTrace {
    pub f: Vec<f64>,
    pub t: Vec<Complex64>,
}

impl TransmissionTrace {
    pub fn new(f: Vec<f64>, t: Vec<Complex64>) -> Result<Self> {
        if f.len() != t.len() {
            return Err(Error::invalid("trace: arrays must have equal length"));
        }
        if f.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "trace: frequencies must be strictly ascending",
            ));
        }
        Ok(Self { f, t })
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.t.iter().map(|z| z.norm()).collect()
    }
}

/// One computed map column with its dispersive-validity flag.
type MapColumn = (Vec<Complex64>, bool);

/// Complex-valued map over a (flux, frequency) grid, stored column-major:
/// `values[i][j]` belongs to `(x_axis[i], y_axis[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectroscopyMap {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
    /// Columns where a model precondition (dispersive validity) was violated.
    pub flagged_columns: Vec<bool>,
}

impl SpectroscopyMap {
    fn assemble(x_axis: Vec<f64>, y_axis: Vec<f64>, columns: Vec<MapColumn>) -> Result<Self> {
        if columns.len() != x_axis.len() || columns.iter().any(|(c, _)| c.len() != y_axis.len()) {
            return Err(Error::invalid("map: column dimensions do not match axes"));
        }
        let mut values = Vec::with_capacity(columns.len());
        let mut flagged = Vec::with_capacity(columns.len());
        for (col, flag) in columns {
            values.push(col);
            flagged.push(flag);
        }
        Ok(Self {
            x_axis,
            y_axis,
            values,
            flagged_columns: flagged,
        })
    }

    /// Trace of one column as (y, value) pairs.
    pub fn column(&self, i: usize) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.y_axis
            .iter()
            .copied()
            .zip(self.values[i].iter().copied())
    }
}

/// The coupled device as seen by the response generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub transmon: TransmonParams,
    /// Resonator mode frequency f_r, Hz.
    pub f_r: f64,
    /// Qubit-resonator coupling g, Hz.
    pub g: f64,
}

/// Weak-probe steady-state transmission coefficient.
///
/// `t(f) = (kappa/2) / (i (f0 - f) + kappa/2 + g^2 / (i (fq - f) + gamma2/2))`,
/// normalized so `|t| = 1` at `f = f0` for `g = 0`. The expression is the
/// input-output result for the rotating-wave Hamiltonian with a symmetric
/// two-port cavity; it is drive-amplitude independent.
pub fn linear_transmission(f: f64, f0: f64, fq: f64, g: f64, dec: &DecoherenceParams) -> Complex64 {
    let half_kappa = Complex64::new(0.5 * dec.kappa, 0.0);
    let cavity = Complex64::new(0.5 * dec.kappa, f0 - f);
    if g == 0.0 {
        return half_kappa / cavity;
    }
    let qubit = Complex64::new(0.5 * dec.gamma2(), fq - f);
    if qubit.norm() == 0.0 {
        // Lossless qubit exactly on resonance absorbs the probe completely.
        return Complex64::new(0.0, 0.0);
    }
    half_kappa / (cavity + Complex64::new(g * g, 0.0) / qubit)
}

/// Steady-state transmission from the full Lindblad equation in the frame
/// rotating at the probe, `t = i kappa <b> / Omega_ac` (so the bare-cavity
/// on-resonance value is 1).
///
/// This is the numerical oracle for [`linear_transmission`]: exact in the
/// drive amplitude and qubit saturation, converged in the Fock truncation
/// (an error is returned when growing `n_phonon_max` by 2 moves the result
/// by more than 1e-3).
pub fn lindblad_steady_state_transmission(
    params: &JcParams,
    qubit_energies: &[f64],
    dec: &DecoherenceParams,
    drv: &DriveParams,
) -> Result<Complex64> {
    let t = lindblad_transmission_unchecked(params, qubit_energies, dec, drv)?;
    let bigger = JcParams {
        n_phonon_max: params.n_phonon_max + 2,
        ..*params
    };
    let t_check = lindblad_transmission_unchecked(&bigger, qubit_energies, dec, drv)?;
    if (t - t_check).norm() > 1e-3 {
        return Err(Error::convergence(format!(
            "lindblad transmission not converged: |t({}) - t({})| = {:.2e}",
            params.n_phonon_max,
            params.n_phonon_max + 2,
            (t - t_check).norm()
        )));
    }
    Ok(t)
}

/// Single steady-state solve at `params.n_phonon_max`, without the
/// truncation cross-check of [`lindblad_steady_state_transmission`].
pub fn lindblad_transmission_unchecked(
    params: &JcParams,
    qubit_energies: &[f64],
    dec: &DecoherenceParams,
    drv: &DriveParams,
) -> Result<Complex64> {
    let n_phonon_max = params.n_phonon_max;
    if !(drv.omega_ac > 0.0) {
        return Err(Error::invalid(
            "lindblad transmission: omega_ac must be > 0 for normalization",
        ));
    }
    if qubit_energies.len() != params.qubit_levels {
        return Err(Error::invalid(
            "lindblad transmission: qubit_energies length must equal qubit_levels",
        ));
    }
    let q = params.qubit_levels;
    let n_ph = n_phonon_max + 1;
    let f_p = drv.probe_f;

    let b_small = lindblad::annihilation(n_phonon_max);
    let s_small = lindblad::ladder_lowering(q);
    let eye_q = nalgebra::DMatrix::<Complex64>::identity(q, q);
    let eye_ph = nalgebra::DMatrix::<Complex64>::identity(n_ph, n_ph);

    // Product-space operators, qubit factor first to match the |k, n> basis.
    let b = lindblad::kron(&eye_q, &b_small);
    let s_minus = lindblad::kron(&s_small, &eye_ph);
    let n_op = b.adjoint() * &b;

    // Rotating frame at the probe: each qubit level k shifts by -k f_p.
    let mut h = &n_op * Complex64::new(params.f_r - f_p, 0.0);
    for (k, energy) in qubit_energies.iter().enumerate() {
        let shifted = energy - k as f64 * f_p;
        for n in 0..n_ph {
            let i = k * n_ph + n;
            h[(i, i)] += Complex64::new(shifted, 0.0);
        }
    }
    let coupling = s_minus.adjoint() * &b;
    h += (&coupling + coupling.adjoint()) * Complex64::new(params.g, 0.0);
    h += (&b + b.adjoint()) * Complex64::new(0.5 * drv.omega_ac, 0.0);
    if drv.omega_el > 0.0 {
        h += (&s_minus + s_minus.adjoint()) * Complex64::new(0.5 * drv.omega_el, 0.0);
    }

    let mut collapse: Vec<(f64, nalgebra::DMatrix<Complex64>)> = vec![(dec.kappa, b.clone())];
    if dec.gamma1 > 0.0 {
        collapse.push((dec.gamma1, s_minus.clone()));
    }
    if dec.gamma_phi > 0.0 {
        let dephase = lindblad::kron(&lindblad::number_diagonal(q), &eye_ph);
        collapse.push((2.0 * dec.gamma_phi, dephase));
    }

    let rho = lindblad::steady_state(&h, &collapse)?;
    let b_avg = lindblad::expectation(&rho, &b);
    Ok(Complex64::new(0.0, dec.kappa) * b_avg / drv.omega_ac)
}

/// Transmission versus probe frequency and flux around the anticrossing:
/// each flux column uses the charge-basis qubit frequency at that bias and
/// evaluates [`linear_transmission`] over the probe grid.
pub fn anticrossing_map(
    sys: &SystemParams,
    dec: &DecoherenceParams,
    flux_grid: &[f64],
    f_grid: &[f64],
) -> Result<SpectroscopyMap> {
    if flux_grid.is_empty() || f_grid.is_empty() {
        return Err(Error::invalid("anticrossing_map: grids must be non-empty"));
    }
    let columns: Vec<Result<MapColumn>> = flux_grid
        .par_iter()
        .map(|&flux| {
            let spectrum = spectrum_at_flux(&sys.transmon, FluxPoint::new(flux))?;
            let fq = spectrum.e01();
            let col = f_grid
                .iter()
                .map(|&f| linear_transmission(f, sys.f_r, fq, sys.g, dec))
                .collect();
            Ok((col, false))
        })
        .collect();
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    SpectroscopyMap::assemble(flux_grid.to_vec(), f_grid.to_vec(), columns)
}

/// Scale a transmission map by the port-IDT transduction envelope,
/// `|A_in(f) A_out(f)|` over the probe-frequency axis.
///
/// Optional wideband realism: the anticrossing features sit well inside
/// the IDT band, so sweeps are generated unfiltered by default.
pub fn apply_idt_envelope(
    map: &mut SpectroscopyMap,
    idt_in: &IdtGeometry,
    idt_out: &IdtGeometry,
    material: &MaterialParams,
) -> Result<()> {
    let envelope: Vec<f64> = map
        .y_axis
        .iter()
        .map(|&f| {
            Ok(idt_array_factor(idt_in, material, f)?.norm()
                * idt_array_factor(idt_out, material, f)?.norm())
        })
        .collect::<Result<_>>()?;
    for column in map.values.iter_mut() {
        for (z, env) in column.iter_mut().zip(envelope.iter()) {
            *z *= *env;
        }
    }
    Ok(())
}

/// Steady-state populations of a driven qubit transition under the
/// saturation formula; `x = Omega^2 / (gamma1 gamma2)` and `delta` is the
/// tone detuning from the transition. Saturates at 1/2.
fn saturated_population(x: f64, delta: f64, gamma2: f64) -> f64 {
    x / (1.0 + 4.0 * delta * delta / (gamma2 * gamma2) + 2.0 * x)
}

/// Two-tone spectroscopy map: phase shift of the first (probe) tone versus
/// flux and second-tone frequency.
///
/// Each entry is the complex ratio `t(probe | driven populations) /
/// t(probe | ground state)`, so its argument is the observable phase shift.
/// The qubit is modeled with three levels: the second tone populates level 1
/// via the saturation formula, a cascaded stage populates level 2 with the
/// sqrt(2)-scaled coupling, and each level pulls the cavity by its dispersive
/// shift. Columns where the dispersive condition `|E01 - f0| > 3 g` fails
/// are flagged, not errored.
pub fn two_tone_map(
    sys: &SystemParams,
    dec: &DecoherenceParams,
    drv: &DriveParams,
    flux_grid: &[f64],
    f2_grid: &[f64],
) -> Result<SpectroscopyMap> {
    if flux_grid.is_empty() || f2_grid.is_empty() {
        return Err(Error::invalid("two_tone_map: grids must be non-empty"));
    }
    if drv.omega_el > 0.0 && !(dec.gamma1 > 0.0) {
        return Err(Error::invalid(
            "two_tone_map: gamma1 must be > 0 when the second tone is driven",
        ));
    }
    let f0 = sys.f_r;
    let gamma2 = dec.gamma2();
    let x1 = if drv.omega_el > 0.0 {
        drv.omega_el * drv.omega_el / (dec.gamma1 * gamma2)
    } else {
        0.0
    };
    let x2 = 2.0 * x1; // sqrt(2)-scaled coupling on the 1 -> 2 transition

    let columns: Vec<Result<MapColumn>> = flux_grid
        .par_iter()
        .map(|&flux| {
            let spectrum = spectrum_at_flux(&sys.transmon, FluxPoint::new(flux))?;
            let e01 = spectrum.e01();
            let e12 = spectrum.e12();
            let flagged =
                (e01 - f0).abs() <= 3.0 * sys.g || (e12 - f0).abs() <= 3.0 * 2f64.sqrt() * sys.g;
            let chi01 = if e01 == f0 {
                0.0
            } else {
                dispersive_shift(e01, f0, sys.g).expect("nonzero detuning")
            };
            let chi12 = if e12 == f0 {
                0.0
            } else {
                dispersive_shift(e12, f0, 2f64.sqrt() * sys.g).expect("nonzero detuning")
            };
            // Cavity center for qubit level k, from second-order pulls.
            let centers = [f0 - chi01, f0 + chi01 - chi12, f0 + chi12];
            let probe = drv.probe_f;
            let lorentz = |fc: f64| {
                Complex64::new(0.5 * dec.kappa, 0.0) / Complex64::new(0.5 * dec.kappa, fc - probe)
            };
            let t_ground = lorentz(centers[0]);
            let col = f2_grid
                .iter()
                .map(|&f2| {
                    if x1 == 0.0 {
                        return Complex64::new(1.0, 0.0);
                    }
                    let p1_raw = saturated_population(x1, f2 - e01, gamma2);
                    let frac2 = saturated_population(x2, f2 - e12, gamma2);
                    let p2 = p1_raw * frac2;
                    let p1 = p1_raw - p2;
                    let p0 = 1.0 - p1 - p2;
                    let t = p0 * t_ground + p1 * lorentz(centers[1]) + p2 * lorentz(centers[2]);
                    t / t_ground
                })
                .collect();
            Ok((col, flagged))
        })
        .collect();
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    SpectroscopyMap::assemble(flux_grid.to_vec(), f2_grid.to_vec(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn dec() -> DecoherenceParams {
        DecoherenceParams::new(0.332e6, 10e6, 0.0).unwrap()
    }

    #[test]
    fn bare_peak_is_unity() {
        let t = linear_transmission(3.176e9, 3.176e9, 3.0e9, 0.0, &dec());
        assert_abs_diff_eq!(t.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bare_power_fwhm_is_kappa() {
        let d = dec();
        let f0 = 3.176e9;
        let f = linspace(f0 - 2e6, f0 + 2e6, 4001);
        let mag: Vec<f64> = f
            .iter()
            .map(|&fi| linear_transmission(fi, f0, 3.0e9, 0.0, &d).norm())
            .collect();
        let fwhm = crate::device::response_fwhm(&f, &mag).unwrap();
        assert_abs_diff_eq!(fwhm, d.kappa, epsilon = 1.1e3);
    }

    #[test]
    fn resonant_doublet_split_by_about_2g() {
        let d = dec();
        let (f0, g) = (3.176e9, 13e6);
        let f = linspace(f0 - 40e6, f0 + 40e6, 8001);
        let mag: Vec<f64> = f
            .iter()
            .map(|&fi| linear_transmission(fi, f0, f0, g, &d).norm())
            .collect();
        // Peak on each side of f0.
        let lower_idx = mag
            .iter()
            .enumerate()
            .take(4000)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let upper_idx = 4000
            + mag[4000..]
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
        let split = f[upper_idx] - f[lower_idx];
        assert_relative_eq!(split, 26e6, max_relative = 0.03);
    }

    #[test]
    fn lindblad_matches_bare_lorentzian() {
        let d = DecoherenceParams::new(1.0e6, 0.0, 0.0).unwrap();
        let p = JcParams::new(3.176e9, 3.0e9, 0.0, 6, 2).unwrap();
        let drv = DriveParams::new(0.05e6, 0.0, 3.176e9 + 0.4e6, None).unwrap();
        let t_num =
            lindblad_steady_state_transmission(&p, &p.two_level_ladder(), &d, &drv).unwrap();
        let t_ref = linear_transmission(drv.probe_f, p.f_r, p.f_q, 0.0, &d);
        assert!((t_num - t_ref).norm() < 1e-6 * t_ref.norm());
    }

    #[test]
    fn two_tone_zero_drive_is_flat() {
        let tp = TransmonParams::new(0.21e9, 17.4e9, 0.0, 15).unwrap();
        let sys = SystemParams {
            transmon: tp,
            f_r: 3.176e9,
            g: 13e6,
        };
        let drv = DriveParams::new(0.05e6, 0.0, 3.176e9, None).unwrap();
        let map = two_tone_map(
            &sys,
            &dec(),
            &drv,
            &linspace(0.30, 0.34, 5),
            &linspace(3.0e9, 5.0e9, 17),
        )
        .unwrap();
        for col in &map.values {
            for z in col {
                assert_eq!(*z, Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn map_axes_and_flags_sized() {
        let tp = TransmonParams::new(0.21e9, 17.4e9, 0.0, 15).unwrap();
        let sys = SystemParams {
            transmon: tp,
            f_r: 3.176e9,
            g: 13e6,
        };
        let map = anticrossing_map(
            &sys,
            &dec(),
            &linspace(0.36, 0.38, 7),
            &linspace(3.15e9, 3.20e9, 11),
        )
        .unwrap();
        assert_eq!(map.values.len(), 7);
        assert_eq!(map.values[0].len(), 11);
        assert_eq!(map.flagged_columns.len(), 7);
    }
}
