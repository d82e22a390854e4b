//! Transmon energy levels from charging and Josephson energies, with SQUID
//! flux tuning, in exact charge-basis and asymptotic forms.
//!
//! Energies are represented throughout as E/h in Hz.

use nalgebra::DMatrix;

use crate::consts::{ELEMENTARY_CHARGE, PLANCK_H};
use crate::error::{Error, Result};

/// Charge-basis transmon parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonParams {
    /// Charging energy E_C/h, Hz.
    pub ec: f64,
    /// Maximal Josephson energy E_J0/h, Hz.
    pub ej0: f64,
    /// Offset charge n_g in Cooper pairs.
    pub charge_offset: f64,
    /// Charge-basis truncation: states n in [-N, N].
    pub charge_cutoff: usize,
}

impl TransmonParams {
    pub fn new(ec: f64, ej0: f64, charge_offset: f64, charge_cutoff: usize) -> Result<Self> {
        if !(ec > 0.0) {
            return Err(Error::invalid("transmon.ec must be > 0"));
        }
        if !(ej0 > 0.0) {
            return Err(Error::invalid("transmon.ej0 must be > 0"));
        }
        if charge_cutoff < 5 {
            return Err(Error::invalid("transmon.charge_cutoff must be >= 5"));
        }
        Ok(Self {
            ec,
            ej0,
            charge_offset,
            charge_cutoff,
        })
    }
}

/// Magnetic flux through the SQUID loop in units of the flux quantum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPoint {
    pub flux_ratio: f64,
}

impl FluxPoint {
    pub fn new(flux_ratio: f64) -> Self {
        Self { flux_ratio }
    }
}

/// Ground-referenced transmon eigenenergies, ascending, in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmonSpectrum {
    pub levels: Vec<f64>,
}

impl TransmonSpectrum {
    /// 0 -> 1 transition frequency.
    pub fn e01(&self) -> f64 {
        self.levels[1]
    }

    /// 1 -> 2 transition frequency.
    pub fn e12(&self) -> f64 {
        self.levels[2] - self.levels[1]
    }
}

/// Effective Josephson energy of a symmetric SQUID at the given flux.
///
/// `ej0 |cos(pi flux_ratio)|`; the flux argument is folded onto [0, 1/2]
/// first so the flux-quantum periodicity and the sign symmetry hold exactly
/// in floating point.
pub fn ej_of_flux(ej0: f64, flux: FluxPoint) -> f64 {
    let r = flux.flux_ratio.abs().rem_euclid(1.0);
    let r = if r > 0.5 { 1.0 - r } else { r };
    if r == 0.5 {
        return 0.0;
    }
    ej0 * (std::f64::consts::PI * r).cos().abs()
}

/// Ground-to-first-excited transition energy in the transmon limit,
/// `sqrt(8 ec ej) - ec`.
pub fn e01_asymptotic(ec: f64, ej: f64) -> f64 {
    (8.0 * ec * ej).sqrt() - ec
}

/// Dimensionless zero-point prefactor `(ej / (32 ec))^(1/4)`.
pub fn zeta(ec: f64, ej: f64) -> Result<f64> {
    if !(ec > 0.0) || !(ej > 0.0) {
        return Err(Error::invalid("zeta: ec and ej must be > 0"));
    }
    Ok((ej / (32.0 * ec)).powf(0.25))
}

/// Charging energy E_C/h = e^2 / (2 C_S h) for a shunt capacitance in farads.
pub fn charging_energy_from_capacitance(cs: f64) -> Result<f64> {
    if !(cs > 0.0) {
        return Err(Error::invalid(
            "charging_energy_from_capacitance: cs must be > 0",
        ));
    }
    Ok(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * cs * PLANCK_H))
}

fn charge_basis_levels(ec: f64, ej: f64, ng: f64, cutoff: usize) -> Vec<f64> {
    let dim = 2 * cutoff + 1;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        let n = i as f64 - cutoff as f64;
        h[(i, i)] = 4.0 * ec * (n - ng) * (n - ng);
        if i + 1 < dim {
            h[(i, i + 1)] = -0.5 * ej;
            h[(i + 1, i)] = -0.5 * ej;
        }
    }
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.total_cmp(b));
    let ground = eig[0];
    eig.iter().map(|e| e - ground).collect()
}

/// Exact transmon spectrum by diagonalizing the charge-basis Hamiltonian
/// `4 ec (n - n_g)^2 - (ej/2)(|n><n+1| + h.c.)` on `n` in `[-N, N]`.
///
/// Returns ground-referenced ascending levels. Fails when the low-lying
/// levels are not converged in the cutoff (they shift by more than 1 kHz
/// when N grows by 5), which signals that `charge_cutoff` is too small.
pub fn charge_basis_spectrum(params: &TransmonParams, ej: f64) -> Result<TransmonSpectrum> {
    if ej < 0.0 {
        return Err(Error::invalid("charge_basis_spectrum: ej must be >= 0"));
    }
    let levels = charge_basis_levels(params.ec, ej, params.charge_offset, params.charge_cutoff);
    let check = charge_basis_levels(
        params.ec,
        ej,
        params.charge_offset,
        params.charge_cutoff + 5,
    );
    let n_watch = levels.len().min(4);
    let max_shift = (0..n_watch)
        .map(|k| (levels[k] - check[k]).abs())
        .fold(0.0, f64::max);
    if max_shift > 1e3 {
        return Err(Error::convergence(format!(
            "charge_basis_spectrum: levels shift by {max_shift:.3e} Hz when the cutoff grows \
             from {} to {}; increase charge_cutoff",
            params.charge_cutoff,
            params.charge_cutoff + 5
        )));
    }
    Ok(TransmonSpectrum { levels })
}

/// Spectrum at a flux point: charge basis with `ej_of_flux`.
pub fn spectrum_at_flux(params: &TransmonParams, flux: FluxPoint) -> Result<TransmonSpectrum> {
    charge_basis_spectrum(params, ej_of_flux(params.ej0, flux))
}
