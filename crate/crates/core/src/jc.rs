//! Coupled qubit-resonator ladder: dressed levels of the rotating-wave
//! Hamiltonian, closed-form anticrossing branches, and dispersive shifts.
//!
//! The Hamiltonian is built on the product basis |k, n> (qubit level k,
//! phonon number n) in Hz units:
//!
//! ```text
//! H/h = sum_k E_k |k><k| + f_r n + g sum_k sqrt(k+1) (|k+1><k| b + h.c.)
//! ```
//!
//! With two qubit levels this is the standard Jaynes-Cummings form; more
//! levels use transmon ladder scaling with energies supplied by the caller.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Parameters of the coupled system (all frequencies in Hz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcParams {
    /// Resonator frequency.
    pub f_r: f64,
    /// Qubit 0 -> 1 transition frequency.
    pub f_q: f64,
    /// Coupling g (as g/2pi).
    pub g: f64,
    /// Fock-space truncation: phonon numbers 0..=n_phonon_max.
    pub n_phonon_max: usize,
    /// Number of retained qubit levels (2 for the strict two-level model).
    pub qubit_levels: usize,
}

impl JcParams {
    pub fn new(
        f_r: f64,
        f_q: f64,
        g: f64,
        n_phonon_max: usize,
        qubit_levels: usize,
    ) -> Result<Self> {
        if !(f_r > 0.0) {
            return Err(Error::invalid("jc.f_r must be > 0"));
        }
        if g < 0.0 {
            return Err(Error::invalid("jc.g must be >= 0"));
        }
        if n_phonon_max < 1 {
            return Err(Error::invalid("jc.n_phonon_max must be >= 1"));
        }
        if qubit_levels < 2 {
            return Err(Error::invalid("jc.qubit_levels must be >= 2"));
        }
        Ok(Self {
            f_r,
            f_q,
            g,
            n_phonon_max,
            qubit_levels,
        })
    }

    /// Ground-referenced two-level qubit ladder `[0, f_q]`.
    pub fn two_level_ladder(&self) -> Vec<f64> {
        vec![0.0, self.f_q]
    }
}

/// Dressed levels with bare-state assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedLevels {
    /// Ground-referenced eigenenergies, ascending, Hz.
    pub energies: Vec<f64>,
    /// (qubit index, phonon index) of the dominant bare component,
    /// in the same order as `energies`.
    pub labels: Vec<(usize, usize)>,
}

impl DressedLevels {
    /// Energy of the dressed state labeled `(k, n)`, if retained.
    pub fn energy_of(&self, label: (usize, usize)) -> Option<f64> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.energies[i])
    }
}

/// Rotating-wave Hamiltonian matrix (Hz) on the |k, n> product basis with
/// basis index `k * (n_phonon_max + 1) + n`.
pub fn jc_hamiltonian(params: &JcParams, qubit_energies: &[f64]) -> Result<DMatrix<f64>> {
    if qubit_energies.len() != params.qubit_levels {
        return Err(Error::invalid(
            "jc_hamiltonian: qubit_energies length must equal qubit_levels",
        ));
    }
    let n_ph = params.n_phonon_max + 1;
    let dim = params.qubit_levels * n_ph;
    let idx = |k: usize, n: usize| k * n_ph + n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for k in 0..params.qubit_levels {
        for n in 0..n_ph {
            h[(idx(k, n), idx(k, n))] = qubit_energies[k] + params.f_r * n as f64;
            if k + 1 < params.qubit_levels && n >= 1 {
                let elem = params.g * ((k + 1) as f64).sqrt() * (n as f64).sqrt();
                h[(idx(k + 1, n - 1), idx(k, n))] = elem;
                h[(idx(k, n), idx(k + 1, n - 1))] = elem;
            }
        }
    }
    Ok(h)
}

type LabeledLevels = (Vec<f64>, Vec<(usize, usize)>);

fn diagonalize_labeled(params: &JcParams, qubit_energies: &[f64]) -> Result<LabeledLevels> {
    let n_ph = params.n_phonon_max + 1;
    let h = jc_hamiltonian(params, qubit_energies)?;
    let dim = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut labels = vec![(0usize, 0usize); dim];
    let mut used = vec![false; dim];
    for (slot, &col) in order.iter().enumerate() {
        let vec = eig.eigenvectors.column(col);
        // Rank bare states by overlap. Near-degenerate dressed states (an
        // exact anticrossing) have overlaps equal up to rounding, so ties
        // within a small tolerance resolve toward the lower qubit index.
        let mut ranking: Vec<usize> = (0..dim).collect();
        ranking.sort_by(|&a, &b| {
            let (wa, wb) = (vec[a].abs(), vec[b].abs());
            if (wa - wb).abs() <= 1e-9 * wa.max(wb) {
                (a / n_ph).cmp(&(b / n_ph)).then(a.cmp(&b))
            } else {
                wb.total_cmp(&wa)
            }
        });
        let bare = ranking
            .into_iter()
            .find(|&b| !used[b])
            .expect("basis exhausted");
        used[bare] = true;
        labels[slot] = (bare / n_ph, bare % n_ph);
    }
    let ground = eig.eigenvalues[order[0]];
    let energies: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c] - ground).collect();
    Ok((energies, labels))
}

/// Diagonalize the coupled system and label dressed states by their dominant
/// bare component (ties resolved toward the lower qubit index).
///
/// `qubit_energies` is the ground-referenced qubit ladder; use
/// [`JcParams::two_level_ladder`] for the two-level model or levels from a
/// [`crate::transmon::TransmonSpectrum`] for a multi-level qubit.
///
/// Fails if the retained levels are not converged in the phonon truncation
/// (a level shifts by more than 1 kHz when `n_phonon_max` grows by 2).
pub fn jc_dressed_levels(params: &JcParams, qubit_energies: &[f64]) -> Result<DressedLevels> {
    let (energies, labels) = diagonalize_labeled(params, qubit_energies)?;
    let bigger = JcParams {
        n_phonon_max: params.n_phonon_max + 2,
        ..*params
    };
    let (energies_big, labels_big) = diagonalize_labeled(&bigger, qubit_energies)?;
    // Only excitation blocks fully inside the truncation are physical; the
    // topmost blocks are incomplete by construction and shift when the basis
    // grows, so they are excluded from the convergence comparison.
    let mut max_shift = 0.0f64;
    for (i, label) in labels.iter().enumerate() {
        if label.0 + label.1 > params.n_phonon_max {
            continue;
        }
        if let Some(j) = labels_big.iter().position(|l| l == label) {
            max_shift = max_shift.max((energies[i] - energies_big[j]).abs());
        }
    }
    if max_shift > 1e3 {
        return Err(Error::convergence(format!(
            "jc_dressed_levels: levels shift by {max_shift:.3e} Hz when n_phonon_max grows \
             from {} to {}; increase n_phonon_max",
            params.n_phonon_max,
            params.n_phonon_max + 2
        )));
    }
    Ok(DressedLevels { energies, labels })
}

/// Closed-form single-excitation anticrossing branches,
/// `((f0 + fq) +- sqrt((f0 - fq)^2 + 4 g^2)) / 2`, returned (upper, lower).
pub fn eq2_branches(f0: f64, fq: f64, g: f64) -> (f64, f64) {
    let s = f0 + fq;
    let r = ((f0 - fq) * (f0 - fq) + 4.0 * g * g).sqrt();
    (0.5 * (s + r), 0.5 * (s - r))
}

/// Dispersive cavity pull `chi = g^2 / (fq - f0)`.
///
/// Validity requires `|fq - f0| >> g`; callers are expected to stay outside
/// `|fq - f0| <= 3 g` but only exact degeneracy is rejected.
pub fn dispersive_shift(fq: f64, f0: f64, g: f64) -> Result<f64> {
    let detuning = fq - f0;
    if detuning == 0.0 {
        return Err(Error::invalid(
            "dispersive_shift: qubit and resonator are degenerate",
        ));
    }
    Ok(g * g / detuning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn resonant_splitting_is_2g() {
        let p = JcParams::new(3.176e9, 3.176e9, 13e6, 1, 2).unwrap();
        let d = jc_dressed_levels(&p, &p.two_level_ladder()).unwrap();
        // One-excitation doublet at f_r +- g.
        assert_abs_diff_eq!(d.energies[1], 3.176e9 - 13e6, epsilon = 1.0);
        assert_abs_diff_eq!(d.energies[2], 3.176e9 + 13e6, epsilon = 1.0);
        assert_abs_diff_eq!(d.energies[2] - d.energies[1], 26e6, epsilon = 1e-3);
    }

    #[test]
    fn decoupled_levels_are_bare_sums() {
        let p = JcParams::new(3.0e9, 2.8e9, 0.0, 3, 2).unwrap();
        let d = jc_dressed_levels(&p, &p.two_level_ladder()).unwrap();
        for (e, (k, n)) in d.energies.iter().zip(d.labels.iter()) {
            let bare = p.f_q * *k as f64 + p.f_r * *n as f64;
            assert_abs_diff_eq!(*e, bare, epsilon = 1e-6);
        }
    }

    #[test]
    fn single_excitation_block_matches_eq2() {
        let p = JcParams::new(3.176e9, 3.176e9 + 50e6, 13e6, 2, 2).unwrap();
        let d = jc_dressed_levels(&p, &p.two_level_ladder()).unwrap();
        let (upper, lower) = eq2_branches(p.f_r, p.f_q, p.g);
        let e_photon = d.energy_of((0, 1)).unwrap();
        let e_qubit = d.energy_of((1, 0)).unwrap();
        let mut got = [e_photon, e_qubit];
        got.sort_by(f64::total_cmp);
        assert_relative_eq!(got[0], lower, max_relative = 1e-10);
        assert_relative_eq!(got[1], upper, max_relative = 1e-10);
    }

    #[test]
    fn eq2_resonant_values() {
        let (u, l) = eq2_branches(3.176e9, 3.176e9, 13e6);
        assert_abs_diff_eq!(u, 3.189e9, epsilon = 1.0);
        assert_abs_diff_eq!(l, 3.163e9, epsilon = 1.0);
        assert_eq!(u - l, 26e6);
    }

    #[test]
    fn eq2_uncoupled_limit() {
        let (u, l) = eq2_branches(3.0e9, 2.9e9, 0.0);
        assert_eq!(u, 3.0e9);
        assert_eq!(l, 2.9e9);
    }

    #[test]
    fn eq2_far_detuned_matches_second_order() {
        let (f0, g) = (3.0e9, 13e6);
        let delta = 100.0 * g;
        let fq = f0 - delta;
        let (u, l) = eq2_branches(f0, fq, g);
        let shift = g * g / delta;
        assert_relative_eq!(u, f0 + shift, max_relative = 1e-6);
        assert_relative_eq!(l, fq - shift, max_relative = 1e-6);
    }

    #[test]
    fn dispersive_shift_values() {
        let chi = dispersive_shift(3.276e9, 3.176e9, 13e6).unwrap();
        assert_relative_eq!(chi, 1.69e6, max_relative = 1e-3);
        assert_eq!(dispersive_shift(3.3e9, 3.2e9, 0.0).unwrap(), 0.0);
        let plus = dispersive_shift(3.2e9 + 5e7, 3.2e9, 13e6).unwrap();
        let minus = dispersive_shift(3.2e9 - 5e7, 3.2e9, 13e6).unwrap();
        assert_eq!(plus, -minus);
        assert!(dispersive_shift(3.2e9, 3.2e9, 13e6).is_err());
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let p = JcParams::new(3.1e9, 3.2e9, 9e6, 4, 3).unwrap();
        let ladder = vec![0.0, p.f_q, 2.0 * p.f_q - 0.2e9];
        let h = jc_hamiltonian(&p, &ladder).unwrap();
        assert_eq!(h.clone(), h.transpose());
    }

    #[test]
    fn labels_are_a_bijection() {
        let p = JcParams::new(3.176e9, 3.176e9, 13e6, 4, 2).unwrap();
        let d = jc_dressed_levels(&p, &p.two_level_ladder()).unwrap();
        let mut seen = std::collections::HashSet::new();
        for l in &d.labels {
            assert!(seen.insert(*l), "duplicate label {l:?}");
        }
        assert_eq!(seen.len(), d.energies.len());
    }
}
