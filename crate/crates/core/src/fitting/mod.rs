//! Parameter extraction from traces and maps: peak finding plus
//! Levenberg-Marquardt fits of the physical models.

pub mod lm;
pub mod peaks;

pub use peaks::{extract_peaks, Peak};

use crate::device::response_fwhm;
use crate::error::{Error, Result};
use crate::jc::eq2_branches;
use crate::response::{SpectroscopyMap, TransmissionTrace};
use crate::transmon::{charge_basis_spectrum, ej_of_flux, FluxPoint, TransmonParams};

/// A dataset handed to the fit operations, with free-form provenance.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub payload: DatasetPayload,
    pub meta: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub enum DatasetPayload {
    Trace(TransmissionTrace),
    Map(SpectroscopyMap),
}

/// One fitted parameter with its curvature-based uncertainty proxy.
#[derive(Debug, Clone, PartialEq)]
pub struct FitParam {
    pub name: &'static str,
    pub value: f64,
    pub stderr_proxy: f64,
}

/// Result of a model fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: Vec<FitParam>,
    /// Residual 2-norm divided by the data 2-norm (dimensionless).
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }

    pub fn stderr(&self, name: &str) -> Option<f64> {
        self.params
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.stderr_proxy)
    }

    fn from_report(report: lm::LmReport, names: &[&'static str], data_norm: f64) -> Self {
        let params = names
            .iter()
            .zip(report.params.iter().zip(report.stderr_proxy.iter()))
            .map(|(&name, (&value, &stderr))| FitParam {
                name,
                value,
                stderr_proxy: stderr,
            })
            .collect();
        let residual_norm = if data_norm > 0.0 {
            report.ssr().sqrt() / data_norm
        } else {
            report.ssr().sqrt()
        };
        Self {
            params,
            residual_norm,
            iterations: report.iterations,
            converged: report.converged,
        }
    }
}

fn lorentzian_power(f: f64, center: f64, fwhm: f64, amplitude: f64, offset: f64) -> f64 {
    let hw = 0.5 * fwhm;
    amplitude * hw * hw / ((f - center) * (f - center) + hw * hw) + offset
}

/// Fit `|t|^2` to a Lorentzian power peak
/// `A (G/2)^2 / ((f - fc)^2 + (G/2)^2) + c`.
///
/// `init` is `[center, fwhm, amplitude, offset]`; when absent the peak
/// position seeds from the argmax and the width from the measured FWHM.
/// Non-convergence (including the degenerate flat-trace case) is reported
/// through `converged = false`, not an error.
pub fn fit_lorentzian(trace: &TransmissionTrace, init: Option<[f64; 4]>) -> Result<FitResult> {
    if trace.f.len() < 5 {
        return Err(Error::invalid("fit_lorentzian: need at least 5 samples"));
    }
    let y: Vec<f64> = trace.t.iter().map(|z| z.norm_sqr()).collect();
    let span = trace.f[trace.f.len() - 1] - trace.f[0];
    let y_max = y.iter().copied().fold(f64::MIN, f64::max);
    let y_min = y.iter().copied().fold(f64::MAX, f64::min);
    let p0 = init.unwrap_or_else(|| {
        let i_max = y
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty")
            .0;
        let mag: Vec<f64> = trace.t.iter().map(|z| z.norm()).collect();
        let width = response_fwhm(&trace.f, &mag).unwrap_or(span / 10.0);
        [trace.f[i_max], width, y_max - y_min, y_min]
    });

    let resid = |p: &[f64]| -> Vec<f64> {
        trace
            .f
            .iter()
            .zip(y.iter())
            .map(|(&f, &yv)| lorentzian_power(f, p[0], p[1], p[2], p[3]) - yv)
            .collect()
    };
    let y_scale = (y_max - y_min).abs().max(1e-30);
    let opts = lm::LmOptions::for_params(4).with_floors(&[span, span / 100.0, y_scale, y_scale]);
    let report = lm::minimize(resid, &p0, &opts)?;

    let data_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut result = FitResult::from_report(
        report,
        &["center", "fwhm", "amplitude", "offset"],
        data_norm,
    );
    // A genuine peak has positive amplitude and width and an interior center.
    result.params[1].value = result.params[1].value.abs();
    let center = result.value("center").unwrap();
    let fwhm = result.value("fwhm").unwrap();
    let amplitude = result.value("amplitude").unwrap();
    if !(amplitude > 0.0)
        || !(fwhm > 0.0)
        || center < trace.f[0]
        || center > trace.f[trace.f.len() - 1]
    {
        result.converged = false;
    }
    Ok(result)
}

/// Fit anticrossing branch points to the closed-form branches with the
/// qubit frequency supplied by `e01_of_flux`. Free parameters: `g`, `f0`.
///
/// Each point is assigned to the upper or lower branch by proximity at the
/// current iterate. Data that populates only one branch is rejected.
pub fn fit_anticrossing(
    branch_points: &[(f64, f64)],
    e01_of_flux: impl Fn(f64) -> f64,
    init: Option<[f64; 2]>,
) -> Result<FitResult> {
    if branch_points.len() < 4 {
        return Err(Error::invalid(
            "fit_anticrossing: need at least 4 branch points",
        ));
    }

    // Column structure: group by identical flux values (map columns).
    let mut columns: Vec<(f64, Vec<f64>)> = Vec::new();
    for &(flux, f) in branch_points {
        match columns.last_mut() {
            Some((x, fs)) if *x == flux => fs.push(f),
            _ => columns.push((flux, vec![f])),
        }
    }
    let doublets: Vec<&(f64, Vec<f64>)> = columns.iter().filter(|(_, fs)| fs.len() >= 2).collect();
    let p0 = init.unwrap_or_else(|| {
        let (f0_seed, g_seed) = if doublets.is_empty() {
            let mean = branch_points.iter().map(|p| p.1).sum::<f64>() / branch_points.len() as f64;
            (mean, 0.25 * point_span(branch_points))
        } else {
            let mid = doublets
                .iter()
                .map(|(_, fs)| {
                    let hi = fs.iter().copied().fold(f64::MIN, f64::max);
                    let lo = fs.iter().copied().fold(f64::MAX, f64::min);
                    0.5 * (hi + lo)
                })
                .sum::<f64>()
                / doublets.len() as f64;
            let min_gap = doublets
                .iter()
                .map(|(_, fs)| {
                    let hi = fs.iter().copied().fold(f64::MIN, f64::max);
                    let lo = fs.iter().copied().fold(f64::MAX, f64::min);
                    hi - lo
                })
                .fold(f64::MAX, f64::min);
            (mid, 0.5 * min_gap)
        };
        [g_seed, f0_seed]
    });

    // The upper branch lies above the bare qubit line everywhere and the
    // lower branch below it, so branch membership can be read off against
    // e01(flux) before any fit.
    let above: Vec<bool> = branch_points
        .iter()
        .map(|&(flux, f)| f > e01_of_flux(flux))
        .collect();
    if above.iter().all(|&u| u) || above.iter().all(|&u| !u) {
        return Err(Error::invalid(
            "fit_anticrossing: degenerate data, all points fall on one branch",
        ));
    }

    let resid = |p: &[f64]| -> Vec<f64> {
        branch_points
            .iter()
            .map(|&(flux, f)| {
                let (upper, lower) = eq2_branches(p[1], e01_of_flux(flux), p[0].abs());
                let du = f - upper;
                let dl = f - lower;
                if du.abs() < dl.abs() {
                    du
                } else {
                    dl
                }
            })
            .collect()
    };
    let opts = lm::LmOptions::for_params(2).with_floors(&[1e3, 1e3]);
    let report = lm::minimize(resid, &p0, &opts)?;
    let data_norm = branch_points.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt();
    let mut result = FitResult::from_report(report, &["g", "f0"], data_norm);
    result.params[0].value = result.params[0].value.abs();
    // A physical fit keeps the crossing inside the sampled frequency range.
    let span = point_span(branch_points);
    let f_lo = branch_points.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let f_hi = branch_points.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let f0 = result.value("f0").unwrap();
    if result.value("g").unwrap() > span || f0 < f_lo - span || f0 > f_hi + span {
        result.converged = false;
    }
    Ok(result)
}

fn point_span(points: &[(f64, f64)]) -> f64 {
    let hi = points.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let lo = points.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    hi - lo
}

/// Fit an E01-versus-bias ridge with the charge-basis transmon model and a
/// linear bias-to-flux map `flux_ratio = scale * (bias - offset)`.
///
/// Free parameters: `ec`, `ej0`, `flux_offset`, `flux_period_scale`.
/// The cutoff and offset charge are taken from `base`.
pub fn fit_flux_spectroscopy(points: &[(f64, f64)], base: &TransmonParams) -> Result<FitResult> {
    if points.len() < 8 {
        return Err(Error::invalid(
            "fit_flux_spectroscopy: need at least 8 ridge points",
        ));
    }
    let base = *base;
    let model = move |bias: f64, p: &[f64]| -> Result<f64> {
        let ec = p[0].abs().max(1e3);
        let ej0 = p[1].abs().max(1e3);
        let flux = FluxPoint::new(p[3] * (bias - p[2]));
        let params = TransmonParams {
            ec,
            ej0,
            charge_offset: base.charge_offset,
            charge_cutoff: base.charge_cutoff,
        };
        Ok(charge_basis_spectrum(&params, ej_of_flux(ej0, flux))?.e01())
    };

    // Seed from the asymptotic formula at the ridge maximum plus the sample
    // nearest a quarter period away.
    let (&(bias_max, e_max), _) = points
        .iter()
        .map(|p| (p, p.1))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let quarter_target = bias_max + 0.25;
    let &(_, e_quarter) = points
        .iter()
        .min_by(|a, b| {
            (a.0 - quarter_target)
                .abs()
                .total_cmp(&(b.0 - quarter_target).abs())
        })
        .expect("non-empty");
    // e01(0) = a - ec and e01(1/4) = a cos(pi/4)^(1/2) - ec with
    // a = sqrt(8 ec ej0).
    let c4 = (std::f64::consts::FRAC_PI_4.cos()).sqrt();
    let mut ec0 = (e_max - e_quarter) / (1.0 - c4) - e_max;
    if !(ec0 > 0.0) {
        ec0 = 0.05 * e_max;
    }
    let ej0_seed = (e_max + ec0) * (e_max + ec0) / (8.0 * ec0);
    let p0 = [ec0, ej0_seed, bias_max, 1.0];

    let resid = |p: &[f64]| -> Vec<f64> {
        points
            .iter()
            .map(|&(bias, e)| match model(bias, p) {
                Ok(m) => m - e,
                Err(_) => f64::INFINITY,
            })
            .collect()
    };
    let opts = lm::LmOptions::for_params(4).with_floors(&[1e6, 1e8, 1e-4, 1e-4]);
    let report = lm::minimize(resid, &p0, &opts)?;
    let data_norm = points.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt();
    let mut result = FitResult::from_report(
        report,
        &["ec", "ej0", "flux_offset", "flux_period_scale"],
        data_norm,
    );
    result.params[0].value = result.params[0].value.abs();
    result.params[1].value = result.params[1].value.abs();
    Ok(result)
}

/// Interpret a fitted dispersive qubit line as a relaxation rate: with no
/// pure dephasing the intrinsic low-drive linewidth (FWHM) is Gamma_1.
///
/// Near resonance the hybridized branches are instead limited by
/// `(kappa + Gamma_1) / 2`, so this conversion applies to lines measured in
/// the dispersive regime only.
pub fn qubit_linewidth_to_gamma1(fit: &FitResult) -> Result<f64> {
    if !fit.converged {
        return Err(Error::invalid(
            "qubit_linewidth_to_gamma1: fit did not converge",
        ));
    }
    fit.value("fwhm")
        .ok_or_else(|| Error::invalid("qubit_linewidth_to_gamma1: fit has no fwhm parameter"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn lorentzian_trace(center: f64, fwhm: f64, n: usize) -> TransmissionTrace {
        let f = linspace(center - 10.0 * fwhm, center + 10.0 * fwhm, n);
        let t = f
            .iter()
            .map(|&fi| {
                let power = lorentzian_power(fi, center, fwhm, 1.0, 0.0);
                Complex64::new(power.sqrt(), 0.0)
            })
            .collect();
        TransmissionTrace::new(f, t).unwrap()
    }

    #[test]
    fn noiseless_lorentzian_recovers_width() {
        let trace = lorentzian_trace(3.176e9, 0.332e6, 801);
        let fit = fit_lorentzian(&trace, None).unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.value("fwhm").unwrap(), 0.332e6, max_relative = 1e-3);
        assert_relative_eq!(fit.value("center").unwrap(), 3.176e9, max_relative = 1e-9);
    }

    #[test]
    fn flat_trace_flagged_unconverged() {
        let f = linspace(1.0e9, 1.1e9, 101);
        let t = vec![Complex64::new(0.5, 0.0); 101];
        let trace = TransmissionTrace::new(f, t).unwrap();
        let fit = fit_lorentzian(&trace, None).unwrap();
        assert!(!fit.converged);
    }

    #[test]
    fn anticrossing_roundtrip_noiseless() {
        let g_true = 13e6;
        let f0_true = 3.176e9;
        let e01 = |flux: f64| f0_true + (flux - 0.37) * 12.5e9;
        let mut points = Vec::new();
        for &flux in linspace(0.362, 0.378, 33).iter() {
            let (u, l) = eq2_branches(f0_true, e01(flux), g_true);
            points.push((flux, u));
            points.push((flux, l));
        }
        // Group per column ordering expected by the seeder.
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let fit = fit_anticrossing(&points, e01, None).unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.value("g").unwrap(), g_true, max_relative = 1e-3);
        assert_relative_eq!(fit.value("f0").unwrap(), f0_true, max_relative = 1e-9);
    }

    #[test]
    fn anticrossing_zero_coupling() {
        let f0_true = 3.176e9;
        let e01 = |flux: f64| f0_true + (flux - 0.37) * 12.5e9;
        let mut points = Vec::new();
        for &flux in linspace(0.36, 0.38, 21).iter() {
            let fq = e01(flux);
            points.push((flux, fq.max(f0_true)));
            points.push((flux, fq.min(f0_true)));
        }
        let fit = fit_anticrossing(&points, e01, None).unwrap();
        let g = fit.value("g").unwrap();
        let sigma = fit.stderr("g").unwrap();
        assert!(g.abs() <= sigma.max(1e3), "g = {g}, sigma = {sigma}");
    }

    #[test]
    fn anticrossing_single_branch_rejected() {
        let e01 = |flux: f64| 3.176e9 + (flux - 0.37) * 12.5e9;
        let points: Vec<(f64, f64)> = linspace(0.372, 0.378, 12)
            .iter()
            .map(|&x| (x, e01(x) + 20e6))
            .collect();
        assert!(fit_anticrossing(&points, e01, None).is_err());
    }

    #[test]
    fn gamma1_requires_convergence() {
        let fit = FitResult {
            params: vec![FitParam {
                name: "fwhm",
                value: 10e6,
                stderr_proxy: 0.0,
            }],
            residual_norm: 0.0,
            iterations: 1,
            converged: false,
        };
        assert!(qubit_linewidth_to_gamma1(&fit).is_err());
        let ok = FitResult {
            converged: true,
            ..fit
        };
        assert_eq!(qubit_linewidth_to_gamma1(&ok).unwrap(), 10e6);
    }
}
