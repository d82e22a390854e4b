//! Steady state of the Lindblad master equation by vectorizing the
//! Liouvillian and solving the resulting linear system with a trace
//! constraint.
//!
//! Column-stacking convention: `vec(rho)[i + j d] = rho_{ij}`, so a
//! sandwich `A rho B` maps to `(B^T kron A) vec(rho)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

/// Kronecker product `a kron b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Liouvillian superoperator of `drho/dt = -i [H, rho] + sum_c r_c D[C_c] rho`
/// in the column-stacked basis. `H` is in Hz and the rates in Hz; the common
/// factor of 2 pi is dropped since it does not move the steady-state kernel.
pub fn liouvillian(h: &CMatrix, collapse: &[(f64, CMatrix)]) -> CMatrix {
    let d = h.nrows();
    let eye = CMatrix::identity(d, d);
    let i = Complex64::new(0.0, 1.0);
    let ht = h.transpose();
    let mut l = (kron(&eye, h) - kron(&ht, &eye)) * (-i);
    for (rate, c) in collapse {
        if *rate == 0.0 {
            continue;
        }
        let cdc = c.adjoint() * c;
        let half = Complex64::new(0.5 * rate, 0.0);
        l += kron(&c.conjugate(), c) * Complex64::new(*rate, 0.0);
        l -= kron(&eye, &cdc) * half;
        l -= kron(&cdc.transpose(), &eye) * half;
    }
    l
}

/// Unique steady-state density matrix of the Liouvillian.
///
/// Solves `L vec(rho) = 0` with the equation for element (0,0) replaced by
/// the trace constraint `Tr rho = 1`. Fails when the constrained system is
/// singular (no unique steady state).
pub fn steady_state(h: &CMatrix, collapse: &[(f64, CMatrix)]) -> Result<CMatrix> {
    let d = h.nrows();
    if h.ncols() != d {
        return Err(Error::invalid("steady_state: H must be square"));
    }
    let mut l = liouvillian(h, collapse);
    let dim = d * d;
    // The diagonal equations sum to d(Tr rho)/dt = 0, so dropping the (0,0)
    // equation in favor of the trace row leaves a determined system.
    for col in 0..dim {
        l[(0, col)] = Complex64::new(0.0, 0.0);
    }
    for k in 0..d {
        l[(0, k + k * d)] = Complex64::new(1.0, 0.0);
    }
    let mut rhs = DMatrix::<Complex64>::zeros(dim, 1);
    rhs[(0, 0)] = Complex64::new(1.0, 0.0);
    let lu = l.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::numerical("steady_state: singular Liouvillian system"))?;
    let mut rho = CMatrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            rho[(i, j)] = sol[(i + j * d, 0)];
        }
    }
    Ok(rho)
}

/// `Tr(op rho)`.
pub fn expectation(rho: &CMatrix, op: &CMatrix) -> Complex64 {
    (op * rho).trace()
}

/// Annihilation operator on an `n_max + 1`-dimensional Fock space.
pub fn annihilation(n_max: usize) -> CMatrix {
    let dim = n_max + 1;
    let mut b = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        b[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    b
}

/// Transmon-ladder lowering operator `sum_k sqrt(k+1) |k><k+1|`.
pub fn ladder_lowering(levels: usize) -> CMatrix {
    let mut s = CMatrix::zeros(levels, levels);
    for k in 1..levels {
        s[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    s
}

/// Number-like diagonal `diag(0, 1, ..., levels-1)`; with rate `2 gamma_phi`
/// this is the pure-dephasing collapse operator (shifting by a multiple of
/// the identity leaves the dissipator unchanged).
pub fn number_diagonal(levels: usize) -> CMatrix {
    CMatrix::from_fn(levels, levels, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
