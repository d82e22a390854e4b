//! Physical constants (2019 SI exact values where defined).

/// Planck constant, J s.
pub const PLANCK_H: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK_H / (2.0 * std::f64::consts::PI);

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
