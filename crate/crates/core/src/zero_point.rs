//! Coupling estimates from the zero-point motion of the cavity mode:
//! displacement -> piezo-induced voltage -> qubit coupling, plus the
//! acoustic and electric drive couplings and their ratio.
//!
//! The chain is deliberately typed: displacements are meters, voltages are
//! volts, couplings come out in Hz (g/2pi) or units of the elementary
//! charge, and the only route to a coupling estimate runs through the
//! chain in order.

use crate::consts::{ELEMENTARY_CHARGE, HBAR, PLANCK_H};
use crate::device::MaterialParams;
use crate::error::{Error, Result};

/// Zero-point displacement amplitude, m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPointDisplacement(pub f64);

/// Zero-point induced voltage amplitude, V.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPointVoltage(pub f64);

/// Inputs for the coupling and drive estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPointInputs {
    pub material: MaterialParams,
    /// Effective cavity area A_c, m^2.
    pub cavity_area: f64,
    /// Dimensionless transmon prefactor zeta.
    pub zeta: f64,
    /// Input-IDT capacitance C_IDT, F.
    pub c_idt: f64,
    /// Qubit gate capacitance C_g, F.
    pub c_gate: f64,
    /// Total qubit capacitance C_Sigma, F.
    pub c_sigma: f64,
}

impl ZeroPointInputs {
    pub fn new(
        material: MaterialParams,
        cavity_area: f64,
        zeta: f64,
        c_idt: f64,
        c_gate: f64,
        c_sigma: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("cavity_area", cavity_area),
            ("zeta", zeta),
            ("c_idt", c_idt),
            ("c_gate", c_gate),
            ("c_sigma", c_sigma),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid(format!("zero_point.{name} must be > 0")));
            }
        }
        Ok(Self {
            material,
            cavity_area,
            zeta,
            c_idt,
            c_gate,
            c_sigma,
        })
    }
}

/// Drive couplings in units of the elementary charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveCouplings {
    /// Acoustic drive coupling mu_ac = C_IDT V0 / e.
    pub mu_ac: f64,
    /// Electric drive coupling mu_el = 2 C_g / C_Sigma.
    pub mu_el: f64,
    /// mu_ac / mu_el.
    pub ratio: f64,
}

/// Zero-point displacement `sqrt(hbar / (2 rho A_c v))` of the mode.
pub fn zero_point_displacement(
    material: &MaterialParams,
    cavity_area: f64,
) -> Result<ZeroPointDisplacement> {
    if !(cavity_area > 0.0) {
        return Err(Error::invalid(
            "zero_point_displacement: cavity_area must be > 0",
        ));
    }
    let u0 = (HBAR / (2.0 * material.density * cavity_area * material.saw_speed)).sqrt();
    Ok(ZeroPointDisplacement(u0))
}

/// Piezo-induced zero-point voltage `(e_pz / eps) U0`.
pub fn zero_point_voltage(
    material: &MaterialParams,
    u0: ZeroPointDisplacement,
) -> Result<ZeroPointVoltage> {
    if !(u0.0 > 0.0) {
        return Err(Error::invalid(
            "zero_point_voltage: displacement must be > 0",
        ));
    }
    Ok(ZeroPointVoltage(material.piezo_module * u0.0))
}

/// Coupling estimate `g = zeta e V0 / h` in Hz (g/2pi).
///
/// The energy is linear in the zero-point voltage: `hbar g = zeta e V0`
/// (a squared voltage would not be an energy, and the linear form
/// reproduces the device-scale estimate of about 10 MHz).
pub fn coupling_estimate(zeta: f64, v0: ZeroPointVoltage) -> Result<f64> {
    if !(v0.0 > 0.0) {
        return Err(Error::invalid("coupling_estimate: voltage must be > 0"));
    }
    if zeta < 0.0 {
        return Err(Error::invalid("coupling_estimate: zeta must be >= 0"));
    }
    Ok(zeta * ELEMENTARY_CHARGE * v0.0 / PLANCK_H)
}

/// Acoustic and electric drive couplings and their ratio.
pub fn drive_couplings(inputs: &ZeroPointInputs, v0: ZeroPointVoltage) -> Result<DriveCouplings> {
    if !(v0.0 > 0.0) {
        return Err(Error::invalid("drive_couplings: voltage must be > 0"));
    }
    let mu_ac = inputs.c_idt * v0.0 / ELEMENTARY_CHARGE;
    let mu_el = 2.0 * inputs.c_gate / inputs.c_sigma;
    Ok(DriveCouplings {
        mu_ac,
        mu_el,
        ratio: mu_ac / mu_el,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quartz() -> MaterialParams {
        MaterialParams::new(3160.0, 2647.0, 2.0e9, 0.02).unwrap()
    }

    #[test]
    fn displacement_and_voltage_chain() {
        let u0 = zero_point_displacement(&quartz(), 1.5e-8).unwrap();
        assert_relative_eq!(u0.0, 2.05e-17, max_relative = 0.02);
        let v0 = zero_point_voltage(&quartz(), u0).unwrap();
        assert_relative_eq!(v0.0, 4.1e-8, max_relative = 0.02);
    }

    #[test]
    fn displacement_scaling_laws() {
        let mat = quartz();
        let base = zero_point_displacement(&mat, 1.5e-8).unwrap().0;
        let quad_area = zero_point_displacement(&mat, 4.0 * 1.5e-8).unwrap().0;
        assert_relative_eq!(quad_area, 0.5 * base, max_relative = 1e-12);
        let heavy = MaterialParams::new(3160.0, 4.0 * 2647.0, 2.0e9, 0.02).unwrap();
        let quad_rho = zero_point_displacement(&heavy, 1.5e-8).unwrap().0;
        assert_relative_eq!(quad_rho, 0.5 * base, max_relative = 1e-12);
    }

    #[test]
    fn coupling_chain_monotonicity() {
        // g grows with the piezo module and falls with density, area, speed.
        let g_of = |mat: MaterialParams, area: f64| {
            let u0 = zero_point_displacement(&mat, area).unwrap();
            let v0 = zero_point_voltage(&mat, u0).unwrap();
            coupling_estimate(1.0, v0).unwrap()
        };
        let base = g_of(quartz(), 1.5e-8);
        let strong_piezo = MaterialParams::new(3160.0, 2647.0, 4.0e9, 0.02).unwrap();
        assert!(g_of(strong_piezo, 1.5e-8) > base);
        let dense = MaterialParams::new(3160.0, 2.0 * 2647.0, 2.0e9, 0.02).unwrap();
        assert!(g_of(dense, 1.5e-8) < base);
        let fast = MaterialParams::new(2.0 * 3160.0, 2647.0, 2.0e9, 0.02).unwrap();
        assert!(g_of(fast, 1.5e-8) < base);
        assert!(g_of(quartz(), 2.0 * 1.5e-8) < base);
        // And the scaling is exactly (rho A v)^(-1/2): doubling all three
        // factors scales g by 8^(-1/2).
        let double_all = MaterialParams::new(2.0 * 3160.0, 2.0 * 2647.0, 2.0e9, 0.02).unwrap();
        assert_relative_eq!(
            g_of(double_all, 2.0 * 1.5e-8),
            base / 8.0f64.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn coupling_estimate_values() {
        let u0 = zero_point_displacement(&quartz(), 1.5e-8).unwrap();
        let v0 = zero_point_voltage(&quartz(), u0).unwrap();
        let g1 = coupling_estimate(1.0, v0).unwrap();
        assert_relative_eq!(g1, 9.9e6, max_relative = 0.01);
        assert_relative_eq!(g1, 10e6, max_relative = 0.05);
        let g_max = coupling_estimate(1.268, v0).unwrap();
        assert_relative_eq!(g_max, 12.6e6, max_relative = 0.01);
        assert_eq!(coupling_estimate(0.0, v0).unwrap(), 0.0);
    }

    #[test]
    fn drive_coupling_values() {
        let inputs = ZeroPointInputs::new(quartz(), 1.5e-8, 1.0, 98e-15, 0.1e-15, 90e-15).unwrap();
        let u0 = zero_point_displacement(&inputs.material, inputs.cavity_area).unwrap();
        let v0 = zero_point_voltage(&inputs.material, u0).unwrap();
        let d = drive_couplings(&inputs, v0).unwrap();
        assert_relative_eq!(d.mu_el, 0.00222, max_relative = 0.01);
        assert_relative_eq!(d.mu_ac, 0.025, max_relative = 0.02);
        assert!(d.ratio > 11.0 && d.ratio < 14.0);
    }

    #[test]
    fn ratio_tracks_voltage() {
        let inputs = ZeroPointInputs::new(quartz(), 1.5e-8, 1.0, 98e-15, 0.1e-15, 90e-15).unwrap();
        let v0 = ZeroPointVoltage(4.1e-8);
        let d1 = drive_couplings(&inputs, v0).unwrap();
        let d2 = drive_couplings(&inputs, ZeroPointVoltage(2.0 * v0.0)).unwrap();
        assert_relative_eq!(d2.ratio, 2.0 * d1.ratio, max_relative = 1e-12);
        assert_eq!(d1.mu_el, d2.mu_el);
    }
}
