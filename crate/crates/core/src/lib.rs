//! Quantum acoustodynamics toolbox: forward models and parameter extraction
//! for a surface-acoustic-wave phonon cavity coupled to a flux-tunable
//! transmon artificial atom.
//!
//! The crate is organized around the physical subsystems:
//!
//! * [`device`] — IDT and Bragg-mirror frequency responses, cavity mode
//!   solving, and mode-selective qubit coupling weights.
//! * [`transmon`] — charge-basis transmon spectra with SQUID flux tuning.
//! * [`jc`] — the coupled qubit-resonator ladder (dressed levels,
//!   anticrossing branches, dispersive shifts).
//! * [`response`] — steady-state complex transmission: an analytic
//!   weak-probe formula cross-checked against a vectorized-Liouvillian
//!   Lindblad solver, plus anticrossing and two-tone map generators.
//! * [`zero_point`] — coupling estimates from zero-point displacement.
//! * [`fitting`] — peak extraction and Levenberg-Marquardt model fits.
//! * [`config`] — the flat-key experiment configuration shared with the CLI.
//!
//! All interface frequencies are plain Hz (cycles per second); angular
//! frequencies appear only inside formulas via `omega = 2*pi*f`.

// `!(x > 0.0)` is used deliberately in precondition checks so that NaN
// inputs are rejected along with out-of-range ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod consts;
pub mod device;
pub mod error;
pub mod fitting;
pub mod grid;
pub mod jc;
pub mod lindblad;
pub mod response;
pub mod transmon;
pub mod zero_point;

pub use error::{Error, Result};
