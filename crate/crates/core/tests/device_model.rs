//! Device-model checks against the measured-device scale: IDT bandwidths,
//! grating stopband, mode structure and coupling selectivity.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use qad_core::config::ExperimentConfig;
use qad_core::device::*;
use qad_core::grid::linspace;

fn setup() -> (ExperimentConfig, MaterialParams, CavityGeometry) {
    let cfg = ExperimentConfig::default();
    let mat = cfg.material().unwrap();
    let cav = cfg.cavity().unwrap();
    (cfg, mat, cav)
}

#[test]
fn port_idt_bandwidth_near_95_mhz() {
    let (_, mat, cav) = setup();
    let f = linspace(3.0e9, 3.45e9, 9001);
    let mag: Vec<f64> = f
        .iter()
        .map(|&fi| {
            idt_array_factor(&cav.port_idts[0], &mat, fi)
                .unwrap()
                .norm()
        })
        .collect();
    let width = response_fwhm(&f, &mag).unwrap();
    assert_relative_eq!(width, 95e6, max_relative = 0.15);
}

#[test]
fn qubit_idt_bandwidth_near_143_mhz() {
    let (_, mat, cav) = setup();
    let f = linspace(3.0e9, 3.45e9, 9001);
    let mag: Vec<f64> = f
        .iter()
        .map(|&fi| idt_array_factor(&cav.qubit_idt, &mat, fi).unwrap().norm())
        .collect();
    let width = response_fwhm(&f, &mag).unwrap();
    assert_relative_eq!(width, 143e6, max_relative = 0.15);
}

#[test]
fn mirror_stopband_near_33_mhz() {
    let (_, mat, cav) = setup();
    let width = mirror_stopband_width(&cav.left_mirror, &mat).unwrap();
    assert_relative_eq!(width, 33e6, max_relative = 0.10);
}

#[test]
fn three_modes_inside_stopband_with_selective_coupling() {
    let (_, mat, cav) = setup();
    let band = stopband_interval(&cav.left_mirror, &mat, 0.5).unwrap();
    let modes = cavity_modes(&cav, &mat, band).unwrap();
    assert!(modes.len() >= 3, "found {} modes", modes.len());

    let center = 0.5 * (band.0 + band.1);
    let central = modes
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - center).abs().total_cmp(&(b.1 - center).abs()))
        .unwrap()
        .0;
    let w_central = mode_coupling_weight(&cav.qubit_idt, &cav, &mat, modes[central]).unwrap();
    assert!(w_central > 0.9, "central weight {w_central}");
    for adj in [central.wrapping_sub(1), central + 1] {
        if let Some(&m) = modes.get(adj) {
            let w = mode_coupling_weight(&cav.qubit_idt, &cav, &mat, m).unwrap();
            assert!(w < 0.2, "adjacent weight {w}");
        }
    }
}

#[test]
fn mode_spacing_is_uniform_under_the_linear_phase_model() {
    // The reflective-array phase is linear across the main lobe, so the
    // solved modes form an even comb with spacing v / (2 (L_c + q (N-1))).
    let (cfg, mat, cav) = setup();
    let band = stopband_interval(&cav.left_mirror, &mat, 0.5).unwrap();
    let modes = cavity_modes(&cav, &mat, band).unwrap();
    let l_eff = cfg.mirror_gap_m + cfg.mirror_strip_period_m * (cfg.mirror_strips as f64 - 1.0);
    let fsr = mat.saw_speed / (2.0 * l_eff);
    for pair in modes.windows(2) {
        assert_relative_eq!(pair[1] - pair[0], fsr, max_relative = 1e-3);
    }
}

#[test]
fn single_electrode_on_antinode_has_unit_weight() {
    let (_, mat, _) = setup();
    // A one-cell, two-electrode IDT reaches weight 1 when phased onto the
    // standing wave; scan a period of offsets and take the best alignment.
    let left = MirrorGeometry::new(490e-9, 200, 0.0).unwrap();
    let right = MirrorGeometry::new(490e-9, 200, 110.7e-6).unwrap();
    let f_mode = 3.2245e9;
    let mut best: f64 = 0.0;
    for k in 0..200 {
        let center = 55e-6 + 980e-9 * k as f64 / 200.0;
        let idt = IdtGeometry::new(980e-9, 1, 2, 100e-6, center, 245e-9).unwrap();
        let port = IdtGeometry::new(980e-9, 29, 2, 100e-6, 20e-6, 245e-9).unwrap();
        let cav = CavityGeometry::new(
            left,
            right,
            110.7e-6,
            [
                port,
                IdtGeometry::new(980e-9, 29, 2, 100e-6, 90e-6, 245e-9).unwrap(),
            ],
            idt,
            1.1025e-6,
        )
        .unwrap();
        let w = mode_coupling_weight(&cav.qubit_idt, &cav, &mat, f_mode).unwrap();
        best = best.max(w);
    }
    assert_abs_diff_eq!(best, 1.0, epsilon = 1e-3);
}

#[test]
fn lorentzian_power_fwhm_on_grid() {
    // |t|^2 Lorentzian with half-width 0.166 MHz sampled at 1 kHz steps.
    let hwhm = 0.166e6;
    let f = linspace(3.176e9 - 2e6, 3.176e9 + 2e6, 4001);
    let mag: Vec<f64> = f
        .iter()
        .map(|&fi| {
            let power = hwhm * hwhm / ((fi - 3.176e9) * (fi - 3.176e9) + hwhm * hwhm);
            power.sqrt()
        })
        .collect();
    let width = response_fwhm(&f, &mag).unwrap();
    assert_abs_diff_eq!(width, 0.332e6, epsilon = 1.1e3);
}

#[test]
fn synchronous_frequency_exact_ratio() {
    let (_, mat, _) = setup();
    let f = synchronous_frequency(&mat, 980e-9).unwrap();
    assert_eq!(f, 3160.0 / 980e-9);
    assert_relative_eq!(f, 3.2245e9, max_relative = 1e-4);
}

#[test]
fn empty_band_gives_empty_mode_list() {
    let (_, mat, cav) = setup();
    // A 1 kHz sliver between modes: no root, empty list, no error.
    let modes = cavity_modes(&cav, &mat, (3.2210e9, 3.2210e9 + 1e3)).unwrap();
    assert!(modes.is_empty());
}

#[test]
fn reflection_spectrum_sampling_is_passive() {
    let (_, mat, cav) = setup();
    let spectrum = ReflectionSpectrum::sample(&cav.left_mirror, &mat, 3.0e9, 3.5e9, 501).unwrap();
    assert_eq!(spectrum.frequencies.len(), spectrum.values.len());
    assert!(spectrum.values.iter().all(|z| z.norm() <= 1.0));
    // Peak reflectivity sits at the Bragg frequency sample.
    let peak = spectrum
        .values
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    assert!(peak > 0.99);
}
