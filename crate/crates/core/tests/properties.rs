//! Property tests for the structural invariants of the models.

use proptest::prelude::*;
use qad_core::device::*;
use qad_core::jc::{eq2_branches, jc_dressed_levels, JcParams};
use qad_core::transmon::{ej_of_flux, FluxPoint};

fn quartz() -> MaterialParams {
    MaterialParams::new(3160.0, 2647.0, 2.0e9, 0.02).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn array_factor_magnitude_symmetric(delta in 1.0e3f64..1.0e9) {
        let mat = quartz();
        let idt = IdtGeometry::new(980e-9, 29, 2, 100e-6, 0.0, 245e-9).unwrap();
        let f0 = synchronous_frequency(&mat, idt.period).unwrap();
        let hi = idt_array_factor(&idt, &mat, f0 + delta).unwrap().norm();
        let lo = idt_array_factor(&idt, &mat, f0 - delta).unwrap().norm();
        prop_assert!((hi - lo).abs() <= 1e-12);
    }

    #[test]
    fn mirror_stays_passive(f in 1.0e8f64..1.0e10, strips in 1usize..400) {
        let mat = quartz();
        let mirror = MirrorGeometry::new(490e-9, strips, 0.0).unwrap();
        let g = mirror_reflection(&mirror, &mat, f).unwrap();
        prop_assert!(g.norm() <= 1.0);
        // The unclamped coherent sum is bounded by N r_s.
        let bound = strips as f64 * mat.strip_reflectivity;
        prop_assert!(g.norm() <= bound.tanh() + 1e-12);
    }

    #[test]
    fn ej_flux_quantum_periodicity(k in -512i32..512) {
        // Dyadic flux values make x + 1 exact in floating point.
        let x = k as f64 / 512.0;
        let ej0 = 17.4e9;
        let a = ej_of_flux(ej0, FluxPoint::new(x));
        let b = ej_of_flux(ej0, FluxPoint::new(x + 1.0));
        let c = ej_of_flux(ej0, FluxPoint::new(-x));
        prop_assert_eq!(a.to_bits(), b.to_bits());
        prop_assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn single_excitation_block_equals_eq2(
        f0 in 2.5e9f64..3.5e9,
        detuning in -2.0e8f64..2.0e8,
        g in 1.0e6f64..3.0e7,
    ) {
        let fq = f0 + detuning;
        let p = JcParams::new(f0, fq, g, 2, 2).unwrap();
        let d = jc_dressed_levels(&p, &p.two_level_ladder()).unwrap();
        let (upper, lower) = eq2_branches(f0, fq, g);
        let mut got = [d.energy_of((0, 1)).unwrap(), d.energy_of((1, 0)).unwrap()];
        got.sort_by(f64::total_cmp);
        prop_assert!((got[0] - lower).abs() <= 1e-10 * lower.abs());
        prop_assert!((got[1] - upper).abs() <= 1e-10 * upper.abs());
    }

    #[test]
    fn coupling_weight_bounded_and_translation_invariant(
        shift in -1.0e-3f64..1.0e-3,
        f_mode in 3.20e9f64..3.25e9,
    ) {
        let mat = quartz();
        let gap = 110.7e-6;
        let build = |origin: f64| {
            let left = MirrorGeometry::new(490e-9, 200, origin).unwrap();
            let right = MirrorGeometry::new(490e-9, 200, origin + gap).unwrap();
            let p1 = IdtGeometry::new(980e-9, 29, 2, 100e-6, origin + 16e-6, 245e-9).unwrap();
            let p2 = IdtGeometry::new(980e-9, 29, 2, 100e-6, origin + gap - 16e-6, 245e-9).unwrap();
            let q = IdtGeometry::new(980e-9, 18, 3, 100e-6, origin + 0.5 * gap, 163e-9).unwrap();
            CavityGeometry::new(left, right, gap, [p1, p2], q, 1.1025e-6).unwrap()
        };
        let base = build(0.0);
        let moved = build(shift);
        let w0 = mode_coupling_weight(&base.qubit_idt, &base, &mat, f_mode).unwrap();
        let w1 = mode_coupling_weight(&moved.qubit_idt, &moved, &mat, f_mode).unwrap();
        prop_assert!((0.0..=1.0).contains(&w0));
        prop_assert!((w0 - w1).abs() < 1e-6);
    }

    #[test]
    fn widening_the_band_keeps_modes(
        lo_pad in 0.0f64..3.0e6,
        hi_pad in 0.0f64..3.0e6,
    ) {
        let mat = quartz();
        let left = MirrorGeometry::new(490e-9, 200, 0.0).unwrap();
        let right = MirrorGeometry::new(490e-9, 200, 110.7e-6).unwrap();
        let p1 = IdtGeometry::new(980e-9, 29, 2, 100e-6, 16e-6, 245e-9).unwrap();
        let p2 = IdtGeometry::new(980e-9, 29, 2, 100e-6, 94e-6, 245e-9).unwrap();
        let q = IdtGeometry::new(980e-9, 18, 3, 100e-6, 55.35e-6, 163e-9).unwrap();
        let cav = CavityGeometry::new(left, right, 110.7e-6, [p1, p2], q, 1.1025e-6).unwrap();
        let narrow = (3.215e9, 3.232e9);
        let wide = (narrow.0 - lo_pad, narrow.1 + hi_pad);
        let modes_narrow = cavity_modes(&cav, &mat, narrow).unwrap();
        let modes_wide = cavity_modes(&cav, &mat, wide).unwrap();
        for m in &modes_narrow {
            prop_assert!(
                modes_wide.iter().any(|w| (w - m).abs() < 1e3),
                "mode {} lost when widening", m
            );
        }
    }
}
