use std::f64::consts::PI;

use proptest::prelude::*;
use wormhole_core::born::{
    born_amplitude, born_result, eq15_function, sigma_closed, sigma_quadrature, ClosedForm,
};
use wormhole_core::heun::{ode_residual, ExactInteriorSolution};
use wormhole_core::potential::{v_eff, v_fourier_closed};
use wormhole_core::transmission::{
    find_peaks, solve_transmission, wkb_delta_p, wkb_phase, TransmissionOptions,
};
use wormhole_core::{ScatterContext, WormholeGeometry};

fn geom(b0: f64) -> WormholeGeometry {
    WormholeGeometry::new(b0).unwrap()
}

fn ctx(k: f64, l: u32) -> ScatterContext {
    ScatterContext::new(k, l).unwrap()
}

proptest! {
    #[test]
    fn potential_even_positive_bounded(r in -1e3f64..1e3, b0 in 0.01f64..100.0, l in 0u32..6) {
        let g = geom(b0);
        let v = v_eff(r, &g, l).unwrap();
        prop_assert!(v > 0.0 || (r.abs() > 1e2 * b0 && v >= 0.0));
        prop_assert_eq!(v, v_eff(-r, &g, l).unwrap());
        prop_assert!(v <= v_eff(0.0, &g, l).unwrap());
    }

    #[test]
    fn potential_scales_as_inverse_square(r in -50.0f64..50.0, b0 in 0.1f64..10.0, s in 0.1f64..10.0, l in 0u32..4) {
        let a = v_eff(s * r, &geom(s * b0), l).unwrap();
        let b = v_eff(r, &geom(b0), l).unwrap() / (s * s);
        prop_assert!((a - b).abs() <= 1e-13 * b);
    }

    #[test]
    fn transform_positive_and_decreasing(q in 0.0f64..50.0, dq in 1e-3f64..5.0, b0 in 0.1f64..10.0, l in 0u32..4) {
        let g = geom(b0);
        let a = v_fourier_closed(q, &g, l).unwrap();
        let b = v_fourier_closed(q + dq, &g, l).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!(b < a);
    }

    #[test]
    fn amplitude_is_minus_transform_over_four_pi(theta in 0.0f64..=PI, k in 0.0f64..20.0, b0 in 0.1f64..10.0, l in 0u32..4) {
        let g = geom(b0);
        let a = born_amplitude(theta, &ctx(k, l), &g).unwrap();
        let q = 2.0 * k * (theta / 2.0).sin();
        let v = v_fourier_closed(q, &g, l).unwrap();
        prop_assert!((a + v / (4.0 * PI)).abs() <= 1e-12 * a.abs());
        prop_assert!(a < 0.0);
        let res = born_result(theta, &ctx(k, l), &g).unwrap();
        prop_assert_eq!(res.dcs, a * a);
    }

    #[test]
    fn cross_section_positive_and_closed_form_agrees(x in 0.05f64..20.0, b0 in 0.2f64..5.0) {
        let g = geom(b0);
        let c = ctx(x / b0, 0);
        let quad = sigma_quadrature(&c, &g, 1e-10).unwrap();
        let closed = sigma_closed(&c, &g, ClosedForm::Corrected).unwrap();
        prop_assert!(quad.value > 0.0);
        prop_assert!((quad.value - closed).abs() <= 1e-8 * quad.value);
    }

    #[test]
    fn eq15_positive(x in 1e-3f64..50.0, b0 in 0.1f64..10.0) {
        prop_assert!(eq15_function(x, &geom(b0)).unwrap() > 0.0);
    }

    #[test]
    fn delta_p_even_and_peaked(r in -100.0f64..100.0, p0 in 0.01f64..100.0, b0 in 0.1f64..10.0) {
        let g = geom(b0);
        let d = wkb_delta_p(r, p0, &g).unwrap();
        prop_assert_eq!(d, wkb_delta_p(-r, p0, &g).unwrap());
        prop_assert!(d > 0.0 || r.abs() > 10.0 * b0);
        prop_assert!(d <= 1.0 / (p0 * b0 * b0) * (1.0 + 1e-15));
    }

    #[test]
    fn wkb_closed_form_matches_quadrature(pb in 0.1f64..100.0, b0 in 0.1f64..10.0) {
        let g = geom(b0);
        let rep = wkb_phase(pb / b0, &g).unwrap();
        prop_assert!(rep.delta_phi > 0.0);
        prop_assert!(rep.discrepancy <= 1e-10 * rep.phase_integral);
        prop_assert!((rep.full_line_integral - 2.0 * rep.phase_integral).abs() <= 1e-10 * rep.phase_integral);
        prop_assert_eq!(rep.validity_warning, rep.validity_ratio > 0.1);
    }

    #[test]
    fn peaks_are_strict_local_maxima(values in prop::collection::vec(0u8..6, 0..40)) {
        let ks: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        let vals: Vec<Option<f64>> = values.iter().map(|&v| Some(v as f64)).collect();
        let peaks = find_peaks(&ks, &vals);
        for w in peaks.windows(2) {
            prop_assert!(w[0].index < w[1].index);
        }
        for p in &peaks {
            let i = p.index;
            prop_assert!(i > 0);
            prop_assert!(values[i - 1] < values[i]);
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == values[i] {
                j += 1;
            }
            prop_assert!(j + 1 < values.len() && values[j + 1] < values[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transmission_bounded_and_unitary(kb in 0.1f64..10.0, b0 in 0.5f64..2.0) {
        let res = solve_transmission(&ctx(kb / b0, 0), &geom(b0), &TransmissionOptions::default()).unwrap();
        prop_assert!(res.transmission >= 0.0 && res.transmission <= 1.0 + 1e-8);
        prop_assert!(res.reflection >= 0.0 && res.reflection <= 1.0 + 1e-8);
        prop_assert!(res.unitarity_defect <= 1e-8);
        prop_assert!(res.condition_number >= 1.0);
    }

    #[test]
    fn interior_solution_is_exact(kb in 0.0f64..2.0, l in 0u32..3, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, b0 in 0.5f64..2.0) {
        prop_assume!(c1.abs() + c2.abs() > 0.1);
        let g = geom(b0);
        let sol = ExactInteriorSolution::new(g, ctx(kb / b0, l), c1, c2).unwrap();
        let grid: Vec<f64> = (-18..=18).map(|i| i as f64 * 0.05 * b0).collect();
        let rep = ode_residual(&sol, &grid).unwrap();
        prop_assert!(rep.max_residual <= 1e-8, "{:e} at r={}", rep.max_residual, rep.worst_r);
    }
}
