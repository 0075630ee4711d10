use std::f64::consts::PI;

use wormhole_core::born::{
    born_amplitude, closed_form_audit, dcs_zero_energy, eq15_function, eq15_roots, figure2_data,
    sigma_closed, sigma_quadrature, ClosedForm,
};
use wormhole_core::heun::{
    heun_c, integrate_interior, ode_residual, ode_residual_fd, psi_interior, Branch,
    ExactInteriorSolution, HeunParams, HeunSeries,
};
use wormhole_core::ode::OdeOptions;
use wormhole_core::potential::{v_eff, v_fourier_closed, v_fourier_numeric};
use wormhole_core::roots::log_space;
use wormhole_core::{ScatterContext, WormholeGeometry};

fn geom(b0: f64) -> WormholeGeometry {
    WormholeGeometry::new(b0).unwrap()
}

fn ctx(k: f64, l: u32) -> ScatterContext {
    ScatterContext::new(k, l).unwrap()
}

fn interior_grid(b0: f64) -> Vec<f64> {
    (-90..=90).map(|i| i as f64 * 0.01 * b0).collect()
}

#[test]
fn potential_spot_values() {
    assert_eq!(v_eff(0.0, &geom(1.0), 0).unwrap(), 1.0);
    assert_eq!(v_eff(1.0, &geom(1.0), 1).unwrap(), 1.25);
    assert!(v_eff(1e8, &geom(1.0), 0).unwrap() < 1e-31);
    assert!(v_eff(f64::NAN, &geom(1.0), 0).is_err());
    assert_eq!(geom(1.5).diameter(), 3.0);
}

#[test]
fn transform_matches_quadrature_on_grid() {
    for b0 in [0.5, 1.0, 3.0] {
        let g = geom(b0);
        for qb in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            for l in 0..=2 {
                let q = qb / b0;
                let closed = v_fourier_closed(q, &g, l).unwrap();
                let num = v_fourier_numeric(q, &g, l, 1e-8).unwrap();
                let rel = (num.value - closed).abs() / closed;
                assert!(rel <= 1e-7, "qb={qb} L={l} b0={b0}: rel {rel:e}");
            }
        }
    }
    assert!((v_fourier_closed(0.0, &geom(1.0), 1).unwrap() - 2.5 * PI).abs() < 1e-14);
    assert!(v_fourier_closed(-1.0, &geom(1.0), 0).is_err());
}

#[test]
fn zero_energy_chain() {
    let g = geom(1.0);
    let a = born_amplitude(1.0, &ctx(0.0, 0), &g).unwrap();
    assert_eq!(a * a, 1.0 / 64.0);
    assert_eq!(dcs_zero_energy(1, &g), 25.0 / 64.0);
    assert_eq!(dcs_zero_energy(0, &geom(2.0)), 1.0 / 256.0);
    let s0 = sigma_quadrature(&ctx(0.0, 0), &g, 1e-12).unwrap().value;
    assert!((s0 - PI / 16.0).abs() < 1e-12);
    let s1 = sigma_quadrature(&ctx(0.0, 1), &g, 1e-12).unwrap().value;
    assert!((s1 - 25.0 * PI / 16.0).abs() < 1e-11);
    let lim = eq15_function(1e-7, &g).unwrap();
    assert!((lim - 1.0 / 32.0).abs() < 1e-6 / 32.0);
    assert!((s0 / (2.0 * PI) - lim).abs() < 1e-6 * lim);
    let closed0 = sigma_closed(&ctx(0.0, 0), &g, ClosedForm::Corrected).unwrap();
    assert!((closed0 - s0).abs() < 1e-12 * s0);
    assert!(sigma_closed(&ctx(0.0, 0), &g, ClosedForm::AsPrinted).is_err());
}

#[test]
fn amplitude_spot_values() {
    let g = geom(1.0);
    assert!(born_amplitude(2.0, &ctx(5.0, 0), &g).unwrap() < 0.0);
    assert_eq!(born_amplitude(0.0, &ctx(5.0, 0), &g).unwrap(), -0.125);
    let back = born_amplitude(PI, &ctx(1.0, 1), &g).unwrap();
    assert!((back + 7.0 * (-2.0f64).exp() / 8.0).abs() < 1e-15);
    assert!(born_amplitude(3.2, &ctx(1.0, 0), &g).is_err());
}

#[test]
fn closed_form_against_quadrature() {
    let g = geom(1.0);
    let grid = log_space(0.05, 20.0, 200);
    for row in figure2_data(&g, &grid, 1e-11, ClosedForm::Corrected).unwrap() {
        assert!(row.failure.is_none());
        assert!(
            row.rel_discrepancy <= 1e-6,
            "x={}: {:e}",
            row.x,
            row.rel_discrepancy
        );
    }
}

#[test]
fn printed_coefficient_only_fits_at_one_l() {
    // L = 0: the constant 25 differs from the 9 that quadrature needs.
    let g = geom(1.0);
    let grid = [0.3, 1.0, 4.0];
    for l in 0..=2 {
        let audit = closed_form_audit(l, &g, &grid, 1e-12).unwrap();
        assert!(audit.max_discrepancy_corrected < 1e-8, "L={l}");
        assert!(
            (audit.inferred_coefficient - audit.corrected_coefficient).abs()
                < 1e-6 * audit.corrected_coefficient
        );
        let printed_fits = (audit.corrected_coefficient - audit.printed_coefficient).abs() < 1e-12;
        assert_eq!(printed_fits, l == 1);
        if !printed_fits {
            assert!(audit.max_discrepancy_as_printed > 1e-3);
        }
    }
}

#[test]
fn cross_section_vanishes_only_asymptotically() {
    let g = geom(1.0);
    assert!(eq15_roots(&g).unwrap().is_empty());
    let x = 30.0;
    let s = sigma_quadrature(&ctx(x, 0), &g, 1e-12).unwrap().value;
    assert!((s / (2.0 * PI) * x * x - 9.0 / 512.0).abs() <= 1e-4);
    let v = eq15_function(10.0, &g).unwrap();
    assert!((v - 1.758e-4).abs() < 1e-7);
}

#[test]
fn heun_residual_grid() {
    for b0 in [1.0, 0.7] {
        let g = geom(b0);
        for kb in [0.0, 0.5, 1.0, 2.0] {
            for l in 0..=2 {
                for (c1, c2) in [(1.0, 0.0), (0.0, 1.0)] {
                    let sol = ExactInteriorSolution::new(g, ctx(kb / b0, l), c1, c2).unwrap();
                    let rep = ode_residual(&sol, &interior_grid(b0)).unwrap();
                    assert!(
                        rep.max_residual <= 1e-8,
                        "kb={kb} L={l} ({c1},{c2}): {:e}",
                        rep.max_residual
                    );
                    let bad =
                        ExactInteriorSolution::with_eta_shift(g, ctx(kb / b0, l), c1, c2, 0.1)
                            .unwrap();
                    assert!(ode_residual(&bad, &interior_grid(b0)).unwrap().max_residual > 1e-3);
                }
            }
        }
    }
}

#[test]
fn heun_finite_difference_cross_check() {
    let g = geom(1.0);
    let sol = ExactInteriorSolution::new(g, ctx(1.0, 1), 1.0, 0.4).unwrap();
    let grid: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.1).collect();
    assert!(ode_residual_fd(&sol, &grid, 1e-2).unwrap() < 1e-6);
}

#[test]
fn heun_agrees_with_direct_integration() {
    let g = geom(1.0);
    let pts: Vec<f64> = (1..=90).map(|i| i as f64 * 0.01).collect();
    let opts = OdeOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-15,
        ..Default::default()
    };
    for kb in [0.0, 0.5, 1.0, 2.0] {
        for l in 0..=2 {
            for (branch, c1, c2) in [(Branch::Even, 1.0, 0.0), (Branch::Odd, 0.0, 1.0)] {
                let sol = ExactInteriorSolution::new(g, ctx(kb, l), c1, c2).unwrap();
                let direct = integrate_interior(&g, &ctx(kb, l), branch, &pts, opts).unwrap();
                for (&r, d) in pts.iter().zip(direct) {
                    let s = psi_interior(r, &sol).unwrap();
                    assert!(
                        (s - d).abs() <= 1e-8 * d.abs().max(1.0),
                        "kb={kb} L={l} r={r}: {s} vs {d}"
                    );
                    // mirror side through parity
                    let m = psi_interior(-r, &sol).unwrap();
                    let sign = if branch == Branch::Even { 1.0 } else { -1.0 };
                    assert!((m - sign * s).abs() <= 1e-12 * s.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn heun_origin_and_tail_bound() {
    let sol = ExactInteriorSolution::new(geom(2.0), ctx(0.3, 0), 1.0, 0.0).unwrap();
    assert_eq!(psi_interior(0.0, &sol).unwrap(), 2.0);
    let sol = ExactInteriorSolution::new(geom(2.0), ctx(0.3, 0), 0.0, 1.0).unwrap();
    assert_eq!(psi_interior(0.0, &sol).unwrap(), 0.0);
    assert!(psi_interior(1.95, &sol).is_err());

    let p = HeunParams::interior(Branch::Even, &ctx(1.0, 1), &geom(1.0));
    let series = HeunSeries::new(p).unwrap();
    for z in [-0.25, -0.6, -0.9] {
        let v = series.evaluate(z, 1e-10, 0.05).unwrap();
        let doubled = series.evaluate_order(z, 2 * v.order).unwrap();
        assert!(
            (doubled.value - v.value).abs() <= v.tail_bound.max(1e-15),
            "z={z}"
        );
    }
    assert_eq!(heun_c(p, 0.0, 1e-12).unwrap().value, 1.0);
    assert!(heun_c(p, -0.96, 1e-12).is_err());
}
