//! Semiclassical phase accumulated across the throat.
//!
//! Energy conservation with a small momentum deficit gives
//! `dp(r) = b0^2 / (p0 (b0^2 + r^2)^2)`. Its integral over the half-line,
//! `(b0^2/p0) ∫_0^inf dr/(b0^2+r^2)^2 = pi/(4 b0 p0)`, is the phase integral;
//! the accumulated phase is Planck's constant times it. With `hbar = 1`,
//! `h = 2 pi`, so `dphi = pi^2 / (2 b0 p0)` and `dphi = n pi` at
//! `p0 = pi/(2 n b0)`, i.e. de Broglie wavelength `lambda = 4 n b0`.
//!
//! The full-line integral of `dp` is twice the half-line one; it is reported
//! alongside so the factor is visible rather than buried.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::WormholeGeometry;
use crate::quad::{self, QuadOptions};

/// Above this `validity_ratio` the small-deficit assumption is flagged.
pub const VALIDITY_WARNING_RATIO: f64 = 0.1;

/// Planck's constant in units with `hbar = 1`.
const PLANCK_H: f64 = 2.0 * PI;

/// Momentum deficit inside the throat.
pub fn wkb_delta_p(r: f64, p0: f64, geom: &WormholeGeometry) -> Result<f64> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::domain(format!("p0 must be positive, got {p0}")));
    }
    if !r.is_finite() {
        return Err(Error::domain(format!("r must be finite, got {r}")));
    }
    let b0 = geom.b0();
    let s = b0 * b0 + r * r;
    Ok(b0 * b0 / (p0 * s * s))
}

#[derive(Debug, Clone, Serialize)]
pub struct WkbReport {
    pub p0: f64,
    pub b0: f64,
    /// Closed form `pi / (4 b0 p0)`.
    pub phase_integral: f64,
    /// Adaptive quadrature of `∫_0^inf dp dr`.
    pub phase_integral_quad: f64,
    pub quad_error: f64,
    /// `|phase_integral - phase_integral_quad|`
    pub discrepancy: f64,
    /// Adaptive quadrature of `∫_{-inf}^{inf} dp dr`.
    pub full_line_integral: f64,
    /// Accumulated phase `h * phase_integral`.
    pub delta_phi: f64,
    /// `n` when `delta_phi = n pi` to within 1e-9.
    pub resonance_index: Option<u32>,
    /// `(1/b0^2) / p0^2`; the barrier-to-energy ratio that must be small.
    pub validity_ratio: f64,
    pub validity_warning: bool,
}

/// Phase accumulated by a particle of wavenumber `p0`.
pub fn wkb_phase(p0: f64, geom: &WormholeGeometry) -> Result<WkbReport> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::domain(format!("p0 must be positive, got {p0}")));
    }
    let b0 = geom.b0();
    let phase_integral = PI / (4.0 * b0 * p0);
    let dp = |r: f64| {
        let s = b0 * b0 + r * r;
        b0 * b0 / (p0 * s * s)
    };
    let opts = QuadOptions::relative(1e-13);
    let half = quad::integrate_to_infinity(dp, 0.0, b0, opts)?;

    // Whole line through r = b0 t / (1 - t^2), t in (-1, 1).
    let full = quad::integrate(
        |t: f64| {
            let d = 1.0 - t * t;
            let v = dp(b0 * t / d) * b0 * (1.0 + t * t) / (d * d);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        -1.0,
        1.0,
        opts,
    )?;

    let delta_phi = PLANCK_H * phase_integral;
    let cycles = delta_phi / PI;
    let nearest = cycles.round();
    let resonance_index = if nearest >= 1.0 && (cycles - nearest).abs() <= 1e-9 * nearest {
        Some(nearest as u32)
    } else {
        None
    };
    let validity_ratio = 1.0 / (b0 * p0).powi(2);
    Ok(WkbReport {
        p0,
        b0,
        phase_integral,
        phase_integral_quad: half.value,
        quad_error: half.error,
        discrepancy: (phase_integral - half.value).abs(),
        full_line_integral: full.value,
        delta_phi,
        resonance_index,
        validity_ratio,
        validity_warning: validity_ratio > VALIDITY_WARNING_RATIO,
    })
}

/// Predicted transparent wavelength of order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    pub n: u32,
    /// `lambda_n = 4 n b0`
    pub wavelength: f64,
    /// `k_n = 2 pi / lambda_n = pi / (2 n b0)`
    pub k: f64,
    /// Closed-form accumulated phase at `k_n`; equals `n pi`.
    pub delta_phi: f64,
    pub validity_ratio: f64,
}

pub fn resonance_wavelengths(geom: &WormholeGeometry, n_max: u32) -> Result<Vec<Resonance>> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let b0 = geom.b0();
    Ok((1..=n_max)
        .map(|n| {
            let nf = n as f64;
            let k = PI / (2.0 * nf * b0);
            Resonance {
                n,
                wavelength: 4.0 * nf * b0,
                k,
                delta_phi: PLANCK_H * PI / (4.0 * b0 * k),
                validity_ratio: 1.0 / (b0 * k).powi(2),
            }
        })
        .collect())
}
