//! First Born approximation for scattering off the throat potential.
//!
//! The amplitude is `A(theta) = -V(q) / (4 pi)` with `V` the one-dimensional
//! transform of the effective potential and `q = 2 k sin(theta/2)`:
//!
//! ```text
//! A = -(2L(L+1) + 2 b0 k sin(theta/2) + 1) / (8 b0) * exp(-2 b0 k sin(theta/2))
//! ```
//!
//! The total cross-section `sigma = 2 pi ∫_0^pi |A|^2 sin(theta) dtheta` is
//! computed by adaptive quadrature, which is the reference value. The closed
//! form is evaluated term by term alongside it. Direct integration puts
//! `(8L^4 + 16L^3 + 24L^2 + 16L + 9)` in its last term; the variant with a
//! bare `16 + 9` is kept for comparison. Both are available through
//! [`ClosedForm`]; they agree only at `L = 1` and differ at `L = 0`
//! (25 against 9).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{centrifugal, ScatterContext, WormholeGeometry};
use crate::quad::{self, QuadOptions};
use crate::roots;

/// Which constant to use in the last term of the closed-form cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ClosedForm {
    /// `8L^4 + 16L^3 + 24L^2 + 16L + 9`, which matches quadrature.
    #[default]
    Corrected,
    /// `8L^4 + 16L^3 + 24L^2 + 16 + 9`, constant in place of `16L`.
    AsPrinted,
}

impl ClosedForm {
    pub fn last_coefficient(self, l: u32) -> f64 {
        let lf = l as f64;
        let base = 8.0 * lf.powi(4) + 16.0 * lf.powi(3) + 24.0 * lf * lf;
        match self {
            ClosedForm::Corrected => base + 16.0 * lf + 9.0,
            ClosedForm::AsPrinted => base + 16.0 + 9.0,
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "scattering angle must lie in [0, pi], got {theta}"
        )))
    }
}

#[inline]
fn amplitude_unchecked(theta: f64, k: f64, l: u32, b0: f64) -> f64 {
    let s = b0 * k * (0.5 * theta).sin().abs();
    -(2.0 * centrifugal(l) + 2.0 * s + 1.0) / (8.0 * b0) * (-2.0 * s).exp()
}

/// Born amplitude at angle `theta`. Always negative.
pub fn born_amplitude(theta: f64, ctx: &ScatterContext, geom: &WormholeGeometry) -> Result<f64> {
    check_theta(theta)?;
    Ok(amplitude_unchecked(theta, ctx.k(), ctx.l(), geom.b0()))
}

/// Point of the differential cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BornResult {
    pub k: f64,
    pub l: u32,
    pub theta: f64,
    pub amplitude: f64,
    pub dcs: f64,
}

pub fn born_result(
    theta: f64,
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
) -> Result<BornResult> {
    let amplitude = born_amplitude(theta, ctx, geom)?;
    Ok(BornResult {
        k: ctx.k(),
        l: ctx.l(),
        theta,
        amplitude,
        dcs: amplitude * amplitude,
    })
}

/// `|A|^2` at `k = 0`, `(2L^2 + 2L + 1)^2 / (64 b0^2)`, for every angle.
pub fn dcs_zero_energy(l: u32, geom: &WormholeGeometry) -> f64 {
    let c = 2.0 * centrifugal(l) + 1.0;
    c * c / (64.0 * geom.b0().powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaEstimate {
    pub value: f64,
    pub error: f64,
}

/// Total cross-section by adaptive quadrature over the scattering angle.
pub fn sigma_quadrature(
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
    tol: f64,
) -> Result<SigmaEstimate> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (k, l, b0) = (ctx.k(), ctx.l(), geom.b0());
    let est = quad::integrate(
        |theta: f64| {
            let a = amplitude_unchecked(theta, k, l, b0);
            a * a * theta.sin()
        },
        0.0,
        PI,
        QuadOptions::relative(tol),
    )?;
    Ok(SigmaEstimate {
        value: 2.0 * PI * est.value,
        error: 2.0 * PI * est.error,
    })
}

/// Closed-form total cross-section.
///
/// At `k = 0` the term-by-term form is singular; the corrected variant returns its
/// limit `2 pi (2L(L+1)+1)^2 / (32 b0^2)`. The as-printed variant diverges
/// there and reports a domain error.
pub fn sigma_closed(
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
    form: ClosedForm,
) -> Result<f64> {
    let (k, l, b0) = (ctx.k(), ctx.l(), geom.b0());
    let lf = l as f64;
    if k == 0.0 {
        return match form {
            ClosedForm::Corrected => {
                let c = 2.0 * centrifugal(l) + 1.0;
                Ok(2.0 * PI * c * c / (32.0 * b0 * b0))
            }
            ClosedForm::AsPrinted => Err(Error::domain(
                "the as-printed closed form diverges at k = 0",
            )),
        };
    }
    let x = b0 * k;
    let decay = (-4.0 * x).exp();
    let b4 = b0.powi(4);
    let t1 = -decay * k / (16.0 * b0);
    let t2 =
        (-64.0 * lf * lf * b0 * b0 - 64.0 * lf * b0 * b0 - 56.0 * b0 * b0) * decay / (512.0 * b4);
    let t3 = (-32.0 * lf.powi(4) * b0
        - 64.0 * lf.powi(3) * b0
        - 96.0 * lf * lf * b0
        - 64.0 * lf * b0
        - 36.0 * b0)
        * decay
        / (512.0 * b4 * k);
    // (e^{4x} - 1) e^{-4x} = -expm1(-4x)
    let t4 = form.last_coefficient(l) * -(-4.0 * x).exp_m1() / (512.0 * b4 * k * k);
    Ok(2.0 * PI * (t1 + t2 + t3 + t4))
}

/// Reference and closed-form cross-sections at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossSection {
    pub k: f64,
    pub l: u32,
    /// `b0 k`
    pub x: f64,
    pub sigma_quad: f64,
    pub sigma_quad_err: f64,
    pub sigma_closed: f64,
    /// `|sigma_closed - sigma_quad| / sigma_quad`
    pub discrepancy: f64,
}

pub fn cross_section(
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
    tol: f64,
    form: ClosedForm,
) -> Result<CrossSection> {
    let quad = sigma_quadrature(ctx, geom, tol)?;
    let closed = sigma_closed(ctx, geom, form)?;
    Ok(CrossSection {
        k: ctx.k(),
        l: ctx.l(),
        x: geom.b0() * ctx.k(),
        sigma_quad: quad.value,
        sigma_quad_err: quad.error,
        sigma_closed: closed,
        discrepancy: (closed - quad.value).abs() / quad.value,
    })
}

/// `L = 0` cross-section over `2 pi` as a function of `x = b0 k`:
/// `(9 e^{4x} - 9 - 36x - 56x^2 - 32x^3) e^{-4x} / (512 x^2 b0^2)`.
///
/// The bracket equals `16x^2 + 64x^3 + 9 Σ_{n>=4} (4x)^n/n!`; below `x = 1`
/// that positive series is summed instead of the cancelling difference.
pub fn eq15_function(x: f64, geom: &WormholeGeometry) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    let b2 = geom.b0().powi(2);
    let bracket = if x < 1.0 {
        let y = 4.0 * x;
        let mut term = y.powi(4) / 24.0;
        let mut tail: f64 = 0.0;
        let mut n = 4.0;
        while term > 1e-18 * tail.max(f64::MIN_POSITIVE) {
            tail += term;
            n += 1.0;
            term *= y / n;
        }
        16.0 * x * x + 64.0 * x.powi(3) + 9.0 * tail
    } else {
        9.0 * (4.0 * x).exp() - 9.0 - 36.0 * x - 56.0 * x * x - 32.0 * x.powi(3)
    };
    Ok(bracket * (-4.0 * x).exp() / (512.0 * x * x * b2))
}

/// Zeros of [`eq15_function`] on `(1e-3, 50]`: a 1000-point log-spaced
/// pre-scan followed by bisection on every sign change.
pub fn eq15_roots(geom: &WormholeGeometry) -> Result<Vec<f64>> {
    let grid = roots::log_space(1e-3, 50.0, 1000);
    roots::scan_roots(|x| eq15_function(x, geom).unwrap_or(f64::NAN), &grid, 1e-12)
}

/// Row of the `L = 0` cross-section table versus `x`.
#[derive(Debug, Clone, Serialize)]
pub struct Figure2Row {
    pub x: f64,
    pub sigma_quad: f64,
    pub sigma_quad_err: f64,
    pub sigma_closed: f64,
    pub rel_discrepancy: f64,
    /// Set when the row could not be computed.
    pub failure: Option<String>,
}

/// Cross-section rows for `L = 0` at `k = x / b0`, computed in parallel and
/// returned in grid order.
pub fn figure2_data(
    geom: &WormholeGeometry,
    x_grid: &[f64],
    tol: f64,
    form: ClosedForm,
) -> Result<Vec<Figure2Row>> {
    if x_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::domain("x grid must be positive and finite"));
    }
    if x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("x grid must be strictly ascending"));
    }
    Ok(x_grid
        .par_iter()
        .map(|&x| {
            let row = ScatterContext::new(x / geom.b0(), 0)
                .and_then(|ctx| cross_section(&ctx, geom, tol, form));
            match row {
                Ok(cs) => Figure2Row {
                    x,
                    sigma_quad: cs.sigma_quad,
                    sigma_quad_err: cs.sigma_quad_err,
                    sigma_closed: cs.sigma_closed,
                    rel_discrepancy: cs.discrepancy,
                    failure: None,
                },
                Err(e) => Figure2Row {
                    x,
                    sigma_quad: f64::NAN,
                    sigma_quad_err: f64::NAN,
                    sigma_closed: f64::NAN,
                    rel_discrepancy: f64::NAN,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect())
}

/// Constant of the last closed-form term that reproduces the quadrature
/// value at `(k, L)`, solved from the other three terms.
pub fn infer_last_coefficient(
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
    tol: f64,
) -> Result<f64> {
    let k = ctx.k();
    if !(k > 0.0) {
        return Err(Error::domain("coefficient inference needs k > 0"));
    }
    let b0 = geom.b0();
    let quad = sigma_quadrature(ctx, geom, tol)?.value;
    // Closed form with the last constant set to zero and to one.
    let zero = {
        let with_corrected = sigma_closed(ctx, geom, ClosedForm::Corrected)?;
        let c = ClosedForm::Corrected.last_coefficient(ctx.l());
        let unit = -(-4.0 * b0 * k).exp_m1() / (512.0 * b0.powi(4) * k * k) * 2.0 * PI;
        (with_corrected - c * unit, unit)
    };
    Ok((quad - zero.0) / zero.1)
}

/// Closed-form check for one `L`: both variants against quadrature.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormAudit {
    pub l: u32,
    pub max_discrepancy_corrected: f64,
    pub max_discrepancy_as_printed: f64,
    pub inferred_coefficient: f64,
    pub corrected_coefficient: f64,
    pub printed_coefficient: f64,
}

pub fn closed_form_audit(
    l: u32,
    geom: &WormholeGeometry,
    x_grid: &[f64],
    tol: f64,
) -> Result<ClosedFormAudit> {
    let mut max_c: f64 = 0.0;
    let mut max_p: f64 = 0.0;
    for &x in x_grid {
        let ctx = ScatterContext::new(x / geom.b0(), l)?;
        let quad = sigma_quadrature(&ctx, geom, tol)?.value;
        let c = sigma_closed(&ctx, geom, ClosedForm::Corrected)?;
        let p = sigma_closed(&ctx, geom, ClosedForm::AsPrinted)?;
        max_c = max_c.max((c - quad).abs() / quad);
        max_p = max_p.max((p - quad).abs() / quad);
    }
    let ctx = ScatterContext::new(1.0 / geom.b0(), l)?;
    Ok(ClosedFormAudit {
        l,
        max_discrepancy_corrected: max_c,
        max_discrepancy_as_printed: max_p,
        inferred_coefficient: infer_last_coefficient(&ctx, geom, tol)?,
        corrected_coefficient: ClosedForm::Corrected.last_coefficient(l),
        printed_coefficient: ClosedForm::AsPrinted.last_coefficient(l),
    })
}
