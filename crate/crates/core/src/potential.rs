//! Geometry-induced effective potential of the wormhole throat and its
//! one-dimensional Fourier transform.
//!
//! Units: `hbar = 2 m0 = 1`, so the kinetic prefactor `hbar^2 / 2 m0` is one
//! and an energy is a squared wavenumber, `E = k^2`.
//!
//! The transform convention is the one-dimensional
//! `V(q) = ∫ exp(-i q r) V(r) dr` over the whole line. That convention, and
//! not the three-dimensional radial transform, reproduces the closed form
//! `pi exp(-b0 q) (2L(L+1) + b0 q + 1) / (2 b0)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// Throat radius `b0` of a static wormhole, the only geometric input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WormholeGeometry {
    b0: f64,
}

impl WormholeGeometry {
    pub fn new(b0: f64) -> Result<Self> {
        if b0.is_finite() && b0 > 0.0 {
            Ok(WormholeGeometry { b0 })
        } else {
            Err(Error::domain(format!(
                "throat radius b0 must be positive and finite, got {b0}"
            )))
        }
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// Throat diameter `d = 2 b0`.
    pub fn diameter(&self) -> f64 {
        2.0 * self.b0
    }
}

/// Wavenumber `k` and angular-momentum quantum number `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterContext {
    k: f64,
    l: u32,
}

impl ScatterContext {
    pub fn new(k: f64, l: u32) -> Result<Self> {
        if k.is_finite() && k >= 0.0 {
            Ok(ScatterContext { k, l })
        } else {
            Err(Error::domain(format!(
                "wavenumber k must be finite and non-negative, got {k}"
            )))
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `E = k^2` in natural units.
    pub fn energy(&self) -> f64 {
        self.k * self.k
    }
}

/// `L (L + 1)` as a float.
#[inline]
pub(crate) fn centrifugal(l: u32) -> f64 {
    let l = l as f64;
    l * (l + 1.0)
}

/// Effective potential `L(L+1)/(r^2+b0^2) + b0^2/(r^2+b0^2)^2`.
pub fn v_eff(r: f64, geom: &WormholeGeometry, l: u32) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::domain(format!("r must be finite, got {r}")));
    }
    Ok(v_eff_unchecked(r, geom.b0, l))
}

#[inline]
pub(crate) fn v_eff_unchecked(r: f64, b0: f64, l: u32) -> f64 {
    let s = r * r + b0 * b0;
    centrifugal(l) / s + b0 * b0 / (s * s)
}

/// Closed-form Fourier transform of [`v_eff`].
pub fn v_fourier_closed(q: f64, geom: &WormholeGeometry, l: u32) -> Result<f64> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::domain(format!(
            "momentum transfer q must be finite and non-negative, got {q}"
        )));
    }
    let b0 = geom.b0;
    Ok(PI * (-b0 * q).exp() * (2.0 * centrifugal(l) + b0 * q + 1.0) / (2.0 * b0))
}

/// Numerical Fourier transform with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierEstimate {
    pub value: f64,
    /// Quadrature error plus tail remainder bound, absolute.
    pub error: f64,
    /// Split point between quadrature and the asymptotic tail; zero when the
    /// whole half-line was mapped onto a finite interval.
    pub cutoff: f64,
    /// Contribution of `[cutoff, inf)` (both half-lines).
    pub tail: f64,
    pub evaluations: usize,
}

/// `v_eff` written as `Re[a/(r - i b0) + c/(r - i b0)^2]`.
fn pole_coefficients(b0: f64, l: u32) -> (Complex64, Complex64) {
    let a = Complex64::new(0.0, -(2.0 * centrifugal(l) + 1.0) / (2.0 * b0));
    let c = Complex64::new(-0.5, 0.0);
    (a, c)
}

/// `∫_R^inf exp(i q r) v_eff(r) dr` by repeated integration by parts, with a
/// rigorous bound on the truncation remainder. Returns (value, bound).
fn oscillatory_tail(q: f64, cutoff: f64, b0: f64, l: u32) -> (Complex64, f64) {
    let (a, c) = pole_coefficients(b0, l);
    let u = Complex64::new(cutoff, -b0).inv();
    let i = Complex64::i();

    // p = n! u^{n+1} / q^n, bound_base = n! / (R q)^{n+1}
    let mut p = u;
    let mut bound_base = 1.0 / (cutoff * q);
    let mut rot = Complex64::new(1.0, 0.0); // (-i)^n
    let mut sum = Complex64::new(0.0, 0.0);
    let mut best_bound = f64::INFINITY;
    for n in 0..400usize {
        let nf = n as f64;
        let x = a * p + c * (nf + 1.0) * u * p;
        sum += rot * x.re;
        let bound = a.norm() * bound_base + c.norm() * (nf + 1.0) * bound_base / cutoff;
        if bound > best_bound {
            // Asymptotic series has started to diverge; undo this term.
            sum -= rot * x.re;
            break;
        }
        best_bound = bound;
        if bound < 1e-3 * f64::EPSILON * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        p *= u * ((nf + 1.0) / q);
        bound_base *= (nf + 1.0) / (cutoff * q);
        rot *= -i;
    }
    let phase = Complex64::from_polar(1.0, q * cutoff);
    (-phase / (i * q) * sum, best_bound)
}

/// Split point for the oscillatory transform; keeps `q R >= 50` so the
/// asymptotic tail series is well inside its convergent range.
pub fn fourier_cutoff(q: f64, geom: &WormholeGeometry) -> f64 {
    (50.0 * geom.b0).max(50.0 / q)
}

/// Adaptive-quadrature Fourier transform `2 ∫_0^inf cos(q r) v_eff(r) dr`.
///
/// At `q = 0` the half-line is mapped onto `[0, 1)` and integrated directly.
/// For `q > 0` the integral is split at [`fourier_cutoff`]; the remainder is
/// summed as an asymptotic series in `1/(q R)` whose truncation bound enters
/// the returned error.
pub fn v_fourier_numeric(
    q: f64,
    geom: &WormholeGeometry,
    l: u32,
    tol: f64,
) -> Result<FourierEstimate> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::domain(format!(
            "momentum transfer q must be finite and non-negative, got {q}"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let b0 = geom.b0;

    if q == 0.0 {
        let est = quad::integrate_to_infinity(
            |r| v_eff_unchecked(r, b0, l),
            0.0,
            b0,
            QuadOptions::relative(tol / 4.0),
        )?;
        return Ok(FourierEstimate {
            value: 2.0 * est.value,
            error: 2.0 * est.error,
            cutoff: 0.0,
            tail: 0.0,
            evaluations: est.evaluations,
        });
    }

    let cutoff = fourier_cutoff(q, geom);
    let (tail, tail_bound) = oscillatory_tail(q, cutoff, b0, l);
    let integrand = |r: f64| (q * r).cos() * v_eff_unchecked(r, b0, l);

    let mut opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: tol / 4.0,
        max_subdivisions: 20_000,
    };
    let mut evaluations = 0;
    let mut last = (f64::NAN, f64::NAN);
    for _ in 0..3 {
        let body = match quad::integrate(integrand, 0.0, cutoff, opts) {
            Ok(est) => est,
            Err(Error::Quadrature {
                estimate,
                error,
                evaluations: n,
            }) => {
                return Err(Error::Quadrature {
                    estimate: 2.0 * (estimate + tail.re),
                    error: 2.0 * (error + tail_bound),
                    evaluations: evaluations + n,
                })
            }
            Err(e) => return Err(e),
        };
        evaluations += body.evaluations;
        let value = 2.0 * (body.value + tail.re);
        let error = 2.0 * (body.error + tail_bound);
        last = (value, error);
        if error <= tol * value.abs() {
            return Ok(FourierEstimate {
                value,
                error,
                cutoff,
                tail: 2.0 * tail.re,
                evaluations,
            });
        }
        // The body and tail partly cancel; tighten against the total.
        opts.abs_tol = 0.25 * tol * value.abs() - tail_bound;
        if opts.abs_tol <= 0.0 {
            break;
        }
        opts.rel_tol = 0.0;
    }
    Err(Error::Quadrature {
        estimate: last.0,
        error: last.1,
        evaluations,
    })
}
