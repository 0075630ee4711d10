//! Confluent Heun series and the exact interior solution of the radial
//! equation `psi'' + k^2 psi = v_eff(r) psi` for `|r| < b0`.
//!
//! # Convention
//!
//! `H_C(alpha, beta, gamma, delta, eta, z)` is the solution regular at
//! `z = 0` with `H_C(0) = 1` of
//!
//! ```text
//! y'' + (alpha + (beta+1)/z + (gamma+1)/(z-1)) y' + (mu/z + nu/(z-1)) y = 0
//! mu = (alpha - beta - gamma + alpha beta - beta gamma)/2 - eta
//! nu = (alpha + beta + gamma + alpha gamma + beta gamma)/2 + delta + eta
//! ```
//!
//! Multiplying through by `z (z-1)` and collecting `z^n` gives the
//! three-term recurrence
//!
//! ```text
//! (n+1)(n+beta+1) c_{n+1} = (n (n+beta+gamma+1-alpha) - mu) c_n
//!                         + (alpha (n-1) + mu + nu) c_{n-1}
//! ```
//!
//! With this convention the two interior branches
//!
//! ```text
//! even: sqrt(r^2+b0^2)   H_C(0, -1/2, 0, -k^2 b0^2/4, k^2 b0^2/4 - L(L+1)/4 + 1/4, -r^2/b0^2)
//! odd:  r sqrt(r^2+b0^2) H_C(0, +1/2, 0, -k^2 b0^2/4, k^2 b0^2/4 - L(L+1)/4 + 1/4, -r^2/b0^2)
//! ```
//!
//! solve the radial equation exactly; [`ode_residual`] checks it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions};
use crate::potential::{centrifugal, v_eff_unchecked, ScatterContext, WormholeGeometry};

/// Default distance kept from the singular point `z = 1`.
pub const DEFAULT_MARGIN: f64 = 0.05;
const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

impl HeunParams {
    fn mu(&self) -> f64 {
        let HeunParams {
            alpha,
            beta,
            gamma,
            eta,
            ..
        } = *self;
        (alpha - beta - gamma + alpha * beta - beta * gamma) / 2.0 - eta
    }

    fn nu(&self) -> f64 {
        let HeunParams {
            alpha,
            beta,
            gamma,
            delta,
            eta,
        } = *self;
        (alpha + beta + gamma + alpha * gamma + beta * gamma) / 2.0 + delta + eta
    }

    /// Parameters of the interior branch (`Branch::Even` has `beta = -1/2`).
    pub fn interior(branch: Branch, ctx: &ScatterContext, geom: &WormholeGeometry) -> Self {
        let kb2 = (ctx.k() * geom.b0()).powi(2);
        HeunParams {
            alpha: 0.0,
            beta: match branch {
                Branch::Even => -0.5,
                Branch::Odd => 0.5,
            },
            gamma: 0.0,
            delta: -kb2 / 4.0,
            eta: kb2 / 4.0 - centrifugal(ctx.l()) / 4.0 + 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Even,
    Odd,
}

/// Value of the series and its first two derivatives at `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// Number of terms summed.
    pub order: usize,
    /// Estimated bound on the omitted terms of `value`.
    pub tail_bound: f64,
}

/// Power-series coefficients of `H_C` about `z = 0`. Immutable once built.
#[derive(Debug, Clone, Serialize)]
pub struct HeunSeries {
    pub params: HeunParams,
    coefficients: Vec<f64>,
}

impl HeunSeries {
    pub fn new(params: HeunParams) -> Result<Self> {
        Self::with_terms(params, MAX_TERMS)
    }

    pub fn with_terms(params: HeunParams, terms: usize) -> Result<Self> {
        let HeunParams {
            alpha, beta, gamma, ..
        } = params;
        if [alpha, beta, gamma, params.delta, params.eta]
            .iter()
            .any(|v| !v.is_finite())
        {
            return Err(Error::domain("Heun parameters must be finite"));
        }
        // beta = -1, -2, ... makes the leading coefficient vanish.
        if beta <= -1.0 && beta.fract() == 0.0 {
            return Err(Error::domain(format!(
                "beta = {beta} has no regular series at z = 0"
            )));
        }
        let (mu, nu) = (params.mu(), params.nu());
        let mut c = Vec::with_capacity(terms.max(2));
        c.push(1.0);
        let mut prev = 0.0;
        for n in 0..terms.max(2) - 1 {
            let nf = n as f64;
            let cur = c[n];
            let next = ((nf * (nf + beta + gamma + 1.0 - alpha) - mu) * cur
                + (alpha * (nf - 1.0) + mu + nu) * prev)
                / ((nf + 1.0) * (nf + beta + 1.0));
            c.push(next);
            prev = cur;
        }
        Ok(HeunSeries {
            params,
            coefficients: c,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Sum exactly `order` terms.
    pub fn evaluate_order(&self, z: f64, order: usize) -> Result<HeunValue> {
        if order > self.coefficients.len() {
            return Err(Error::Series(format!(
                "requested {order} terms, only {} built",
                self.coefficients.len()
            )));
        }
        let c = &self.coefficients;
        let (mut value, mut d1, mut d2) = (0.0, 0.0, 0.0);
        // Horner in z for all three sums.
        for n in (0..order).rev() {
            value = value * z + c[n];
            if n >= 1 {
                d1 = d1 * z + n as f64 * c[n];
            }
            if n >= 2 {
                d2 = d2 * z + (n * (n - 1)) as f64 * c[n];
            }
        }
        Ok(HeunValue {
            value,
            d1,
            d2,
            order,
            tail_bound: self.tail_bound(z, order),
        })
    }

    /// Geometric bound on `Σ_{n >= order} c_n z^n` using the largest
    /// coefficient ratio over the preceding window.
    fn tail_bound(&self, z: f64, order: usize) -> f64 {
        let c = &self.coefficients;
        if order >= c.len() {
            return f64::INFINITY;
        }
        let az = z.abs();
        if az == 0.0 {
            return if order == 0 { 1.0 } else { 0.0 };
        }
        let lo = order.saturating_sub(16).max(1);
        let mut ratio: f64 = 1.0;
        for n in lo..order.min(c.len() - 1) {
            if c[n] != 0.0 {
                ratio = ratio.max((c[n + 1] / c[n]).abs());
            }
        }
        let rho = az * ratio;
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        let next = c[order].abs().max(c[order - 1].abs() * ratio);
        2.0 * next * az.powi(order as i32) / (1.0 - rho)
    }

    /// Sum until the tail bound drops below `tol` (relative to the value,
    /// absolute below one).
    pub fn evaluate(&self, z: f64, tol: f64, margin: f64) -> Result<HeunValue> {
        if !(tol > 0.0) {
            return Err(Error::domain("tolerance must be positive"));
        }
        if !(z.is_finite() && z.abs() < 1.0 - margin) {
            return Err(Error::domain(format!(
                "|z| = {} outside the series domain |z| < {}",
                z.abs(),
                1.0 - margin
            )));
        }
        if z == 0.0 {
            return self.evaluate_order(0.0, 3.min(self.coefficients.len()));
        }
        // Terms needed for az^n to reach tol, with headroom for coefficient growth.
        let guess = ((tol * 1e-3).ln() / z.abs().ln()).ceil() as usize;
        let mut order = guess.clamp(8, self.coefficients.len() - 1);
        loop {
            let v = self.evaluate_order(z, order)?;
            if v.tail_bound <= tol * v.value.abs().max(1.0) {
                return Ok(v);
            }
            if order == self.coefficients.len() - 1 {
                return Err(Error::Series(format!(
                    "no convergence at z = {z} within {order} terms (tail {:e})",
                    v.tail_bound
                )));
            }
            order = (order * 2).min(self.coefficients.len() - 1);
        }
    }
}

/// `H_C(params, z)` with normalization `H_C(0) = 1`.
pub fn heun_c(params: HeunParams, z: f64, tol: f64) -> Result<HeunValue> {
    HeunSeries::new(params)?.evaluate(z, tol, DEFAULT_MARGIN)
}

/// Interior solution `c1 * even + c2 * odd`.
#[derive(Debug, Clone, Serialize)]
pub struct ExactInteriorSolution {
    pub geom: WormholeGeometry,
    pub ctx: ScatterContext,
    pub c1: f64,
    pub c2: f64,
    pub series_even: HeunSeries,
    pub series_odd: HeunSeries,
    pub tol: f64,
}

/// `psi`, `psi'`, `psi''` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiValue {
    pub psi: f64,
    pub d1: f64,
    pub d2: f64,
    pub order: usize,
}

impl ExactInteriorSolution {
    pub fn new(geom: WormholeGeometry, ctx: ScatterContext, c1: f64, c2: f64) -> Result<Self> {
        Self::with_eta_shift(geom, ctx, c1, c2, 0.0)
    }

    /// Same as [`ExactInteriorSolution::new`] with `eta` moved by `shift` on
    /// both branches; any nonzero shift breaks the solution.
    pub fn with_eta_shift(
        geom: WormholeGeometry,
        ctx: ScatterContext,
        c1: f64,
        c2: f64,
        shift: f64,
    ) -> Result<Self> {
        let mut even = HeunParams::interior(Branch::Even, &ctx, &geom);
        let mut odd = HeunParams::interior(Branch::Odd, &ctx, &geom);
        even.eta += shift;
        odd.eta += shift;
        Ok(ExactInteriorSolution {
            geom,
            ctx,
            c1,
            c2,
            series_even: HeunSeries::new(even)?,
            series_odd: HeunSeries::new(odd)?,
            tol: 1e-15,
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0
    }

    pub fn evaluate(&self, r: f64) -> Result<PsiValue> {
        let b0 = self.geom.b0();
        if !(r.is_finite() && r.abs() < 0.95 * b0) {
            return Err(Error::domain(format!(
                "|r| = {} must stay below 0.95 b0 = {}",
                r.abs(),
                0.95 * b0
            )));
        }
        let z = -r * r / (b0 * b0);
        let dz = -2.0 * r / (b0 * b0);
        let d2z = -2.0 / (b0 * b0);
        let s = (r * r + b0 * b0).sqrt();

        let mut out = PsiValue {
            psi: 0.0,
            d1: 0.0,
            d2: 0.0,
            order: 0,
        };
        let mut add = |pref: (f64, f64, f64), h: HeunValue, coeff: f64| {
            let (m, m1, m2) = pref;
            let h1 = h.d1 * dz;
            let h2 = h.d2 * dz * dz + h.d1 * d2z;
            out.psi += coeff * m * h.value;
            out.d1 += coeff * (m1 * h.value + m * h1);
            out.d2 += coeff * (m2 * h.value + 2.0 * m1 * h1 + m * h2);
            out.order = out.order.max(h.order);
        };
        if self.c1 != 0.0 {
            let h = self.series_even.evaluate(z, self.tol, DEFAULT_MARGIN)?;
            add((s, r / s, b0 * b0 / s.powi(3)), h, self.c1);
        }
        if self.c2 != 0.0 {
            let h = self.series_odd.evaluate(z, self.tol, DEFAULT_MARGIN)?;
            let s3 = s.powi(3);
            add(
                (r * s, s + r * r / s, 3.0 * r / s - r.powi(3) / s3),
                h,
                self.c2,
            );
        }
        Ok(out)
    }
}

/// `psi(r)` of the interior solution.
pub fn psi_interior(r: f64, sol: &ExactInteriorSolution) -> Result<f64> {
    Ok(sol.evaluate(r)?.psi)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub k: f64,
    pub l: u32,
    pub max_residual: f64,
    pub worst_r: f64,
    pub truncation_order: usize,
    /// `c1 = c2 = 0`: the zero function, residual reported as zero.
    pub degenerate: bool,
}

/// Residual floor for the normalization `max(|psi|, floor)`.
const RESIDUAL_FLOOR: f64 = 1e-3;

/// Largest normalized residual `|psi'' + k^2 psi - v_eff psi| / max(|psi|, floor)`
/// over `r_grid`, with series-differentiated derivatives.
pub fn ode_residual(sol: &ExactInteriorSolution, r_grid: &[f64]) -> Result<ResidualReport> {
    let (k, l, b0) = (sol.ctx.k(), sol.ctx.l(), sol.geom.b0());
    let mut report = ResidualReport {
        k,
        l,
        max_residual: 0.0,
        worst_r: f64::NAN,
        truncation_order: 0,
        degenerate: sol.is_degenerate(),
    };
    if report.degenerate {
        return Ok(report);
    }
    for &r in r_grid {
        let p = sol.evaluate(r)?;
        let res = (p.d2 + k * k * p.psi - v_eff_unchecked(r, b0, l) * p.psi).abs()
            / p.psi.abs().max(RESIDUAL_FLOOR);
        report.truncation_order = report.truncation_order.max(p.order);
        if !(res <= report.max_residual) {
            report.max_residual = res;
            report.worst_r = r;
        }
    }
    Ok(report)
}

/// Same residual with a sixth-order central difference for `psi''`.
pub fn ode_residual_fd(sol: &ExactInteriorSolution, r_grid: &[f64], step: f64) -> Result<f64> {
    let (k, l, b0) = (sol.ctx.k(), sol.ctx.l(), sol.geom.b0());
    let mut worst: f64 = 0.0;
    for &r in r_grid {
        let f = |dr: f64| psi_interior(r + dr, sol);
        let h = step;
        let d2 = (2.0 * f(-3.0 * h)? - 27.0 * f(-2.0 * h)? + 270.0 * f(-h)? - 490.0 * f(0.0)?
            + 270.0 * f(h)?
            - 27.0 * f(2.0 * h)?
            + 2.0 * f(3.0 * h)?)
            / (180.0 * h * h);
        let psi = f(0.0)?;
        let res = (d2 + k * k * psi - v_eff_unchecked(r, b0, l) * psi).abs()
            / psi.abs().max(RESIDUAL_FLOOR);
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Direct numerical integration of the radial equation from `r = 0` with the
/// branch's initial data (`psi(0) = b0, psi'(0) = 0` for even,
/// `psi(0) = 0, psi'(0) = b0` for odd). `r_points` must be monotone away
/// from zero on one side.
pub fn integrate_interior(
    geom: &WormholeGeometry,
    ctx: &ScatterContext,
    branch: Branch,
    r_points: &[f64],
    opts: OdeOptions,
) -> Result<Vec<f64>> {
    let (k, l, b0) = (ctx.k(), ctx.l(), geom.b0());
    let y0 = match branch {
        Branch::Even => [b0.into(), 0.0.into()],
        Branch::Odd => [0.0.into(), b0.into()],
    };
    let states = ode::integrate_through(
        |r| v_eff_unchecked(r, b0, l) - k * k,
        0.0,
        y0,
        r_points,
        opts,
    )?;
    Ok(states.into_iter().map(|s| s[0].re).collect())
}
