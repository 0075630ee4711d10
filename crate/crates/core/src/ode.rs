//! Adaptive Dormand–Prince 5(4) integrator for `psi'' = f(x) psi` with complex
//! state `(psi, psi')`.
//!
//! This is the reference integrator used to cross-check the Numerov sweep and
//! the interior series solution. It shares no code with either.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type State = [Complex64; 2];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Differences between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn rhs<F: Fn(f64) -> f64>(f: &F, x: f64, y: &State) -> State {
    [y[1], y[0] * f(x)]
}

#[inline]
fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

/// Integrate from `x0` to `x1` (either direction). Returns the final state and
/// the number of accepted steps.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    x1: f64,
    y0: State,
    opts: OdeOptions,
) -> Result<(State, usize)> {
    let span = x1 - x0;
    if span == 0.0 {
        return Ok((y0, 0));
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = dir * (span.abs() * 1e-3).min(1e-2);
    let mut k1 = rhs(&f, x, &y);
    let mut accepted = 0usize;
    let mut attempts = 0usize;

    while (x1 - x) * dir > 0.0 {
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(Error::Ode(format!("step budget exhausted at x = {x}")));
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = rhs(&f, x + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = rhs(&f, x + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = rhs(
            &f,
            x + C4 * h,
            &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
        );
        let k5 = rhs(
            &f,
            x + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = rhs(
            &f,
            x + h,
            &axpy(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ),
        );
        let y_new = axpy(
            &y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            h,
        );
        let k7 = rhs(&f, x + h, &y_new);

        let mut err_norm: f64 = 0.0;
        for i in 0..2 {
            let e =
                (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = opts.abs_tol + opts.rel_tol * y[i].norm().max(y_new[i].norm());
            err_norm = err_norm.max(e.norm() / scale);
        }

        if err_norm <= 1.0 {
            x += h;
            y = y_new;
            k1 = k7;
            accepted += 1;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if !h.is_finite() || h.abs() < 1e-14 * x.abs().max(1.0) {
            return Err(Error::Ode(format!("step size underflow at x = {x}")));
        }
    }
    Ok((y, accepted))
}

/// Integrate from `x0` through each of `points` in order and record the state
/// at every point. `points` must be monotone away from `x0`.
pub fn integrate_through<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    y0: State,
    points: &[f64],
    opts: OdeOptions,
) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(points.len());
    let mut x = x0;
    let mut y = y0;
    for &p in points {
        let (next, _) = integrate(&f, x, p, y, opts)?;
        out.push(next);
        x = p;
        y = next;
    }
    Ok(out)
}
