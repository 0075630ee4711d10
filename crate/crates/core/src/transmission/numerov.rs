use num_complex::Complex64;

use super::{scaled_potential, Incidence, TransmissionOptions, TransmissionResult};
use crate::error::{Error, Result};
use crate::potential::{ScatterContext, WormholeGeometry};

/// Numerov sweep of `psi'' = f psi` with `f = v - k^2` on the uniform grid
/// `x_j = -R + j h`, `j = 0..=steps`.
///
/// The two nodes at each end see the constant edge value `f(R)`, so the
/// asymptotic solutions there are exact discrete plane waves
/// `exp(±i kd x)` with `cos(kd h) = (1 + 5g)/(1 - g)`, `g = h^2 f(R)/12`.
/// The recurrence conserves the discrete Wronskian, so matching against
/// those waves makes `T + R = 1` hold to rounding.
pub(super) fn solve(
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
    opts: &TransmissionOptions,
    halfwidth: f64,
    steps: usize,
) -> Result<TransmissionResult> {
    let n = steps.max(4);
    let k = ctx.k();
    let l = ctx.l();
    let h = 2.0 * halfwidth / n as f64;
    let h2_12 = h * h / 12.0;

    let f_end = scaled_potential(halfwidth, geom, l, opts.potential_scale) - k * k;
    if f_end >= 0.0 {
        return Err(Error::domain(format!(
            "energy k^2 = {} does not exceed the potential at the box edge",
            k * k
        )));
    }
    let g_end = h2_12 * f_end;
    let cos_kh = (1.0 + 5.0 * g_end) / (1.0 - g_end);
    if cos_kh <= -1.0 {
        return Err(Error::domain(format!("step {h} too coarse for k = {k}")));
    }
    let kd = cos_kh.acos() / h;

    let x = |j: usize| -halfwidth + j as f64 * h;
    let g = |j: usize| {
        if j <= 1 || j + 1 >= n {
            g_end
        } else {
            h2_12 * (scaled_potential(x(j), geom, l, opts.potential_scale) - k * k)
        }
    };
    let wave = |sign: f64, j: usize| Complex64::from_polar(1.0, sign * kd * x(j));

    // Iterate w_j = (1 - g_j) psi_j through w_{j-1} + w_{j+1} = c_j w_j.
    let coeff = |j: usize| {
        let gj = g(j);
        2.0 * (1.0 + 5.0 * gj) / (1.0 - gj)
    };
    let (incident_sign, (p0, p1), (j0, j1)) = match opts.incidence {
        Incidence::Left => {
            let mut w_next = wave(1.0, n) * (1.0 - g_end);
            let mut w_cur = wave(1.0, n - 1) * (1.0 - g_end);
            for j in (1..n).rev() {
                let w_prev = w_cur * coeff(j) - w_next;
                w_next = w_cur;
                w_cur = w_prev;
            }
            // w_cur = w_0, w_next = w_1
            (1.0, (w_cur / (1.0 - g_end), w_next / (1.0 - g_end)), (0, 1))
        }
        Incidence::Right => {
            let mut w_prev = wave(-1.0, 0) * (1.0 - g_end);
            let mut w_cur = wave(-1.0, 1) * (1.0 - g_end);
            for j in 1..n {
                let w_next = w_cur * coeff(j) - w_prev;
                w_prev = w_cur;
                w_cur = w_next;
            }
            // w_prev = w_{n-1}, w_cur = w_n
            (
                -1.0,
                (w_prev / (1.0 - g_end), w_cur / (1.0 - g_end)),
                (n - 1, n),
            )
        }
    };

    // psi_j = a * e_in(x_j) + b * e_out(x_j) at the two incident-side nodes.
    let e_in0 = wave(incident_sign, j0);
    let e_in1 = wave(incident_sign, j1);
    let det = e_in0 / e_in1 - e_in1 / e_in0;
    let a = (p0 / e_in1 - p1 / e_in0) / det;
    let b = (e_in0 * p1 - e_in1 * p0) / det;

    let t_amp = a.inv();
    let r_amp = b / a;
    let transmission = t_amp.norm_sqr();
    let reflection = r_amp.norm_sqr();

    // Singular values of [[e0, 1/e0], [e1, 1/e1]]: s1^2 + s2^2 = 4, s1 s2 = |det|.
    let d = det.norm();
    let disc = (4.0 - d * d).max(0.0).sqrt();
    let condition_number = (2.0 + disc) / d;

    Ok(TransmissionResult {
        k,
        l,
        t_amp,
        r_amp,
        transmission,
        reflection,
        unitarity_defect: (transmission + reflection - 1.0).abs(),
        domain_halfwidth: halfwidth,
        solver_steps: n,
        condition_number,
        converged: false,
    })
}
