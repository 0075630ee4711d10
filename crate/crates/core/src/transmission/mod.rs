//! Transmission through the throat: an exact numerical solve of the effective
//! one-dimensional Schrödinger equation, and the semiclassical phase
//! accumulation that predicts transparent wavelengths `lambda = 4 n b0`.
//!
//! The scattering problem is `psi'' + k^2 psi = v_eff(r) psi` on
//! `[-R, R]`, with the potential frozen at its edge value `v_eff(R)` outside
//! the box. A purely outgoing wave on the far side is swept back to the
//! incident side and split into incident and reflected plane waves.

mod numerov;
pub mod reference;
mod scan;
mod wkb;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{v_eff_unchecked, ScatterContext, WormholeGeometry};

pub use scan::{
    find_peaks, transmission_scan, Peak, ResonanceComparison, ScanPoint, TransmissionScan,
};
pub use wkb::{
    resonance_wavelengths, wkb_delta_p, wkb_phase, Resonance, WkbReport, VALIDITY_WARNING_RATIO,
};

/// Side from which the incident wave arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Incidence {
    #[default]
    Left,
    Right,
}

#[derive(Debug, Clone, Copy)]
pub struct TransmissionOptions {
    /// Half-width `R` of the integration box; `None` picks `max(200 b0, 40/k)`.
    pub domain_halfwidth: Option<f64>,
    /// Numerov steps across `[-R, R]`; `None` derives the count from
    /// [`TransmissionOptions::default_steps`].
    pub steps: Option<usize>,
    pub unitarity_threshold: f64,
    /// Number of step doublings tried before giving up.
    pub max_refinements: usize,
    /// Allow `L >= 1`, whose `1/r^2` tail has no plane-wave asymptotics.
    pub experimental_higher_l: bool,
    /// Multiplies the potential; zero gives free propagation.
    pub potential_scale: f64,
    pub incidence: Incidence,
}

impl Default for TransmissionOptions {
    fn default() -> Self {
        TransmissionOptions {
            domain_halfwidth: None,
            steps: None,
            unitarity_threshold: 1e-8,
            max_refinements: 3,
            experimental_higher_l: false,
            potential_scale: 1.0,
            incidence: Incidence::Left,
        }
    }
}

impl TransmissionOptions {
    pub fn halfwidth(&self, k: f64, geom: &WormholeGeometry) -> f64 {
        self.domain_halfwidth
            .unwrap_or_else(|| (200.0 * geom.b0()).max(40.0 / k))
    }

    /// Default step: the finer of `b0/200` and `1/(20 k)`.
    pub fn default_steps(k: f64, geom: &WormholeGeometry, halfwidth: f64) -> usize {
        let h = (geom.b0() / 200.0).min(0.05 / k);
        ((2.0 * halfwidth / h).ceil() as usize).max(16)
    }
}

/// Bound on the phase neglected by cutting the `L = 0` potential at `R`:
/// `(1/2k) ∫_R^inf b0^2/r^4 dr = b0^2 / (6 k R^3)`, counted on both sides.
pub fn truncation_phase_bound(k: f64, geom: &WormholeGeometry, halfwidth: f64) -> f64 {
    2.0 * geom.b0().powi(2) / (6.0 * k * halfwidth.powi(3))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionResult {
    pub k: f64,
    pub l: u32,
    pub t_amp: Complex64,
    pub r_amp: Complex64,
    /// `|t|^2`
    pub transmission: f64,
    /// `|r|^2`
    pub reflection: f64,
    pub unitarity_defect: f64,
    pub domain_halfwidth: f64,
    pub solver_steps: usize,
    /// 2-norm condition number of the plane-wave matching system.
    pub condition_number: f64,
    pub converged: bool,
}

pub(crate) fn validate(ctx: &ScatterContext, opts: &TransmissionOptions) -> Result<()> {
    if !(ctx.k() > 0.0) {
        return Err(Error::domain(format!(
            "transmission needs k > 0, got {}",
            ctx.k()
        )));
    }
    if ctx.l() > 0 && !opts.experimental_higher_l {
        return Err(Error::domain(format!(
            "L = {} transmission is experimental; the 1/r^2 tail has no plane-wave asymptotics",
            ctx.l()
        )));
    }
    if !(opts.potential_scale.is_finite()) {
        return Err(Error::domain("potential scale must be finite"));
    }
    if !(opts.unitarity_threshold > 0.0) {
        return Err(Error::domain("unitarity threshold must be positive"));
    }
    if let Some(r) = opts.domain_halfwidth {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain(format!(
                "domain half-width must be positive, got {r}"
            )));
        }
    }
    Ok(())
}

/// Potential times `potential_scale`, used by both solvers.
#[inline]
pub(crate) fn scaled_potential(r: f64, geom: &WormholeGeometry, l: u32, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        scale * v_eff_unchecked(r, geom.b0(), l)
    }
}

/// Solve the scattering problem with the fixed-step Numerov sweep.
///
/// The step count doubles until `|T + R - 1|` drops below the threshold;
/// if it never does, the error carries the best result.
pub fn solve_transmission(
    ctx: &ScatterContext,
    geom: &WormholeGeometry,
    opts: &TransmissionOptions,
) -> Result<TransmissionResult> {
    validate(ctx, opts)?;
    let halfwidth = opts.halfwidth(ctx.k(), geom);
    let mut steps = opts
        .steps
        .unwrap_or_else(|| TransmissionOptions::default_steps(ctx.k(), geom, halfwidth));
    let mut best: Option<TransmissionResult> = None;
    for _ in 0..=opts.max_refinements {
        let mut res = numerov::solve(ctx, geom, opts, halfwidth, steps)?;
        if res.unitarity_defect <= opts.unitarity_threshold {
            res.converged = true;
            return Ok(res);
        }
        if best
            .as_ref()
            .is_none_or(|b| res.unitarity_defect < b.unitarity_defect)
        {
            best = Some(res);
        }
        steps *= 2;
    }
    Err(Error::Unitarity {
        best: Box::new(best.expect("at least one attempt")),
    })
}
