use clap::Args;
use serde::Serialize;
use wormhole_core::potential::{fourier_cutoff, v_eff, v_fourier_closed, v_fourier_numeric};
use wormhole_core::Error;

use super::emit;
use crate::output::{Document, Table};
use crate::range::Range;
use crate::{CliError, CliResult, Common};

/// Largest relative FT discrepancy accepted by `--check-ft`.
const FT_CHECK_LIMIT: f64 = 1e-6;

#[derive(Debug, Args, Serialize)]
pub struct PotentialArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Angular momentum quantum number.
    #[arg(long = "L", default_value_t = 0)]
    pub l: u32,
    /// Radii as start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    pub r_range: Option<Range>,
    /// Momentum transfers as start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    pub q_range: Option<Range>,
    /// Log-spaced grids.
    #[arg(long)]
    pub log: bool,
    /// Add the quadrature transform and its relative error.
    #[arg(long)]
    pub check_ft: bool,
}

pub fn run(args: PotentialArgs) -> CliResult<()> {
    let geom = args.common.geometry()?;
    let tol = args.common.tolerance()?;
    if args.r_range.is_none() && args.q_range.is_none() {
        return Err(CliError::Usage(
            "potential needs --r-range and/or --q-range".into(),
        ));
    }
    if args.check_ft && args.q_range.is_none() {
        return Err(CliError::Usage("--check-ft needs --q-range".into()));
    }
    let r_grid = args
        .r_range
        .map(|r| r.points(args.log))
        .transpose()
        .map_err(CliError::Usage)?;
    let q_grid = args
        .q_range
        .map(|r| r.points(args.log))
        .transpose()
        .map_err(CliError::Usage)?;
    if q_grid.as_ref().is_some_and(|g| g.iter().any(|&q| q < 0.0)) {
        return Err(CliError::Usage("--q-range: q must be non-negative".into()));
    }

    let mut doc = Document::new("potential", &args);
    if let Some(grid) = r_grid {
        let mut t = Table::new("v_eff", &["r", "v_eff"]);
        for r in grid {
            t.push(vec![r.into(), v_eff(r, &geom, args.l)?.into()]);
        }
        doc.tables.push(t);
    }

    let mut worst: Option<(f64, f64)> = None;
    let mut failures = 0;
    if let Some(grid) = q_grid {
        if args.check_ft {
            let mut t = Table::new(
                "fourier",
                &[
                    "q",
                    "v_closed",
                    "v_numeric",
                    "numeric_error",
                    "rel_err",
                    "cutoff",
                    "status",
                ],
            );
            for q in grid {
                let closed = v_fourier_closed(q, &geom, args.l)?;
                let (value, error, cutoff, status) = match v_fourier_numeric(q, &geom, args.l, tol)
                {
                    Ok(est) => (est.value, est.error, est.cutoff, "ok"),
                    Err(Error::Quadrature {
                        estimate, error, ..
                    }) => {
                        failures += 1;
                        (estimate, error, fourier_cutoff(q, &geom), "unconverged")
                    }
                    Err(e) => return Err(e.into()),
                };
                let rel = (value - closed).abs() / closed;
                if worst.is_none_or(|(_, w)| rel > w) {
                    worst = Some((q, rel));
                }
                t.push(vec![
                    q.into(),
                    closed.into(),
                    value.into(),
                    error.into(),
                    rel.into(),
                    cutoff.into(),
                    status.into(),
                ]);
            }
            doc.tables.push(t);
        } else {
            let mut t = Table::new("fourier", &["q", "v_closed"]);
            for q in grid {
                t.push(vec![q.into(), v_fourier_closed(q, &geom, args.l)?.into()]);
            }
            doc.tables.push(t);
        }
    }
    if let Some((q, rel)) = worst {
        doc.note(format!(
            "largest relative transform error {rel:e} at q = {q}"
        ));
    }
    emit(&doc, &args.common)?;

    if failures > 0 {
        return Err(CliError::Numerical(format!(
            "{failures} transform quadratures did not converge"
        )));
    }
    match worst {
        Some((q, rel)) if !(rel <= FT_CHECK_LIMIT) => Err(CliError::Numerical(format!(
            "transform check failed: relative error {rel:e} at q = {q} exceeds {FT_CHECK_LIMIT:e}"
        ))),
        _ => Ok(()),
    }
}
