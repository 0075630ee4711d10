use std::f64::consts::PI;

use clap::Args;
use serde::Serialize;
use wormhole_core::born::{born_result, closed_form_audit, eq15_roots, figure2_data, ClosedForm};
use wormhole_core::roots::lin_space;
use wormhole_core::ScatterContext;

use super::emit;
use crate::output::{Document, Table};
use crate::range::Range;
use crate::{CliError, CliResult, Common};

#[derive(Debug, Args, Serialize)]
pub struct BornArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Angular momentum quantum number.
    #[arg(long = "L", default_value_t = 0)]
    pub l: u32,
    /// L = 0 cross-section versus x = b0 k (the default mode).
    #[arg(long)]
    pub figure2: bool,
    /// x = b0 k as start:stop:count [default: 0.05:20:200 log-spaced].
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Option<Range>,
    /// Log-spaced grid.
    #[arg(long)]
    pub log: bool,
    /// Use the closed form with the constant 16 + 9 in place of 16 L + 9.
    #[arg(long)]
    pub as_printed: bool,
    /// Amplitude and differential cross-section versus angle at --k.
    #[arg(long)]
    pub dcs: bool,
    /// Wavenumber for --dcs.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k: f64,
    /// Angles in the --dcs table.
    #[arg(long, default_value_t = 181)]
    pub theta_count: usize,
    /// Search the L = 0 cross-section for zeros on (0, 50].
    #[arg(long)]
    pub eq15_roots: bool,
    /// Fit the last closed-form constant against quadrature for L = 0, 1, 2.
    #[arg(long)]
    pub audit: bool,
}

pub fn run(args: BornArgs) -> CliResult<()> {
    let geom = args.common.geometry()?;
    let tol = args.common.tolerance()?;
    let figure2 = args.figure2 || !(args.dcs || args.eq15_roots || args.audit);
    if figure2 && args.l != 0 {
        return Err(CliError::Usage(format!(
            "--figure2 is the L = 0 cross-section; got --L {}",
            args.l
        )));
    }
    if !(args.k >= 0.0 && args.k.is_finite()) {
        return Err(CliError::Usage(format!(
            "--k must be non-negative, got {}",
            args.k
        )));
    }
    if args.dcs && args.theta_count < 2 {
        return Err(CliError::Usage("--theta-count must be at least 2".into()));
    }
    let form = if args.as_printed {
        ClosedForm::AsPrinted
    } else {
        ClosedForm::Corrected
    };

    let mut doc = Document::new("born", &args);
    let mut failures = Vec::new();

    if figure2 {
        let (range, log) = match args.x_range {
            Some(r) => (r, args.log),
            None => (
                Range {
                    start: 0.05,
                    stop: 20.0,
                    count: 200,
                },
                true,
            ),
        };
        let grid = range.points(log).map_err(CliError::Usage)?;
        let rows = figure2_data(&geom, &grid, tol, form)?;
        let mut t = Table::new(
            "figure2",
            &[
                "x",
                "sigma_quad",
                "sigma_quad_err",
                "sigma_closed",
                "rel_discrepancy",
                "status",
            ],
        );
        let mut worst: f64 = 0.0;
        for row in &rows {
            worst = worst.max(row.rel_discrepancy);
            if let Some(f) = &row.failure {
                failures.push(format!("x = {}: {f}", row.x));
            }
            t.push(vec![
                row.x.into(),
                row.sigma_quad.into(),
                row.sigma_quad_err.into(),
                row.sigma_closed.into(),
                row.rel_discrepancy.into(),
                row.failure.as_deref().unwrap_or("ok").into(),
            ]);
        }
        doc.note(format!(
            "closed form {:?}: largest relative discrepancy against quadrature {worst:e}",
            form
        ));
        doc.tables.push(t);
    }

    if args.dcs {
        let ctx = ScatterContext::new(args.k, args.l)?;
        let mut t = Table::new("dcs", &["theta", "amplitude", "dcs"]);
        for theta in lin_space(0.0, PI, args.theta_count) {
            let r = born_result(theta, &ctx, &geom)?;
            t.push(vec![theta.into(), r.amplitude.into(), r.dcs.into()]);
        }
        doc.tables.push(t);
    }

    if args.eq15_roots {
        let roots = eq15_roots(&geom)?;
        let mut t = Table::new("eq15_roots", &["x"]);
        for &x in &roots {
            t.push(vec![x.into()]);
        }
        let msg = if roots.is_empty() {
            "no roots found on (0, 50]".to_string()
        } else {
            format!("{} roots found on (0, 50]", roots.len())
        };
        eprintln!("{msg}");
        doc.note(msg);
        doc.tables.push(t);
    }

    if args.audit {
        let grid = Range {
            start: 0.05,
            stop: 20.0,
            count: 40,
        }
        .points(true)
        .map_err(CliError::Usage)?;
        let mut t = Table::new(
            "closed_form_audit",
            &[
                "L",
                "printed_coefficient",
                "corrected_coefficient",
                "inferred_coefficient",
                "max_rel_discrepancy_printed",
                "max_rel_discrepancy_corrected",
            ],
        );
        for l in 0..=2 {
            let a = closed_form_audit(l, &geom, &grid, tol)?;
            t.push(vec![
                a.l.into(),
                a.printed_coefficient.into(),
                a.corrected_coefficient.into(),
                a.inferred_coefficient.into(),
                a.max_discrepancy_as_printed.into(),
                a.max_discrepancy_corrected.into(),
            ]);
        }
        doc.tables.push(t);
    }

    emit(&doc, &args.common)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{} rows failed; first: {}",
            failures.len(),
            failures[0]
        )))
    }
}
