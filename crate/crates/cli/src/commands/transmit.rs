use clap::Args;
use serde::Serialize;
use wormhole_core::transmission::{transmission_scan, TransmissionOptions, TransmissionResult};
use wormhole_core::Error;

use super::emit;
use crate::output::{Cell, Document, Table};
use crate::range::Range;
use crate::{CliError, CliResult, Common};

/// Fraction of converged grid points below which the run fails.
const MIN_CONVERGED: f64 = 0.99;

#[derive(Debug, Args, Serialize)]
pub struct TransmitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Angular momentum quantum number.
    #[arg(long = "L", default_value_t = 0)]
    pub l: u32,
    /// Wavenumbers as start:stop:count [default: 0.1/b0 to 10/b0, 200 points].
    #[arg(long, allow_hyphen_values = true)]
    pub k_range: Option<Range>,
    /// Log-spaced grid.
    #[arg(long)]
    pub log: bool,
    /// Allow L >= 1 (no plane-wave asymptotics; not validated).
    #[arg(long = "experimental-L")]
    pub experimental_l: bool,
    /// Compare peaks with the predicted resonances n = 1..=N.
    #[arg(long, value_name = "N")]
    pub resonances: Option<u32>,
    /// Box half-width [default: max(200 b0, 40/k)].
    #[arg(long, allow_negative_numbers = true)]
    pub halfwidth: Option<f64>,
    /// Numerov steps across the box [default: from b0/200 and 0.05/k].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Largest accepted |T + R - 1|.
    #[arg(long, default_value_t = 1e-8)]
    pub unitarity_threshold: f64,
}

fn status(
    result: &wormhole_core::Result<TransmissionResult>,
) -> (Option<&TransmissionResult>, String) {
    match result {
        Ok(r) => (Some(r), "ok".into()),
        Err(Error::Unitarity { best }) => (Some(best), "unconverged".into()),
        Err(e) => (None, format!("error: {e}")),
    }
}

pub fn run(args: TransmitArgs) -> CliResult<()> {
    let geom = args.common.geometry()?;
    if args.l > 0 && !args.experimental_l {
        return Err(CliError::Usage(format!(
            "--L {} is behind the experimental gate: the 1/r^2 tail has no plane-wave asymptotics; pass --experimental-L to run it anyway",
            args.l
        )));
    }
    if args.resonances == Some(0) {
        return Err(CliError::Usage("--resonances must be at least 1".into()));
    }
    if let Some(h) = args.halfwidth {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::Usage(format!(
                "--halfwidth must be positive, got {h}"
            )));
        }
    }
    if args.steps == Some(0) {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    if !(args.unitarity_threshold > 0.0) {
        return Err(CliError::Usage(
            "--unitarity-threshold must be positive".into(),
        ));
    }
    let range = args.k_range.unwrap_or(Range {
        start: 0.1 / geom.b0(),
        stop: 10.0 / geom.b0(),
        count: 200,
    });
    let grid = range.points(args.log).map_err(CliError::Usage)?;
    if grid.iter().any(|&k| !(k > 0.0)) {
        return Err(CliError::Usage(
            "--k-range: wavenumbers must be positive".into(),
        ));
    }

    let opts = TransmissionOptions {
        domain_halfwidth: args.halfwidth,
        steps: args.steps,
        unitarity_threshold: args.unitarity_threshold,
        experimental_higher_l: args.experimental_l,
        ..Default::default()
    };
    let scan = transmission_scan(
        &geom,
        args.l,
        &grid,
        &opts,
        Some(args.resonances.unwrap_or(0)),
    )?;

    let mut doc = Document::new("transmit", &args);
    let mut t = Table::new(
        "transmission",
        &[
            "k",
            "L",
            "T",
            "R",
            "unitarity_defect",
            "domain_halfwidth",
            "condition_number",
            "steps",
            "status",
        ],
    );
    for p in &scan.points {
        let (res, status) = status(&p.result);
        let num = |f: fn(&TransmissionResult) -> f64| Cell::from(res.map_or(f64::NAN, f));
        t.push(vec![
            p.k.into(),
            args.l.into(),
            num(|r| r.transmission),
            num(|r| r.reflection),
            num(|r| r.unitarity_defect),
            num(|r| r.domain_halfwidth),
            num(|r| r.condition_number),
            res.map(|r| r.solver_steps).into(),
            status.into(),
        ]);
    }
    doc.tables.push(t);

    let mut peaks = Table::new("peaks", &["index", "k", "T", "prominence"]);
    for p in &scan.peaks {
        peaks.push(vec![
            p.index.into(),
            p.k.into(),
            p.transmission.into(),
            p.prominence.into(),
        ]);
    }
    doc.note(format!(
        "peaks: strict local maxima of T with prominence above {:e}; {} shallower ones ignored as rounding ripple",
        args.unitarity_threshold, scan.ripple_peaks
    ));
    doc.tables.push(peaks);

    if args.resonances.is_some() {
        doc.note("resonances: lambda_n = 4 n b0, k_n = pi/(2 n b0); T(k_n) = 1 is a prediction, not asserted");
        let mut r = Table::new(
            "resonances",
            &[
                "n",
                "wavelength",
                "k_predicted",
                "T_at_prediction",
                "nearest_peak_k",
                "peak_offset",
                "validity_ratio",
                "validity_warning",
            ],
        );
        for c in &scan.resonances {
            r.push(vec![
                c.n.into(),
                c.wavelength.into(),
                c.k_predicted.into(),
                c.transmission_at_prediction.into(),
                c.nearest_peak_k.into(),
                c.peak_offset.into(),
                c.validity_ratio.into(),
                c.validity_warning.into(),
            ]);
        }
        doc.tables.push(r);
    }

    let fraction = scan.converged_fraction();
    doc.note(format!("converged fraction {fraction}"));
    emit(&doc, &args.common)?;
    if fraction < MIN_CONVERGED {
        return Err(CliError::Numerical(format!(
            "only {:.1}% of grid points converged (need {}%)",
            100.0 * fraction,
            100.0 * MIN_CONVERGED
        )));
    }
    Ok(())
}
