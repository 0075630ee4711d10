use clap::Args;
use serde::Serialize;
use wormhole_core::heun::{integrate_interior, ode_residual, Branch, ExactInteriorSolution};
use wormhole_core::ode::OdeOptions;
use wormhole_core::ScatterContext;

use super::emit;
use crate::output::{Document, Table};
use crate::{CliError, CliResult, Common};

const DEFAULT_KB0: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const DEFAULT_L: [u32; 3] = [0, 1, 2];

#[derive(Debug, Args, Serialize)]
pub struct HeunArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Single k b0 [default: 0, 0.5, 1, 2].
    #[arg(long, allow_negative_numbers = true)]
    pub kb0: Option<f64>,
    /// Single L [default: 0, 1, 2].
    #[arg(long = "L")]
    pub l: Option<u32>,
    /// Shift eta away from its exact value (negative control).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb_eta: f64,
    /// Largest residual accepted.
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
    /// Largest |r| / b0 on the residual grid.
    #[arg(long, default_value_t = 0.9)]
    pub r_max: f64,
    /// Also compare with direct numerical integration from r = 0.
    #[arg(long)]
    pub check_ode: bool,
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Even => "even",
        Branch::Odd => "odd",
    }
}

pub fn run(args: HeunArgs) -> CliResult<()> {
    let geom = args.common.geometry()?;
    let b0 = geom.b0();
    if let Some(kb) = args.kb0 {
        if !(kb >= 0.0 && kb.is_finite()) {
            return Err(CliError::Usage(format!(
                "--kb0 must be non-negative, got {kb}"
            )));
        }
    }
    if !args.perturb_eta.is_finite() {
        return Err(CliError::Usage("--perturb-eta must be finite".into()));
    }
    if !(args.threshold > 0.0) {
        return Err(CliError::Usage("--threshold must be positive".into()));
    }
    if !(args.r_max > 0.0 && args.r_max < 0.95) {
        return Err(CliError::Usage(format!(
            "--r-max must lie in (0, 0.95), got {}",
            args.r_max
        )));
    }
    let kbs: Vec<f64> = args.kb0.map_or(DEFAULT_KB0.to_vec(), |k| vec![k]);
    let ls: Vec<u32> = args.l.map_or(DEFAULT_L.to_vec(), |l| vec![l]);
    let steps = (args.r_max * 100.0).round() as i64;
    let grid: Vec<f64> = (-steps..=steps)
        .map(|i| i as f64 * args.r_max * b0 / steps as f64)
        .collect();
    let positive: Vec<f64> = grid.iter().copied().filter(|&r| r > 0.0).collect();

    let mut columns = vec![
        "k",
        "L",
        "branch",
        "max_residual",
        "truncation_order",
        "worst_r",
    ];
    if args.check_ode {
        columns.push("ode_max_diff");
    }
    let mut t = Table::new("residuals", &columns);
    let mut worst: Option<(f64, String)> = None;
    for &kb in &kbs {
        for &l in &ls {
            let ctx = ScatterContext::new(kb / b0, l)?;
            for (branch, c1, c2) in [(Branch::Even, 1.0, 0.0), (Branch::Odd, 0.0, 1.0)] {
                let sol =
                    ExactInteriorSolution::with_eta_shift(geom, ctx, c1, c2, args.perturb_eta)?;
                let rep = ode_residual(&sol, &grid)?;
                let label = format!(
                    "k b0 = {kb}, L = {l}, {} branch, r = {}",
                    branch_name(branch),
                    rep.worst_r
                );
                if worst
                    .as_ref()
                    .is_none_or(|(w, _)| !(rep.max_residual <= *w))
                {
                    worst = Some((rep.max_residual, label));
                }
                let mut row = vec![
                    ctx.k().into(),
                    l.into(),
                    branch_name(branch).into(),
                    rep.max_residual.into(),
                    rep.truncation_order.into(),
                    rep.worst_r.into(),
                ];
                if args.check_ode {
                    let opts = OdeOptions {
                        rel_tol: 1e-13,
                        abs_tol: 1e-15,
                        ..Default::default()
                    };
                    let direct = integrate_interior(&geom, &ctx, branch, &positive, opts)?;
                    let mut diff: f64 = 0.0;
                    for (&r, d) in positive.iter().zip(direct) {
                        let s = sol.evaluate(r)?.psi;
                        diff = diff.max((s - d).abs() / d.abs().max(1.0));
                    }
                    row.push(diff.into());
                }
                t.push(row);
            }
        }
    }

    let mut doc = Document::new("heun", &args);
    doc.note(format!(
        "residual |psi'' + k^2 psi - v_eff psi| / max(|psi|, 1e-3) on |r| <= {} b0",
        args.r_max
    ));
    doc.tables.push(t);
    emit(&doc, &args.common)?;

    match worst {
        Some((w, label)) if !(w <= args.threshold) => Err(CliError::Numerical(format!(
            "residual {w:e} exceeds {:e} at {label}",
            args.threshold
        ))),
        _ => Ok(()),
    }
}
