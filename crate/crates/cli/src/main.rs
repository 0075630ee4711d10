//! `wormhole`: tabulate the throat potential, transmission, Born cross-sections
//! and the interior series solution.
//!
//! Exit status is 0 on success, 1 on a numerical failure and 2 on a usage or
//! validation error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use output::Format;

/// Environment variable overriding the default quadrature tolerance.
pub const TOL_ENV: &str = "WORMHOLE_TOL";
const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<wormhole_core::Error> for CliError {
    fn from(e: wormhole_core::Error) -> Self {
        match e {
            wormhole_core::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "wormhole",
    version,
    about = "Scattering off a wormhole throat: potential, transmission, Born and Heun tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate v_eff(r) and its Fourier transform.
    Potential(commands::potential::PotentialArgs),
    /// Transmission and reflection over a wavenumber grid.
    Transmit(commands::transmit::TransmitArgs),
    /// Born amplitude and cross-sections.
    Born(commands::born::BornArgs),
    /// Residual check of the interior Heun solution.
    Heun(commands::heun::HeunArgs),
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Throat radius.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b0: f64,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Relative quadrature tolerance [default: $WORMHOLE_TOL or 1e-9].
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
}

impl Common {
    pub fn geometry(&self) -> CliResult<wormhole_core::WormholeGeometry> {
        wormhole_core::WormholeGeometry::new(self.b0)
            .map_err(|e| CliError::Usage(format!("--b0: {e}")))
    }

    /// Tolerance from the flag, then the environment, then the default.
    pub fn tolerance(&self) -> CliResult<f64> {
        let (tol, source) = match self.tol {
            Some(t) => (t, "--tol".to_string()),
            None => match std::env::var(TOL_ENV) {
                Ok(s) => (
                    s.trim().parse::<f64>().map_err(|_| {
                        CliError::Usage(format!("{TOL_ENV}: '{s}' is not a number"))
                    })?,
                    TOL_ENV.to_string(),
                ),
                Err(_) => (DEFAULT_TOL, "default".to_string()),
            },
        };
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Usage(format!(
                "{source}: tolerance must lie in (0, 1), got {tol}"
            )));
        }
        Ok(tol)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Potential(args) => commands::potential::run(args),
        Command::Transmit(args) => commands::transmit::run(args),
        Command::Born(args) => commands::born::run(args),
        Command::Heun(args) => commands::heun::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(1),
    }
}
