//! Quantum scattering of a zero-angular-momentum particle by the throat of a
//! static wormhole, treated as a one-dimensional waveguide.
//!
//! Units throughout: `hbar = 2 m0 = 1`, so energies are squared wavenumbers.
//!
//! - [`potential`]: the effective potential and its Fourier transform.
//! - [`transmission`]: exact transmission spectra and the semiclassical
//!   resonance condition `lambda = 4 n b0`.
//! - [`born`]: first-Born amplitudes and cross-sections.
//! - [`heun`]: the confluent-Heun interior solution.

// `!(x > 0.0)` is used deliberately so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod born;
pub mod error;
pub mod heun;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod roots;
pub mod transmission;

pub use error::{Error, Result};
pub use potential::{ScatterContext, WormholeGeometry};
