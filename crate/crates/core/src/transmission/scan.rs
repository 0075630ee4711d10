use rayon::prelude::*;
use serde::Serialize;

use super::wkb::resonance_wavelengths;
use super::{solve_transmission, TransmissionOptions, TransmissionResult};
use crate::error::{Error, Result};
use crate::potential::{ScatterContext, WormholeGeometry};

/// One grid point of a scan; failed solves keep their error.
#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub k: f64,
    pub result: Result<TransmissionResult>,
}

impl ScanPoint {
    /// Transmission of a converged solve, or the best estimate of a failed one.
    pub fn transmission(&self) -> Option<f64> {
        match &self.result {
            Ok(r) => Some(r.transmission),
            Err(Error::Unitarity { best }) => Some(best.transmission),
            Err(_) => None,
        }
    }

    pub fn converged(&self) -> bool {
        self.result.is_ok()
    }
}

/// Local maximum of `T(k)` on the scan grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub index: usize,
    pub k: f64,
    pub transmission: f64,
    /// Height above the higher of the two neighbours.
    pub prominence: f64,
}

/// Predicted transparent wavenumber against the exact solve.
#[derive(Debug, Clone, Serialize)]
pub struct ResonanceComparison {
    pub n: u32,
    pub wavelength: f64,
    pub k_predicted: f64,
    /// Exact transmission at `k_predicted`, `None` if the solve failed.
    pub transmission_at_prediction: Option<f64>,
    pub nearest_peak_k: Option<f64>,
    /// `nearest_peak_k - k_predicted`
    pub peak_offset: Option<f64>,
    pub validity_ratio: f64,
    pub validity_warning: bool,
}

#[derive(Debug, Clone)]
pub struct TransmissionScan {
    pub points: Vec<ScanPoint>,
    /// Peaks standing out by more than the unitarity threshold.
    pub peaks: Vec<Peak>,
    /// Strict local maxima too shallow to be resolved by the solver.
    pub ripple_peaks: usize,
    pub resonances: Vec<ResonanceComparison>,
}

impl TransmissionScan {
    pub fn converged_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 1.0;
        }
        self.points.iter().filter(|p| p.converged()).count() as f64 / self.points.len() as f64
    }
}

/// Strict local maxima; a flat top is reported at its leftmost point.
/// Endpoints and missing values never qualify.
pub fn find_peaks(ks: &[f64], values: &[Option<f64>]) -> Vec<Peak> {
    let mut peaks = Vec::new();
    let n = values.len();
    let mut i = 1;
    while i + 1 < n {
        let Some(v) = values[i] else {
            i += 1;
            continue;
        };
        let mut j = i;
        while j + 1 < n && values[j + 1] == Some(v) {
            j += 1;
        }
        if let (Some(left), Some(Some(right))) = (values[i - 1], values.get(j + 1)) {
            if left < v && *right < v {
                peaks.push(Peak {
                    index: i,
                    k: ks[i],
                    transmission: v,
                    prominence: v - left.max(*right),
                });
            }
        }
        i = j + 1;
    }
    peaks
}

/// Solve on every grid point (in parallel, returned in grid order), locate
/// the peaks of `T(k)` whose prominence exceeds the unitarity threshold
/// (shallower ones are rounding ripple and only counted), and compare them with the predicted resonances of
/// order `1..=resonance_orders`. With `resonance_orders = None` the orders
/// whose `k_n` lies inside the grid are used.
pub fn transmission_scan(
    geom: &WormholeGeometry,
    l: u32,
    k_grid: &[f64],
    opts: &TransmissionOptions,
    resonance_orders: Option<u32>,
) -> Result<TransmissionScan> {
    if k_grid.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
        return Err(Error::domain(
            "scan wavenumbers must be positive and finite",
        ));
    }
    if k_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("scan wavenumbers must be strictly ascending"));
    }

    let points: Vec<ScanPoint> = k_grid
        .par_iter()
        .map(|&k| ScanPoint {
            k,
            result: ScatterContext::new(k, l).and_then(|ctx| solve_transmission(&ctx, geom, opts)),
        })
        .collect();
    let values: Vec<Option<f64>> = points.iter().map(ScanPoint::transmission).collect();
    let (peaks, ripple): (Vec<Peak>, Vec<Peak>) = find_peaks(k_grid, &values)
        .into_iter()
        .partition(|p| p.prominence > opts.unitarity_threshold);

    let orders = match resonance_orders {
        Some(n) => n,
        None if k_grid.is_empty() => 0,
        None => {
            let k_min = k_grid[0];
            // k_n = pi / (2 n b0) >= k_min
            (std::f64::consts::PI / (2.0 * geom.b0() * k_min)).floor() as u32
        }
    };
    let resonances = if orders == 0 {
        Vec::new()
    } else {
        resonance_wavelengths(geom, orders)?
            .into_par_iter()
            .map(|res| {
                let t = ScatterContext::new(res.k, l)
                    .and_then(|ctx| solve_transmission(&ctx, geom, opts))
                    .ok()
                    .map(|r| r.transmission);
                let nearest = peaks
                    .iter()
                    .min_by(|a, b| (a.k - res.k).abs().total_cmp(&(b.k - res.k).abs()))
                    .map(|p| p.k);
                ResonanceComparison {
                    n: res.n,
                    wavelength: res.wavelength,
                    k_predicted: res.k,
                    transmission_at_prediction: t,
                    nearest_peak_k: nearest,
                    peak_offset: nearest.map(|p| p - res.k),
                    validity_ratio: res.validity_ratio,
                    validity_warning: res.validity_ratio > super::VALIDITY_WARNING_RATIO,
                }
            })
            .collect()
    };

    Ok(TransmissionScan {
        points,
        peaks,
        ripple_peaks: ripple.len(),
        resonances,
    })
}
