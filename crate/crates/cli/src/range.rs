//! `start:stop:count` grids.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use wormhole_core::roots::{lin_space, log_space};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let start: f64 = start
            .trim()
            .parse()
            .map_err(|_| format!("bad range start '{start}'"))?;
        let stop: f64 = stop
            .trim()
            .parse()
            .map_err(|_| format!("bad range stop '{stop}'"))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| format!("bad range count '{count}'"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err("range endpoints must be finite".into());
        }
        if count == 0 {
            return Err("range count must be at least 1".into());
        }
        if count == 1 && start != stop {
            return Err("a single-point range needs start == stop".into());
        }
        if count > 1 && !(stop > start) {
            return Err(format!("range stop {stop} must exceed start {start}"));
        }
        Ok(Range { start, stop, count })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl Range {
    /// Grid points; log spacing needs a positive start.
    pub fn points(&self, log: bool) -> Result<Vec<f64>, String> {
        if log {
            if !(self.start > 0.0) {
                return Err(format!(
                    "--log needs a positive range start, got {}",
                    self.start
                ));
            }
            Ok(log_space(self.start, self.stop, self.count))
        } else {
            Ok(lin_space(self.start, self.stop, self.count))
        }
    }
}
