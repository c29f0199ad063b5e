use serde::Serialize;

use super::{MetricKind, MetricSpec, INFINITE_SERIES_CONE_EPS};
use crate::error::{Error, Result};

/// Grid evaluation of `E(s) = φ(s) − sφ′(s) + (b² − s²)φ″(s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShenReport {
    pub metric: &'static str,
    pub b: f64,
    pub interval: [f64; 2],
    pub n_grid: usize,
    pub min_e: f64,
    pub argmin_s: f64,
    pub pass: bool,
}

impl MetricSpec {
    /// Samples `E(s)` on a uniform grid of the admissible `s`-interval:
    /// `[−b, b]` in general, `[1 + ε, b]` for the infinite-series metric.
    /// Passes iff the minimum is strictly positive.
    pub fn shen_check(&self, b: f64, n_grid: usize) -> Result<ShenReport> {
        if n_grid < 3 {
            return Err(Error::input(format!(
                "n_grid must be at least 3, got {n_grid}"
            )));
        }
        if !(b >= 0.0) || b >= self.b0() {
            return Err(Error::domain(format!(
                "b must satisfy 0 <= b < b0 = {}, got {b}",
                self.b0()
            )));
        }
        let (lo, hi) = match self.kind() {
            MetricKind::InfiniteSeries => {
                let lo = 1.0 + INFINITE_SERIES_CONE_EPS;
                if b <= lo {
                    return Err(Error::domain(format!(
                        "infinite_series: admissible interval [1+ε, b] is empty for b = {b}"
                    )));
                }
                (lo, b)
            }
            _ => (-b, b),
        };
        let mut min_e = f64::INFINITY;
        let mut argmin_s = lo;
        let span = hi - lo;
        let last = (n_grid - 1) as f64;
        for k in 0..n_grid {
            let s = if k + 1 == n_grid {
                hi
            } else {
                lo + span * (k as f64) / last
            };
            let p = self.phi(s)?;
            let e = p.phi - s * p.d1 + (b * b - s * s) * p.d2;
            // NaN counts as a failure.
            if e < min_e || e.is_nan() {
                min_e = e;
                argmin_s = s;
                if e.is_nan() {
                    break;
                }
            }
        }
        Ok(ShenReport {
            metric: self.kind().name(),
            b,
            interval: [lo, hi],
            n_grid,
            min_e,
            argmin_s,
            pass: min_e > 0.0,
        })
    }
}
