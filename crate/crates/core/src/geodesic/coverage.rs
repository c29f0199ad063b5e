use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{HomogeneousSpace, ResidualSource};
use crate::error::{Error, Result};
use crate::util::{normal_vec, rng};

/// Uncovered directions kept in a report.
pub const MAX_UNCOVERED_EXAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoCoverageReport {
    pub directions_sampled: usize,
    pub directions_covered: usize,
    /// `directions_covered / directions_sampled`.
    pub coverage_ratio: f64,
    /// `α`-unit directions in `𝔪` coordinates, in sampling order.
    pub uncovered_examples: Vec<Vec<f64>>,
    /// Gaussian draws needed to obtain the admissible directions.
    pub draws: usize,
    pub max_best_residual: f64,
    pub source: ResidualSource,
    pub tol: f64,
    pub seed: u64,
}

struct DirectionOutcome {
    covered: bool,
    residual: f64,
}

impl HomogeneousSpace {
    /// Fraction of sampled directions `u ∈ 𝔪` that are the `𝔪`-part of some
    /// geodesic vector `u + h`, `h ∈ 𝔥`.
    ///
    /// With `Y_𝔪 = u` fixed the residual is affine in `h`, so the best `h` is
    /// one least-squares solve. Rescaling `y` is absorbed by homogeneity.
    pub fn go_coverage(
        &self,
        n_directions: usize,
        seed: u64,
        tol: f64,
        source: ResidualSource,
    ) -> Result<GoCoverageReport> {
        if n_directions == 0 {
            return Err(Error::input("n_directions must be at least 1"));
        }
        if !(tol > 0.0) {
            return Err(Error::input(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let metric = self.metric();
        let k = self.split().m_dim();
        let mut r = rng(seed);
        let cap = 1000 * n_directions;
        let mut dirs = Vec::with_capacity(n_directions);
        let mut draws = 0;
        while dirs.len() < n_directions {
            if draws == cap {
                return Err(Error::domain(format!(
                    "only {} of {n_directions} admissible directions after {cap} draws",
                    dirs.len()
                )));
            }
            draws += 1;
            let v = normal_vec(&mut r, k);
            let a = metric.alpha(&v);
            if !(a > 1e-12) {
                continue;
            }
            let u: Vec<f64> = v.iter().map(|c| c / a).collect();
            if source == ResidualSource::Riemannian || metric.is_admissible(&u) {
                dirs.push(u);
            }
        }
        let outcomes: Vec<DirectionOutcome> = dirs
            .par_iter()
            .map(|u| self.best_lift(u, tol, source))
            .collect::<Result<_>>()?;
        let covered = outcomes.iter().filter(|o| o.covered).count();
        let uncovered_examples = dirs
            .iter()
            .zip(&outcomes)
            .filter(|(_, o)| !o.covered)
            .take(MAX_UNCOVERED_EXAMPLES)
            .map(|(u, _)| u.clone())
            .collect();
        Ok(GoCoverageReport {
            directions_sampled: n_directions,
            directions_covered: covered,
            coverage_ratio: covered as f64 / n_directions as f64,
            uncovered_examples,
            draws,
            max_best_residual: outcomes.iter().fold(0.0, |m, o| m.max(o.residual)),
            source,
            tol,
            seed,
        })
    }

    fn best_lift(&self, u: &[f64], tol: f64, source: ResidualSource) -> Result<DirectionOutcome> {
        let split = self.split();
        let hd = split.h_indices().len();
        let residual_at = |h: &[f64]| -> Result<Vec<f64>> {
            let y = split.assemble(u, h)?;
            Ok(self.criterion_residual(&y, source)?.values)
        };
        let zero = vec![0.0; hd];
        let r0 = residual_at(&zero)?;
        let mut h = zero;
        if hd > 0 {
            let n = r0.len();
            let mut jac = DMatrix::zeros(n, hd);
            for j in 0..hd {
                let mut ej = vec![0.0; hd];
                ej[j] = 1.0;
                let rj = residual_at(&ej)?;
                for i in 0..n {
                    jac[(i, j)] = rj[i] - r0[i];
                }
            }
            let svd = jac.svd(true, true);
            let eps = 1e-12 * svd.singular_values.max().max(f64::MIN_POSITIVE);
            let sol = svd
                .solve(&(-DVector::from_column_slice(&r0)), eps)
                .map_err(|e| Error::domain(e.to_string()))?;
            h = sol.iter().copied().collect();
        }
        let y = split.assemble(u, &h)?;
        let check = self.check_vector(&y, tol, source)?;
        Ok(DirectionOutcome {
            covered: check.geodesic,
            residual: check.residual.norm,
        })
    }
}
