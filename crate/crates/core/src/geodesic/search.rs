use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::{HomogeneousSpace, ResidualSource};
use crate::error::{Error, Result};
use crate::lie::AlgebraVector;
use crate::util::{euclid_norm, rng, unit_vec};

/// Knobs of the damped Gauss–Newton iteration on the unit sphere of `𝔤`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOptions {
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Central-difference step for the residual Jacobian.
    pub jac_step: f64,
    /// Converged points closer than this angle (radians) are one solution.
    pub dedup_angle: f64,
    /// Longest tangent step taken in one iteration.
    pub max_step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_iter: 100,
            max_halvings: 30,
            jac_step: 1e-6,
            dedup_angle: 1e-4,
            max_step: 0.5,
        }
    }
}

/// Outcome of one seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub seed_index: usize,
    pub start: AlgebraVector,
    /// Final iterate, a Euclidean unit vector of `𝔤`.
    pub y: AlgebraVector,
    pub residual_norm: f64,
    pub threshold: f64,
    /// `residual_norm ≤ threshold`.
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicSearchResult {
    pub source: ResidualSource,
    pub tol: f64,
    pub n_seeds: usize,
    pub seed: u64,
    /// Sphere points drawn to obtain `n_seeds` admissible seeds.
    pub draws: usize,
    pub candidates: Vec<Candidate>,
    pub distinct_count: usize,
    /// Indices into `candidates` of one representative per solution.
    pub distinct_indices: Vec<usize>,
}

/// Angle between two unit vectors, stable near zero.
fn angle(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    2.0 * (euclid_norm(&d) / 2.0).min(1.0).asin()
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = euclid_norm(v);
    v.iter().map(|c| c / n).collect()
}

impl HomogeneousSpace {
    /// `y` has a nonzero, admissible `𝔪` part for `source`.
    pub(crate) fn accepts(&self, y: &[f64], source: ResidualSource) -> bool {
        let Ok(v) = AlgebraVector::new(y.to_vec()) else {
            return false;
        };
        let Ok(y_m) = self.split().restrict_m(&v) else {
            return false;
        };
        if y_m.iter().all(|&c| c == 0.0) {
            return false;
        }
        source == ResidualSource::Riemannian || self.metric().is_admissible(&y_m)
    }

    fn raw_residual(&self, y: &[f64], source: ResidualSource) -> Option<Vec<f64>> {
        let v = AlgebraVector::new(y.to_vec()).ok()?;
        self.criterion_residual(&v, source).ok().map(|r| r.values)
    }

    pub fn find_geodesic_vectors(
        &self,
        n_seeds: usize,
        seed: u64,
        tol: f64,
        source: ResidualSource,
    ) -> Result<GeodesicSearchResult> {
        self.find_geodesic_vectors_with(n_seeds, seed, tol, source, &SearchOptions::default())
    }

    /// Runs one damped Gauss–Newton solve of `residual(y) = 0` on the unit
    /// sphere per seed. Seeds are drawn in order from `seed`; solves run in
    /// parallel and are reported in seed order.
    pub fn find_geodesic_vectors_with(
        &self,
        n_seeds: usize,
        seed: u64,
        tol: f64,
        source: ResidualSource,
        opts: &SearchOptions,
    ) -> Result<GeodesicSearchResult> {
        if n_seeds == 0 {
            return Err(Error::input("n_seeds must be at least 1"));
        }
        if !(tol > 0.0) {
            return Err(Error::input(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let n = self.dim();
        let mut r = rng(seed);
        let cap = 1000 * n_seeds;
        let mut starts = Vec::with_capacity(n_seeds);
        let mut draws = 0;
        while starts.len() < n_seeds {
            if draws == cap {
                return Err(Error::domain(format!(
                    "only {} of {n_seeds} admissible seeds after {cap} draws",
                    starts.len()
                )));
            }
            draws += 1;
            let y = unit_vec(&mut r, n);
            if self.accepts(&y, source) {
                starts.push(y);
            }
        }
        let candidates: Vec<Candidate> = starts
            .into_par_iter()
            .enumerate()
            .map(|(i, y0)| self.solve_from(i, y0, tol, source, opts))
            .collect::<Result<_>>()?;

        let mut distinct_indices: Vec<usize> = Vec::new();
        for (i, c) in candidates.iter().enumerate() {
            if !c.converged {
                continue;
            }
            let dup = distinct_indices
                .iter()
                .any(|&j| angle(candidates[j].y.coords(), c.y.coords()) < opts.dedup_angle);
            if !dup {
                distinct_indices.push(i);
            }
        }
        Ok(GeodesicSearchResult {
            source,
            tol,
            n_seeds,
            seed,
            draws,
            distinct_count: distinct_indices.len(),
            distinct_indices,
            candidates,
        })
    }

    fn solve_from(
        &self,
        seed_index: usize,
        y0: Vec<f64>,
        tol: f64,
        source: ResidualSource,
        opts: &SearchOptions,
    ) -> Result<Candidate> {
        let n = self.dim();
        let mut y = y0.clone();
        let mut res = self
            .raw_residual(&y, source)
            .ok_or_else(|| Error::domain("seed left the admissible cone"))?;
        let mut iterations = 0;
        let decide = |y: &[f64], res: &[f64]| -> Result<(f64, f64, bool)> {
            let v = AlgebraVector::new(y.to_vec())?;
            let norm = self.source_norm(&v, source)?;
            let threshold = tol * (1.0 + norm * norm);
            let rn = res.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
            Ok((rn, threshold, rn <= threshold))
        };
        let (mut rn, mut threshold, mut done) = decide(&y, &res)?;
        while !done && iterations < opts.max_iter {
            iterations += 1;
            let Some(jac) = self.tangent_jacobian(&y, source, opts.jac_step) else {
                break;
            };
            let rv = DVector::from_column_slice(&res);
            let svd = jac.svd(true, true);
            let eps = 1e-12 * svd.singular_values.max().max(f64::MIN_POSITIVE);
            let Ok(step) = svd.solve(&(-rv), eps) else {
                break;
            };
            let mut d: Vec<f64> = step.iter().copied().collect();
            let dn = euclid_norm(&d);
            if dn == 0.0 || !dn.is_finite() {
                break;
            }
            if dn > opts.max_step {
                d.iter_mut().for_each(|c| *c *= opts.max_step / dn);
            }
            let merit = euclid_norm(&res);
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=opts.max_halvings {
                let trial: Vec<f64> = normalized(
                    &y.iter()
                        .zip(&d)
                        .map(|(a, b)| a + lambda * b)
                        .collect::<Vec<_>>(),
                );
                if self.accepts(&trial, source) {
                    if let Some(tr) = self.raw_residual(&trial, source) {
                        if euclid_norm(&tr) < merit {
                            accepted = Some((trial, tr));
                            break;
                        }
                    }
                }
                lambda *= 0.5;
            }
            let Some((ny, nr)) = accepted else {
                break;
            };
            y = ny;
            res = nr;
            (rn, threshold, done) = decide(&y, &res)?;
            log::trace!("seed {seed_index} iter {iterations}: residual {rn:e}");
        }
        debug_assert_eq!(y.len(), n);
        Ok(Candidate {
            seed_index,
            start: AlgebraVector::new(y0)?,
            y: AlgebraVector::new(y)?,
            residual_norm: rn,
            threshold,
            converged: done,
            iterations,
        })
    }

    /// Central-difference Jacobian of the residual composed with the
    /// projection onto `T_y S`.
    fn tangent_jacobian(&self, y: &[f64], source: ResidualSource, h: f64) -> Option<DMatrix<f64>> {
        let n = y.len();
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[j] += h;
            ym[j] -= h;
            let rp = self.raw_residual(&yp, source)?;
            let rm = self.raw_residual(&ym, source)?;
            for i in 0..n {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let yv = DVector::from_column_slice(y);
        let proj = DMatrix::identity(n, n) - &yv * yv.transpose();
        Some(jac * proj)
    }
}
