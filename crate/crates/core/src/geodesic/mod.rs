//! Geodesic vectors of a homogeneous Finsler space `(G/H, F)`.
//!
//! A nonzero `Y ∈ 𝔤` is a geodesic vector iff
//! `g_{Y_𝔪}(Y_𝔪, [Y, Z]_𝔪) = 0` for every `Z ∈ 𝔤`. The condition is linear in
//! `Z`, so sweeping the basis `{e_i}` of `𝔤` is complete.

mod coverage;
mod criterion;
mod equivalence;
mod search;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{check_structure, AlgebraVector, LieAlgebra, ReductiveSplit, StructureReport};
use crate::metric::MetricSpec;

pub use coverage::GoCoverageReport;
pub use criterion::{
    CriterionResidual, ResidualSource, VectorCheck, DEFAULT_ANALYTIC_TOL, DEFAULT_ORACLE_TOL,
};
pub use equivalence::{EquivalenceCheck, EquivalenceReport};
pub use search::{Candidate, GeodesicSearchResult, SearchOptions};

/// `(𝔤, 𝔥 + 𝔪, F)`, validated as a whole.
#[derive(Clone, Debug)]
pub struct HomogeneousSpace {
    algebra: LieAlgebra,
    split: ReductiveSplit,
    metric: MetricSpec,
    structure: StructureReport,
}

/// Infinitesimal `Ad(H)`-invariance of `⟨·,·⟩` and `X`: `ad(h)|_𝔪` should be
/// skew for the inner product and `[h, X]_𝔪` should vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub tol: f64,
    pub skew_residual: f64,
    pub x_residual: f64,
    pub pass: bool,
}

impl HomogeneousSpace {
    /// Rejects the triple unless every structural check passes at
    /// `jacobi_tol` and the metric lives on `𝔪`.
    pub fn new(
        algebra: LieAlgebra,
        split: ReductiveSplit,
        metric: MetricSpec,
        jacobi_tol: f64,
    ) -> Result<Self> {
        Error::check_dim(algebra.dim(), split.dim())?;
        if metric.dim() != split.m_dim() {
            return Err(Error::input(format!(
                "metric is defined on a {}-dimensional space but m has dimension {}",
                metric.dim(),
                split.m_dim()
            )));
        }
        let structure = check_structure(algebra.constants(), &split, jacobi_tol);
        if let Some(msg) = structure.failure() {
            return Err(Error::input(msg));
        }
        Ok(HomogeneousSpace {
            algebra,
            split,
            metric,
            structure,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn split(&self) -> &ReductiveSplit {
        &self.split
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }

    pub fn structure(&self) -> &StructureReport {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Same algebra and split with another metric on `𝔪`.
    pub fn with_metric(&self, metric: MetricSpec) -> Result<Self> {
        HomogeneousSpace::new(
            self.algebra.clone(),
            self.split.clone(),
            metric,
            self.structure.tol,
        )
    }

    /// `X` as an element of `𝔤`.
    pub fn x_vector(&self) -> AlgebraVector {
        self.split
            .embed_m(self.metric.x())
            .expect("metric dimension checked at construction")
    }

    /// `[y, e_i]_𝔪` in `𝔪` coordinates, for every basis index `i`.
    pub(crate) fn bracket_sweep(&self, y: &AlgebraVector) -> Result<Vec<Vec<f64>>> {
        (0..self.dim())
            .map(|i| {
                let br = self.algebra.bracket_basis(y, i)?;
                self.split.restrict_m(&br)
            })
            .collect()
    }

    pub fn invariance(&self, tol: f64) -> InvarianceReport {
        let m = self.split.m_indices();
        let mut skew: f64 = 0.0;
        let mut xres: f64 = 0.0;
        let x = self.x_vector();
        for &h in self.split.h_indices() {
            let hv = self.algebra.basis(h);
            let images: Vec<Vec<f64>> = m
                .iter()
                .map(|&a| {
                    let br = self.algebra.bracket(&hv, &self.algebra.basis(a)).unwrap();
                    self.split.restrict_m(&br).unwrap()
                })
                .collect();
            let n = m.len();
            for a in 0..n {
                for b in 0..n {
                    let mut ea = vec![0.0; n];
                    ea[a] = 1.0;
                    let mut eb = vec![0.0; n];
                    eb[b] = 1.0;
                    let r = self.metric.inner(&images[a], &eb) + self.metric.inner(&ea, &images[b]);
                    skew = skew.max(r.abs());
                }
            }
            let hx = self.algebra.bracket(&hv, &x).unwrap();
            let hx_m = self.split.restrict_m(&hx).unwrap();
            xres = xres.max(hx_m.iter().fold(0.0, |acc, c| acc.max(c.abs())));
        }
        InvarianceReport {
            tol,
            skew_residual: skew,
            x_residual: xres,
            pass: skew <= tol && xres <= tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::metric::MetricKind;

    #[test]
    fn invalid_split_rejected() {
        let g = fixtures::so3();
        let split = ReductiveSplit::new(3, vec![0, 1], vec![2]).unwrap();
        let metric = MetricSpec::riemannian(nalgebra::DMatrix::identity(1, 1)).unwrap();
        let err = HomogeneousSpace::new(g, split, metric, 1e-9).unwrap_err();
        assert!(err.to_string().contains("[h, h]"), "{err}");
    }

    #[test]
    fn metric_dimension_must_match_m() {
        let g = fixtures::heisenberg();
        let metric = MetricSpec::riemannian(nalgebra::DMatrix::identity(2, 2)).unwrap();
        assert!(HomogeneousSpace::new(g, ReductiveSplit::trivial(3), metric, 1e-9).is_err());
    }

    #[test]
    fn invariance_detects_non_invariant_x() {
        // S² = SO(3)/SO(2) with X ≠ 0 in m is not Ad(H)-invariant.
        let sphere = fixtures::space(
            fixtures::so3(),
            ReductiveSplit::new(3, vec![2], vec![0, 1]).unwrap(),
            MetricKind::Exponential,
            &[0.5, 0.0, 0.0],
        );
        let r = sphere.invariance(1e-9);
        assert_eq!(r.skew_residual, 0.0);
        assert!(r.x_residual > 0.1);
        assert!(!r.pass);
        let cyl = fixtures::so3_plus_r_space(MetricKind::Exponential, 0.5);
        assert!(cyl.invariance(1e-9).pass);
    }
}
