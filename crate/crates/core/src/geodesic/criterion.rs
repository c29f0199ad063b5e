use serde::{Deserialize, Serialize};

use super::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::lie::AlgebraVector;
use crate::metric::MetricKind;
use crate::oracle::{g_oracle, OracleScheme};
use crate::util::max_abs;

/// Decision tolerance for closed-form and Riemannian residuals.
pub const DEFAULT_ANALYTIC_TOL: f64 = 1e-8;

/// Decision tolerance for oracle-sourced residuals.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-6;

/// Where the values of `g_{Y_𝔪}` come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualSource {
    /// The printed closed-form tensor of the metric's kind.
    ClosedForm,
    /// The Hessian oracle.
    Oracle,
    /// The plain inner product `⟨·,·⟩` (the Riemannian space `(G/H, ⟨,⟩)`).
    Riemannian,
}

impl ResidualSource {
    pub fn default_tol(self) -> f64 {
        match self {
            ResidualSource::Oracle => DEFAULT_ORACLE_TOL,
            ResidualSource::ClosedForm | ResidualSource::Riemannian => DEFAULT_ANALYTIC_TOL,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResidualSource::ClosedForm => "closed_form",
            ResidualSource::Oracle => "oracle",
            ResidualSource::Riemannian => "riemannian",
        }
    }
}

/// Entry `i` is `g_{Y_𝔪}(Y_𝔪, [Y, e_i]_𝔪)` over the full basis of `𝔤`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResidual {
    pub values: Vec<f64>,
    /// `max_i |values_i|`.
    pub norm: f64,
    pub source: ResidualSource,
}

impl CriterionResidual {
    fn new(values: Vec<f64>, source: ResidualSource) -> Self {
        CriterionResidual {
            norm: max_abs(&values),
            values,
            source,
        }
    }
}

/// Full record of one geodesic-vector decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorCheck {
    pub y: AlgebraVector,
    pub y_m: AlgebraVector,
    pub residual: CriterionResidual,
    /// `F(y_𝔪)` (or `√⟨y_𝔪, y_𝔪⟩` for the Riemannian source).
    pub norm: f64,
    pub tol: f64,
    /// `tol · (1 + norm²)`.
    pub threshold: f64,
    pub geodesic: bool,
}

impl HomogeneousSpace {
    /// Source used when none is requested: closed form for the exponential
    /// metric, whose printed tensor is confirmed by the oracle; the oracle
    /// otherwise.
    pub fn default_source(&self) -> ResidualSource {
        match self.metric().kind() {
            MetricKind::Exponential => ResidualSource::ClosedForm,
            MetricKind::InfiniteSeries | MetricKind::CustomPhi(_) => ResidualSource::Oracle,
        }
    }

    fn y_m(&self, y: &AlgebraVector) -> Result<Vec<f64>> {
        let y_m = self.split().restrict_m(y)?;
        if y_m.iter().all(|&c| c == 0.0) {
            return Err(Error::domain(
                "y_m = 0: y lies in h and defines no direction",
            ));
        }
        Ok(y_m)
    }

    pub fn criterion_residual(
        &self,
        y: &AlgebraVector,
        source: ResidualSource,
    ) -> Result<CriterionResidual> {
        self.criterion_residual_with(y, source, OracleScheme::DualNumber)
    }

    /// As [`criterion_residual`](Self::criterion_residual) with an explicit
    /// oracle scheme.
    pub fn criterion_residual_with(
        &self,
        y: &AlgebraVector,
        source: ResidualSource,
        scheme: OracleScheme,
    ) -> Result<CriterionResidual> {
        let y_m = self.y_m(y)?;
        let sweep = self.bracket_sweep(y)?;
        let metric = self.metric();
        if source != ResidualSource::Riemannian {
            metric.check_admissible(&y_m)?;
        }
        let values = sweep
            .iter()
            .map(|w| match source {
                ResidualSource::Riemannian => Ok(metric.inner(&y_m, w)),
                ResidualSource::ClosedForm => metric.g_closed(&y_m, &y_m, w),
                ResidualSource::Oracle => g_oracle(metric, &y_m, &y_m, w, scheme),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CriterionResidual::new(values, source))
    }

    /// Entry `i` is `⟨y_𝔪, [y, e_i]_𝔪⟩`.
    pub fn riemannian_criterion(&self, y: &AlgebraVector) -> Result<CriterionResidual> {
        self.criterion_residual(y, ResidualSource::Riemannian)
    }

    /// Printed exponential criterion
    /// `⟨X + ((√⟨Y_𝔪,Y_𝔪⟩ − ⟨X,Y_𝔪⟩)/⟨Y_𝔪,Y_𝔪⟩)·Y_𝔪, [Y, Z]_𝔪⟩`.
    pub fn closed_criterion_exponential(
        &self,
        y: &AlgebraVector,
        z: &AlgebraVector,
    ) -> Result<f64> {
        let y_m = self.y_m(y)?;
        let w = self.split().restrict_m(&self.algebra().bracket(y, z)?)?;
        self.metric().criterion_exponential_m(&y_m, &w)
    }

    /// Printed infinite-series criterion (left-hand side).
    pub fn closed_criterion_infinite(&self, y: &AlgebraVector, z: &AlgebraVector) -> Result<f64> {
        let y_m = self.y_m(y)?;
        let w = self.split().restrict_m(&self.algebra().bracket(y, z)?)?;
        self.metric().criterion_infinite_m(&y_m, &w)
    }

    /// `F(y_𝔪)` for Finsler sources, `√⟨y_𝔪,y_𝔪⟩` for the Riemannian one.
    pub fn source_norm(&self, y: &AlgebraVector, source: ResidualSource) -> Result<f64> {
        let y_m = self.y_m(y)?;
        match source {
            ResidualSource::Riemannian => Ok(self.metric().alpha(&y_m)),
            _ => self.metric().finsler_norm(&y_m),
        }
    }

    pub fn check_vector(
        &self,
        y: &AlgebraVector,
        tol: f64,
        source: ResidualSource,
    ) -> Result<VectorCheck> {
        if !(tol > 0.0) {
            return Err(Error::input(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let residual = self.criterion_residual(y, source)?;
        let norm = self.source_norm(y, source)?;
        let threshold = tol * (1.0 + norm * norm);
        Ok(VectorCheck {
            y: y.clone(),
            y_m: self.split().project_m(y)?,
            geodesic: residual.norm <= threshold,
            residual,
            norm,
            tol,
            threshold,
        })
    }

    /// `max_i |g_{Y_𝔪}(Y_𝔪, [Y, e_i]_𝔪)| ≤ tol · (1 + F(Y_𝔪)²)`.
    pub fn is_geodesic_vector(
        &self,
        y: &AlgebraVector,
        tol: f64,
        source: ResidualSource,
    ) -> Result<bool> {
        Ok(self.check_vector(y, tol, source)?.geodesic)
    }
}
