use serde::Serialize;

use super::{CriterionResidual, HomogeneousSpace, ResidualSource};
use crate::error::{Error, Result};
use crate::lie::AlgebraVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceCheck {
    /// Under `⟨X, [Y, e_i]_𝔪⟩ = 0 ∀ i`, `Y` is Riemannian-geodesic iff it is
    /// Finsler-geodesic.
    Corollary,
    /// `X` is Riemannian-geodesic iff it is Finsler-geodesic.
    TheoremX,
}

/// Riemannian vs Finsler geodesic status of one vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub check: EquivalenceCheck,
    pub y: AlgebraVector,
    pub tol: f64,
    /// `max_i |⟨X, [y, e_i]_𝔪⟩|` (corollary only).
    pub hypothesis_residual: Option<f64>,
    pub hypothesis_holds: bool,
    pub riemannian_geodesic: bool,
    pub finsler_geodesic: bool,
    pub riemannian_residual: CriterionResidual,
    pub finsler_residual: CriterionResidual,
    /// `None` when the hypothesis fails and nothing is asserted.
    pub equivalence_respected: Option<bool>,
    /// Least-squares `k` with `finsler ≈ k · riemannian` (theorem only,
    /// when the Riemannian residual is nonzero).
    pub proportionality_factor: Option<f64>,
    /// `φ(b)²`, the factor predicted at `y = X`: there `β/α = b` and the
    /// derivative of `β/α` vanishes in every direction.
    pub expected_factor: Option<f64>,
}

impl HomogeneousSpace {
    /// `max_i |⟨X, [y, e_i]_𝔪⟩|`.
    pub fn x_bracket_residual(&self, y: &AlgebraVector) -> Result<f64> {
        let sweep = self.bracket_sweep(y)?;
        Ok(sweep
            .iter()
            .map(|w| self.metric().beta(w).abs())
            .fold(0.0, f64::max))
    }

    fn both_decisions(
        &self,
        y: &AlgebraVector,
        tol: f64,
    ) -> Result<(bool, CriterionResidual, bool, CriterionResidual)> {
        let r = self.check_vector(y, tol, ResidualSource::Riemannian)?;
        let f = self.check_vector(y, tol, ResidualSource::Oracle)?;
        Ok((r.geodesic, r.residual, f.geodesic, f.residual))
    }

    /// Compares Riemannian and Finsler (oracle) decisions for `y` when the
    /// hypothesis `⟨X, [y, e_i]_𝔪⟩ = 0` holds within `tol`.
    pub fn corollary_equivalence_check(
        &self,
        y: &AlgebraVector,
        tol: f64,
    ) -> Result<EquivalenceReport> {
        let hyp = self.x_bracket_residual(y)?;
        let holds = hyp <= tol;
        let (rg, rr, fg, fr) = self.both_decisions(y, tol)?;
        Ok(EquivalenceReport {
            check: EquivalenceCheck::Corollary,
            y: y.clone(),
            tol,
            hypothesis_residual: Some(hyp),
            hypothesis_holds: holds,
            riemannian_geodesic: rg,
            finsler_geodesic: fg,
            riemannian_residual: rr,
            finsler_residual: fr,
            equivalence_respected: holds.then_some(rg == fg),
            proportionality_factor: None,
            expected_factor: None,
        })
    }

    /// Geodesic status of `y = X` under both metrics.
    pub fn theorem_x_check(&self, tol: f64) -> Result<EquivalenceReport> {
        let x = self.x_vector();
        if x.is_zero() {
            return Err(Error::domain("X = 0 is not a candidate geodesic vector"));
        }
        let x_m = self.split().restrict_m(&x)?;
        self.metric().check_admissible(&x_m)?;
        let (rg, rr, fg, fr) = self.both_decisions(&x, tol)?;
        let rr2: f64 = rr.values.iter().map(|v| v * v).sum();
        let factor = (rr2 > 0.0).then(|| {
            rr.values
                .iter()
                .zip(&fr.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / rr2
        });
        let phi_b = self.metric().phi(self.metric().b())?.phi;
        Ok(EquivalenceReport {
            check: EquivalenceCheck::TheoremX,
            y: x,
            tol,
            hypothesis_residual: None,
            hypothesis_holds: true,
            riemannian_geodesic: rg,
            finsler_geodesic: fg,
            riemannian_residual: rr,
            finsler_residual: fr,
            equivalence_respected: Some(rg == fg),
            proportionality_factor: factor,
            expected_factor: Some(phi_b * phi_b),
        })
    }
}
