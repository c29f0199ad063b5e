//! `(α, β)`-metrics `F = α·φ(β/α)` on `𝔪`.
//!
//! `α(y) = √⟨y, y⟩` comes from the inner-product matrix on `𝔪` and
//! `β(y) = ⟨X, y⟩` from the invariant vector `X ∈ 𝔪`. All vectors handled
//! here are coordinate slices in the `𝔪` basis.
//!
//! Admissibility conventions:
//!
//! * exponential, `φ(s) = e^s`: requires `b = ‖X‖ < 1` (Shen's condition at
//!   `s = b` reads `e^b (1 − b) > 0`); every `y ≠ 0` is admissible;
//! * infinite series, `φ(s) = s²/(s − 1)`: `φ > 0` only for `s > 1`, so the
//!   admissible cone is `⟨X, y⟩ > (1 + ε)·√⟨y, y⟩` with
//!   [`INFINITE_SERIES_CONE_EPS`], and `b > 1 + ε` is needed for the cone to
//!   be nonempty;
//! * custom polynomial `φ`: Shen's condition must hold on `[−b, b]` and
//!   `φ(β/α) > 0` at every evaluated point.

mod closed;
mod shen;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub use shen::ShenReport;

/// `ε` in the infinite-series cone `s > 1 + ε`.
pub const INFINITE_SERIES_CONE_EPS: f64 = 1e-6;

/// Allowed asymmetry of the inner-product matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Grid used to vet a custom `φ` at construction.
const CUSTOM_PHI_GRID: usize = 1001;

/// `φ(s) = Σ_k c_k s^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhiPolynomial {
    coeffs: Vec<f64>,
}

impl PhiPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("custom_phi needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("custom_phi coefficients must be finite"));
        }
        Ok(PhiPolynomial { coeffs })
    }

    /// `φ ≡ 1`, the Riemannian case.
    pub fn one() -> Self {
        PhiPolynomial { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Value and first two derivatives by Horner's scheme.
    pub fn eval(&self, s: f64) -> PhiValues {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            ddp = ddp * s + 2.0 * dp;
            dp = dp * s + p;
            p = p * s + c;
        }
        PhiValues {
            phi: p,
            d1: dp,
            d2: ddp,
        }
    }
}

/// The metric family.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    /// `φ(s) = e^s`, i.e. `F = α·e^{β/α}`.
    Exponential,
    /// `φ(s) = s²/(s − 1)`, i.e. `F = β²/(β − α)`.
    InfiniteSeries,
    /// User-supplied polynomial `φ`.
    CustomPhi(PhiPolynomial),
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Exponential => "exponential",
            MetricKind::InfiniteSeries => "infinite_series",
            MetricKind::CustomPhi(_) => "custom_phi",
        }
    }

    /// Whether a printed closed-form fundamental tensor exists for this kind.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self, MetricKind::CustomPhi(_))
    }
}

/// `(φ, φ′, φ″)` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiValues {
    pub phi: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Scalars describing a direction: `α = √⟨y,y⟩`, `β = ⟨X,y⟩`, `s = β/α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
}

/// An `(α, β)`-metric on `𝔪`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    kind: MetricKind,
    inner_product: DMatrix<f64>,
    x: Vec<f64>,
    /// `G·X`, so that `β(y) = Σ gx_i y_i`.
    gx: Vec<f64>,
    b: f64,
    b0: f64,
}

impl MetricSpec {
    /// Validates the inner product, `X`, `b0`, and the kind's admissibility
    /// rule.
    pub fn new(
        kind: MetricKind,
        inner_product: DMatrix<f64>,
        x: Vec<f64>,
        b0: f64,
    ) -> Result<Self> {
        let n = inner_product.nrows();
        if n == 0 || inner_product.ncols() != n {
            return Err(Error::input(format!(
                "inner_product must be a nonempty square matrix, got {}x{}",
                inner_product.nrows(),
                inner_product.ncols()
            )));
        }
        if x.len() != n {
            return Err(Error::input(format!(
                "x has {} m-coordinates but the inner product is {n}x{n}",
                x.len()
            )));
        }
        if inner_product.iter().any(|v| !v.is_finite()) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("inner_product and x must be finite"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (inner_product[(i, j)] - inner_product[(j, i)]).abs();
                if d > SYMMETRY_TOL {
                    return Err(Error::input(format!(
                        "inner_product not symmetric: entry ({}, {}) = {} but ({}, {}) = {}",
                        i + 1,
                        j + 1,
                        inner_product[(i, j)],
                        j + 1,
                        i + 1,
                        inner_product[(j, i)]
                    )));
                }
            }
        }
        let inner_product = (&inner_product + inner_product.transpose()) * 0.5;
        let eig = inner_product.clone().symmetric_eigen();
        let min_eig = eig
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if !(min_eig > 0.0) {
            return Err(Error::input(format!(
                "inner_product not positive definite: eigenvalue {min_eig} <= 0"
            )));
        }
        if !(b0 > 0.0) || !b0.is_finite() {
            return Err(Error::input(format!(
                "b0 must be positive and finite, got {b0}"
            )));
        }
        let gx: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| inner_product[(i, j)] * x[j]).sum())
            .collect();
        let b = x
            .iter()
            .zip(&gx)
            .map(|(a, c)| a * c)
            .sum::<f64>()
            .max(0.0)
            .sqrt();
        if b >= b0 {
            return Err(Error::input(format!("‖X‖ = {b} must be below b0 = {b0}")));
        }
        let spec = MetricSpec {
            kind,
            inner_product,
            x,
            gx,
            b,
            b0,
        };
        spec.check_kind_admissible()?;
        Ok(spec)
    }

    /// Riemannian metric `F = α` (custom `φ ≡ 1`, `X = 0`).
    pub fn riemannian(inner_product: DMatrix<f64>) -> Result<Self> {
        let n = inner_product.nrows();
        MetricSpec::new(
            MetricKind::CustomPhi(PhiPolynomial::one()),
            inner_product,
            vec![0.0; n],
            1.0,
        )
    }

    fn check_kind_admissible(&self) -> Result<()> {
        let b = self.b;
        match &self.kind {
            MetricKind::Exponential => {
                if b >= 1.0 {
                    return Err(Error::input(format!(
                        "exponential metric needs ‖X‖ < 1, got {b}"
                    )));
                }
            }
            MetricKind::InfiniteSeries => {
                if b <= 1.0 + INFINITE_SERIES_CONE_EPS {
                    return Err(Error::input(format!(
                        "infinite-series metric needs ‖X‖ > 1 + {INFINITE_SERIES_CONE_EPS:e} \
                         for a nonempty cone ⟨X,y⟩ > √⟨y,y⟩, got {b}"
                    )));
                }
            }
            MetricKind::CustomPhi(phi) => {
                let n = CUSTOM_PHI_GRID;
                for k in 0..n {
                    let s = -b + 2.0 * b * (k as f64) / ((n - 1) as f64);
                    let v = phi.eval(s);
                    if !(v.phi > 0.0) {
                        return Err(Error::input(format!(
                            "custom φ must be positive on [-b, b]: φ({s}) = {}",
                            v.phi
                        )));
                    }
                }
                let report = self.shen_check(b, n)?;
                if !report.pass {
                    return Err(Error::input(format!(
                        "custom φ fails Shen's condition at b = {b}: min E = {} at s = {}",
                        report.min_e, report.argmin_s
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    /// Dimension of `𝔪`.
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn inner_product(&self) -> &DMatrix<f64> {
        &self.inner_product
    }

    /// `X` in `𝔪` coordinates.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// `b = √⟨X, X⟩`.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// `⟨u, v⟩`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        scalar::quadratic(&self.inner_product, u, v)
    }

    /// `⟨X, y⟩`.
    pub fn beta(&self, y: &[f64]) -> f64 {
        scalar::weighted(&self.gx, y)
    }

    /// `√⟨y, y⟩`.
    pub fn alpha(&self, y: &[f64]) -> f64 {
        self.inner(y, y).max(0.0).sqrt()
    }

    /// `φ`, `φ′`, `φ″` at `s`.
    pub fn phi(&self, s: f64) -> Result<PhiValues> {
        if !s.is_finite() {
            return Err(Error::domain(format!(
                "{}: s = {s} is not finite",
                self.kind.name()
            )));
        }
        Ok(match &self.kind {
            MetricKind::Exponential => {
                let e = s.exp();
                PhiValues {
                    phi: e,
                    d1: e,
                    d2: e,
                }
            }
            MetricKind::InfiniteSeries => {
                if s == 1.0 {
                    return Err(Error::domain(
                        "infinite_series: φ(s) = s²/(s − 1) is undefined at s = 1",
                    ));
                }
                let d = s - 1.0;
                PhiValues {
                    phi: s * s / d,
                    d1: s * (s - 2.0) / (d * d),
                    d2: 2.0 / (d * d * d),
                }
            }
            MetricKind::CustomPhi(p) => p.eval(s),
        })
    }

    /// `(α, β, s)` for `y`, rejecting `y = 0` and wrong dimensions.
    pub fn direction(&self, y: &[f64]) -> Result<Direction> {
        Error::check_dim(self.dim(), y.len())?;
        let alpha = self.alpha(y);
        if !(alpha > 0.0) {
            return Err(Error::domain("F is undefined at y = 0"));
        }
        let beta = self.beta(y);
        Ok(Direction {
            alpha,
            beta,
            s: beta / alpha,
        })
    }

    fn check_s(&self, s: f64) -> Result<()> {
        match &self.kind {
            MetricKind::Exponential => Ok(()),
            MetricKind::InfiniteSeries => {
                if s > 1.0 + INFINITE_SERIES_CONE_EPS {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "infinite_series: y outside the cone ⟨X,y⟩ > (1+ε)√⟨y,y⟩ (s = {s})"
                    )))
                }
            }
            MetricKind::CustomPhi(p) => {
                let v = p.eval(s).phi;
                if v > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "custom_phi: φ({s}) = {v} is not positive"
                    )))
                }
            }
        }
    }

    /// Whether `y` lies in the metric's admissible cone.
    pub fn is_admissible(&self, y: &[f64]) -> bool {
        self.check_admissible(y).is_ok()
    }

    pub fn check_admissible(&self, y: &[f64]) -> Result<Direction> {
        let d = self.direction(y)?;
        self.check_s(d.s)?;
        Ok(d)
    }

    /// `F(y) = α(y)·φ(β(y)/α(y))`.
    pub fn finsler_norm(&self, y: &[f64]) -> Result<f64> {
        self.norm_scalar(y)
    }

    /// `F` through a generic scalar type. The real part drives all domain
    /// checks; perturbation parts ride along.
    pub fn norm_scalar<T: Scalar>(&self, y: &[T]) -> Result<T> {
        Error::check_dim(self.dim(), y.len())?;
        let alpha_sq = scalar::quadratic(&self.inner_product, y, y);
        if !(alpha_sq.re() > 0.0) {
            return Err(Error::domain("F is undefined at y = 0"));
        }
        let alpha = alpha_sq.sqrt();
        let beta = scalar::weighted(&self.gx, y);
        let s = beta / alpha;
        self.check_s(s.re())?;
        let p = self.phi(s.re())?;
        Ok(alpha * s.lift(p.phi, p.d1, p.d2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn eye(n: usize) -> DMatrix<f64> {
        DMatrix::identity(n, n)
    }

    pub(crate) fn exp_metric(x: &[f64]) -> MetricSpec {
        MetricSpec::new(MetricKind::Exponential, eye(x.len()), x.to_vec(), 2.0).unwrap()
    }

    pub(crate) fn inf_metric(x: &[f64]) -> MetricSpec {
        MetricSpec::new(MetricKind::InfiniteSeries, eye(x.len()), x.to_vec(), 10.0).unwrap()
    }

    #[test]
    fn phi_exponential_at_zero() {
        let m = exp_metric(&[0.5, 0.0]);
        assert_eq!(
            m.phi(0.0).unwrap(),
            PhiValues {
                phi: 1.0,
                d1: 1.0,
                d2: 1.0
            }
        );
    }

    #[test]
    fn phi_infinite_series_at_two() {
        // Oracle: central differences of s²/(s−1) at s = 2.
        let f = |s: f64| s * s / (s - 1.0);
        let h = 1e-4;
        let fd1 = (f(2.0 + h) - f(2.0 - h)) / (2.0 * h);
        let fd2 = (f(2.0 + h) - 2.0 * f(2.0) + f(2.0 - h)) / (h * h);
        assert!(fd1.abs() < 1e-7);
        assert!((fd2 - 2.0).abs() < 1e-5);

        let m = inf_metric(&[2.0, 0.0]);
        let v = m.phi(2.0).unwrap();
        assert_eq!(
            v,
            PhiValues {
                phi: 4.0,
                d1: 0.0,
                d2: 2.0
            }
        );
        assert!(m.phi(1.0).is_err());
        assert!(m.phi(f64::NAN).is_err());
    }

    #[test]
    fn phi_custom_constant() {
        let m = MetricSpec::riemannian(eye(3)).unwrap();
        for s in [-0.5, 0.0, 0.3] {
            assert_eq!(
                m.phi(s).unwrap(),
                PhiValues {
                    phi: 1.0,
                    d1: 0.0,
                    d2: 0.0
                }
            );
        }
        let p = PhiPolynomial::new(vec![1.0, 2.0, 3.0]).unwrap().eval(2.0);
        assert_eq!((p.phi, p.d1, p.d2), (17.0, 14.0, 6.0));
    }

    #[test]
    fn finsler_norm_infinite_series_substitution() {
        let m = inf_metric(&[2.0, 0.0]);
        // y = e1: ⟨X,y⟩ = 2, ⟨y,y⟩ = 1 → 4 / (2 − 1)
        assert_eq!(m.finsler_norm(&[1.0, 0.0]).unwrap(), 4.0);
        assert!(m.finsler_norm(&[0.0, 1.0]).is_err());
        assert!(m.finsler_norm(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn finsler_norm_exponential() {
        let m = exp_metric(&[0.0, 0.5]);
        assert_eq!(m.finsler_norm(&[1.0, 0.0]).unwrap(), 1.0);
        let y = [0.3, -0.7];
        let f1 = m.finsler_norm(&y).unwrap();
        let f2 = m.finsler_norm(&[0.6, -1.4]).unwrap();
        assert!((f2 - 2.0 * f1).abs() <= 1e-15 * f2);
        assert!(m.finsler_norm(&[0.0, 0.0]).is_err());
        assert!(matches!(
            m.finsler_norm(&[1.0]).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(MetricSpec::new(MetricKind::Exponential, asym, vec![0.0, 0.0], 2.0).is_err());
        let indef = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let msg = MetricSpec::new(MetricKind::Exponential, indef, vec![0.0, 0.0], 2.0)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("eigenvalue -1"), "{msg}");
        // exponential needs b < 1
        assert!(MetricSpec::new(MetricKind::Exponential, eye(2), vec![1.0, 0.0], 2.0).is_err());
        // infinite series needs b > 1
        assert!(MetricSpec::new(MetricKind::InfiniteSeries, eye(2), vec![0.5, 0.0], 2.0).is_err());
        // b < b0
        assert!(MetricSpec::new(MetricKind::InfiniteSeries, eye(2), vec![3.0, 0.0], 2.0).is_err());
        // custom φ that fails Shen at b: φ(s) = 1 + s with b = 1.5 is not positive at s = -1.5
        let randers = MetricKind::CustomPhi(PhiPolynomial::new(vec![1.0, 1.0]).unwrap());
        assert!(MetricSpec::new(randers.clone(), eye(2), vec![1.5, 0.0], 2.0).is_err());
        assert!(MetricSpec::new(randers, eye(2), vec![0.5, 0.0], 2.0).is_ok());
    }

    #[test]
    fn scalar_pipeline_matches_closed_expression() {
        let m = inf_metric(&[2.0, 0.0, 0.5]);
        let y = [1.0, 0.2, 0.3];
        let b = m.beta(&y);
        let a = m.alpha(&y);
        assert!((m.finsler_norm(&y).unwrap() - b * b / (b - a)).abs() < 1e-14);
    }
}
