//! Closed-form fundamental tensors and geodesic criteria as printed for the
//! exponential and infinite-series metrics.
//!
//! Each expression is evaluated term by term in the printed order. Terms are
//! summed with compensation and the prefactor is applied last. Both tensors
//! are returned symmetrized, `(T(u, v) + T(v, u)) / 2`, which makes `u ↔ v`
//! symmetry exact whatever the printed expression does.
//!
//! The infinite-series expression is not assumed correct; the Hessian oracle
//! is the reference and `oracle::audit_closed_forms` measures the gap.

use log::trace;

use super::{MetricKind, MetricSpec, INFINITE_SERIES_CONE_EPS};
use crate::error::{Error, Result};
use crate::util::compensated_sum;

/// Scale-aware guard on `|⟨X,y⟩ − √⟨y,y⟩|`.
pub fn singular_tol(alpha: f64) -> f64 {
    1e-9 * (1.0 + alpha)
}

struct Pairings {
    a: f64,
    alpha: f64,
    b: f64,
    xu: f64,
    xv: f64,
    yu: f64,
    yv: f64,
    uv: f64,
}

impl MetricSpec {
    fn pairings(&self, y: &[f64], u: &[f64], v: &[f64]) -> Result<Pairings> {
        Error::check_dim(self.dim(), y.len())?;
        Error::check_dim(self.dim(), u.len())?;
        Error::check_dim(self.dim(), v.len())?;
        let a = self.inner(y, y);
        if !(a > 0.0) {
            return Err(Error::domain("fundamental tensor is undefined at y = 0"));
        }
        Ok(Pairings {
            a,
            alpha: a.sqrt(),
            b: self.beta(y),
            xu: self.beta(u),
            xv: self.beta(v),
            yu: self.inner(y, u),
            yv: self.inner(y, v),
            uv: self.inner(u, v),
        })
    }

    /// Bracketed sum of the printed exponential tensor for one ordering.
    fn exponential_bracket(p: &Pairings, xu: f64, xv: f64, yu: f64, yv: f64) -> f64 {
        let Pairings {
            a, alpha, b, uv, ..
        } = *p;
        let terms = [
            ("<U,V>", uv),
            ("2<X,U><X,V>", 2.0 * xu * xv),
            ("-<X,Y><Y,U><Y,V>/<Y,Y>^1.5", -b * yu * yv / (a * alpha)),
            ("<X,U><Y,V>/sqrt<Y,Y>", xu * yv / alpha),
            ("<X,V><Y,U>/sqrt<Y,Y>", xv * yu / alpha),
            ("-<X,Y><U,V>/sqrt<Y,Y>", -b * uv / alpha),
            (
                "2<X,Y>^2<Y,U><Y,V>/<Y,Y>^2",
                2.0 * b * b * yu * yv / (a * a),
            ),
            ("-2<X,Y><Y,U><X,V>/<Y,Y>", -2.0 * b * yu * xv / a),
            ("-2<X,Y><X,U><Y,V>/<Y,Y>", -2.0 * b * xu * yv / a),
        ];
        for (tag, t) in &terms {
            trace!("exponential term {tag} = {t:e}");
        }
        compensated_sum(terms.iter().map(|t| t.1))
    }

    /// Printed exponential fundamental tensor
    /// `g_y(u, v) = e^{2⟨X,y⟩/√⟨y,y⟩}·[…]`, symmetrized.
    ///
    /// Evaluated with this metric's `X` and `⟨·,·⟩` regardless of its kind.
    pub fn g_closed_exponential(&self, y: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        let p = self.pairings(y, u, v)?;
        let forward = Self::exponential_bracket(&p, p.xu, p.xv, p.yu, p.yv);
        let swapped = Self::exponential_bracket(&p, p.xv, p.xu, p.yv, p.yu);
        let prefactor = (2.0 * p.b / p.alpha).exp();
        Ok(0.5 * (forward + swapped) * prefactor)
    }

    fn infinite_bracket(p: &Pairings, xu: f64, xv: f64, yu: f64, yv: f64) -> f64 {
        let Pairings {
            a, alpha, b, uv, ..
        } = *p;
        let a32 = a * alpha;
        let terms = [
            ("<X,Y>^2<X,V><X,U>", b * b * xv * xu),
            ("-4<Y,Y>^1.5<X,V><X,U>", -4.0 * a32 * xv * xu),
            ("6<Y,Y><X,V><X,U>", 6.0 * a * xv * xu),
            ("<X,Y>^2<X,V><U,Y>/sqrt<Y,Y>", b * b * xv * yu / alpha),
            ("-4<X,Y><X,V><U,Y>", -4.0 * b * xv * yu),
            ("-<X,Y>^3<U,Y><V,Y>/<Y,Y>^1.5", -b * b * b * yu * yv / a32),
            ("<X,Y>^3<U,V>/sqrt<Y,Y>", b * b * b * uv / alpha),
            ("4<X,Y>^2<U,Y><V,Y>/<Y,Y>", 4.0 * b * b * yu * yv / a),
            ("-<X,Y>^2<U,V>", -b * b * uv),
            ("<X,Y>^2<X,U><V,Y>/sqrt<Y,Y>", b * b * xu * yv / alpha),
            ("-4<X,Y><X,U><V,Y>", -4.0 * b * xu * yv),
        ];
        for (tag, t) in &terms {
            trace!("infinite-series term {tag} = {t:e}");
        }
        compensated_sum(terms.iter().map(|t| t.1))
    }

    fn infinite_guard(&self, alpha: f64, beta: f64) -> Result<()> {
        let denom = beta - alpha;
        if denom.abs() < singular_tol(alpha) {
            return Err(Error::Singularity(format!(
                "|⟨X,y⟩ − √⟨y,y⟩| = {:e} below {:e}",
                denom.abs(),
                singular_tol(alpha)
            )));
        }
        if beta <= (1.0 + INFINITE_SERIES_CONE_EPS) * alpha {
            return Err(Error::domain(format!(
                "y outside the infinite-series cone: ⟨X,y⟩ = {beta}, √⟨y,y⟩ = {alpha}"
            )));
        }
        Ok(())
    }

    /// Printed infinite-series fundamental tensor
    /// `g_y(u, v) = ⟨X,y⟩²/(⟨X,y⟩ − √⟨y,y⟩)⁴·[…]` (eleven terms), symmetrized.
    pub fn g_closed_infinite(&self, y: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        let p = self.pairings(y, u, v)?;
        self.infinite_guard(p.alpha, p.b)?;
        let forward = Self::infinite_bracket(&p, p.xu, p.xv, p.yu, p.yv);
        let swapped = Self::infinite_bracket(&p, p.xv, p.xu, p.yv, p.yu);
        let d = p.b - p.alpha;
        let d2 = d * d;
        let prefactor = p.b * p.b / (d2 * d2);
        Ok(0.5 * (forward + swapped) * prefactor)
    }

    /// The printed closed form for this metric's kind.
    pub fn g_closed(&self, y: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        match self.kind() {
            MetricKind::Exponential => self.g_closed_exponential(y, u, v),
            MetricKind::InfiniteSeries => self.g_closed_infinite(y, u, v),
            MetricKind::CustomPhi(_) => Err(Error::Unsupported(
                "no closed-form fundamental tensor for a custom φ; use the oracle".into(),
            )),
        }
    }

    /// `⟨X + ((√⟨y,y⟩ − ⟨X,y⟩)/⟨y,y⟩)·y, w⟩` for `y, w ∈ 𝔪`.
    pub fn criterion_exponential_m(&self, y: &[f64], w: &[f64]) -> Result<f64> {
        Error::check_dim(self.dim(), y.len())?;
        Error::check_dim(self.dim(), w.len())?;
        let a = self.inner(y, y);
        if !(a > 0.0) {
            return Err(Error::domain("criterion undefined for y_m = 0"));
        }
        let coef = (a.sqrt() - self.beta(y)) / a;
        Ok(self.beta(w) + coef * self.inner(y, w))
    }

    /// Printed infinite-series criterion
    /// `⟨X,y⟩³/(⟨X,y⟩ − √⟨y,y⟩)⁴·[⟨X,w⟩{…} + ⟨y,w⟩{…}]` for `y, w ∈ 𝔪`.
    pub fn criterion_infinite_m(&self, y: &[f64], w: &[f64]) -> Result<f64> {
        Error::check_dim(self.dim(), y.len())?;
        Error::check_dim(self.dim(), w.len())?;
        let a = self.inner(y, y);
        if !(a > 0.0) {
            return Err(Error::domain("criterion undefined for y_m = 0"));
        }
        let alpha = a.sqrt();
        let b = self.beta(y);
        self.infinite_guard(alpha, b)?;
        let xw = self.beta(w);
        let yw = self.inner(y, w);
        let x_brace = compensated_sum([b * b, -4.0 * a * alpha, b * alpha, 2.0 * a]);
        let y_brace = b * b / alpha - b;
        let bracket = compensated_sum([xw * x_brace, yw * y_brace]);
        let d = b - alpha;
        let d2 = d * d;
        Ok(bracket * (b * b * b / (d2 * d2)))
    }
}
