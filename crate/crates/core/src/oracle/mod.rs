//! Fundamental tensor from its definition,
//! `g_Y(U, V) = ½ ∂²/∂s∂t F²(Y + sU + tV)|_{s=t=0}`, and audits of the
//! printed closed forms against it.
//!
//! Two independent routes are offered. [`OracleScheme::DualNumber`] pushes
//! hyper-dual numbers through [`MetricSpec::norm_scalar`] and reads the cross
//! coefficient exactly. [`OracleScheme::CentralDifference`] uses the
//! four-point stencil on plain `F` evaluations.

mod hyperdual;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricKind, MetricSpec};
use crate::util;

pub use hyperdual::HyperDual;

/// Allowed range for an explicit stencil step.
pub const STEP_RANGE: (f64, f64) = (1e-7, 1e-3);

/// Relative agreement below which a closed form is considered confirmed.
pub const AUDIT_AGREEMENT_TOL: f64 = 1e-6;

/// How the mixed second derivative is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleScheme {
    /// Hyper-dual forward mode.
    #[default]
    DualNumber,
    /// Four-point stencil; `step` defaults to [`default_step`].
    CentralDifference {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
}

impl OracleScheme {
    pub fn central(step: Option<f64>) -> Result<Self> {
        let s = OracleScheme::CentralDifference { step };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if let OracleScheme::CentralDifference { step: Some(h) } = *self {
            if !(STEP_RANGE.0..=STEP_RANGE.1).contains(&h) {
                return Err(Error::input(format!(
                    "central-difference step {h:e} outside [{:e}, {:e}]",
                    STEP_RANGE.0, STEP_RANGE.1
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleScheme::DualNumber => "dual_number",
            OracleScheme::CentralDifference { .. } => "central_difference",
        }
    }

    fn step_for(&self, metric: &MetricSpec, y: &[f64]) -> Option<f64> {
        match *self {
            OracleScheme::DualNumber => None,
            OracleScheme::CentralDifference { step } => {
                Some(step.unwrap_or_else(|| default_step(metric, y)))
            }
        }
    }
}

/// Stencil steps per unit of distance to the infinite-series cone edge.
pub const CONE_STEP_FACTOR: f64 = 3e-4;

/// `1e-5·(1 + √⟨y,y⟩)`, capped for the infinite-series metric at
/// `CONE_STEP_FACTOR · α(s − 1)/b` and floored at the smallest allowed step.
///
/// `α(s − 1)/b` approximates the distance from `y` to the cone edge, the
/// length scale on which `F` varies there.
pub fn default_step(metric: &MetricSpec, y: &[f64]) -> f64 {
    let alpha = metric.alpha(y);
    let mut h = 1e-5 * (1.0 + alpha);
    if let MetricKind::InfiniteSeries = metric.kind() {
        let s = metric.beta(y) / alpha;
        h = h.min(CONE_STEP_FACTOR * alpha * (s - 1.0) / metric.b());
    }
    h.max(STEP_RANGE.0)
}

fn stencil_point(y: &[f64], u: &[f64], v: &[f64], su: f64, tv: f64) -> Vec<f64> {
    // The offset is formed first so that swapping (u, su) with (v, tv)
    // yields bitwise the same point.
    y.iter()
        .zip(u.iter().zip(v))
        .map(|(&yi, (&ui, &vi))| yi + (su * ui + tv * vi))
        .collect()
}

fn stencil(y: &[f64], u: &[f64], v: &[f64], h: f64) -> [Vec<f64>; 4] {
    [
        stencil_point(y, u, v, h, h),
        stencil_point(y, u, v, h, -h),
        stencil_point(y, u, v, -h, h),
        stencil_point(y, u, v, -h, -h),
    ]
}

/// `g_y(u, v)` from the definition of the fundamental tensor.
pub fn g_oracle(
    metric: &MetricSpec,
    y: &[f64],
    u: &[f64],
    v: &[f64],
    scheme: OracleScheme,
) -> Result<f64> {
    scheme.validate()?;
    Error::check_dim(metric.dim(), y.len())?;
    Error::check_dim(metric.dim(), u.len())?;
    Error::check_dim(metric.dim(), v.len())?;
    metric.check_admissible(y)?;
    match scheme.step_for(metric, y) {
        None => {
            let seeded: Vec<HyperDual> = y
                .iter()
                .zip(u.iter().zip(v))
                .map(|(&yi, (&ui, &vi))| HyperDual::seed(yi, ui, vi))
                .collect();
            let f = metric.norm_scalar(&seeded)?;
            Ok(0.5 * (f * f).e12)
        }
        Some(h) => {
            let [pp, pm, mp, mm] = stencil(y, u, v, h);
            let f2 = |p: &[f64]| -> Result<f64> {
                metric.finsler_norm(p).map(|f| f * f).map_err(|e| match e {
                    Error::Domain(msg) => Error::Domain(format!(
                        "stencil point with step {h:e} is inadmissible ({msg}); use a smaller step"
                    )),
                    other => other,
                })
            };
            let (fpp, fpm, fmp, fmm) = (f2(&pp)?, f2(&pm)?, f2(&mp)?, f2(&mm)?);
            Ok(0.5 * ((fpp + fmm) - (fpm + fmp)) / (4.0 * h * h))
        }
    }
}

/// Which printed expression an audit checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    Exponential,
    InfiniteSeries,
}

impl ClosedForm {
    fn eval(self, metric: &MetricSpec, y: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        match self {
            ClosedForm::Exponential => metric.g_closed_exponential(y, u, v),
            ClosedForm::InfiniteSeries => metric.g_closed_infinite(y, u, v),
        }
    }
}

/// One audited `(y, u, v)` triple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditSample {
    pub index: usize,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub closed: f64,
    pub oracle: f64,
    pub abs_discrepancy: f64,
    /// `|closed − oracle| / max(|oracle|, √(g(u,u)·g(v,v)))`.
    pub rel_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub metric: &'static str,
    pub closed_form: ClosedForm,
    pub scheme: OracleScheme,
    pub seed: u64,
    pub samples: usize,
    /// Candidate draws consumed, including rejected ones.
    pub draws: usize,
    pub max_abs_discrepancy: f64,
    pub max_rel_discrepancy: f64,
    pub agreement_tol: f64,
    /// `max_rel_discrepancy <= agreement_tol`.
    pub agrees: bool,
    pub worst_case: AuditSample,
    pub per_sample: Vec<AuditSample>,
}

/// `(y, u, v)` in `𝔪` coordinates.
pub type Triple = (Vec<f64>, Vec<f64>, Vec<f64>);

/// Seeded admissible `(y, u, v)` triples: `y` uniform on the `α`-unit sphere
/// of `𝔪` with inadmissible points rejected, `u` and `v` standard normal.
pub fn draw_samples(
    metric: &MetricSpec,
    n_samples: usize,
    seed: u64,
    scheme: OracleScheme,
) -> Result<(Vec<Triple>, usize)> {
    let n = metric.dim();
    let mut rng = util::rng(seed);
    let max_draws = 1000 * n_samples;
    let mut out = Vec::with_capacity(n_samples);
    let mut draws = 0;
    while out.len() < n_samples {
        if draws >= max_draws {
            return Err(Error::domain(format!(
                "only {} admissible samples after {draws} draws; the admissible cone is too thin",
                out.len()
            )));
        }
        draws += 1;
        let raw = util::unit_vec(&mut rng, n);
        let u = util::normal_vec(&mut rng, n);
        let v = util::normal_vec(&mut rng, n);
        let a = metric.alpha(&raw);
        let y: Vec<f64> = raw.iter().map(|c| c / a).collect();
        if !metric.is_admissible(&y) {
            continue;
        }
        if let Some(h) = scheme.step_for(metric, &y) {
            if !stencil(&y, &u, &v, h)
                .iter()
                .all(|p| metric.is_admissible(p))
            {
                continue;
            }
        }
        out.push((y, u, v));
    }
    Ok((out, draws))
}

/// Compares the metric's printed closed form against [`g_oracle`] on
/// `n_samples` seeded triples. Discrepancies are reported, never raised.
pub fn audit_closed_forms(
    metric: &MetricSpec,
    n_samples: usize,
    seed: u64,
    scheme: OracleScheme,
) -> Result<AuditReport> {
    let form = match metric.kind() {
        MetricKind::Exponential => ClosedForm::Exponential,
        MetricKind::InfiniteSeries => ClosedForm::InfiniteSeries,
        MetricKind::CustomPhi(_) => {
            return Err(Error::input(
                "audit needs an exponential or infinite-series metric",
            ))
        }
    };
    audit_against(metric, form, n_samples, seed, scheme)
}

/// Audit of a chosen closed form, evaluated with `metric`'s `X` and `⟨·,·⟩`.
pub fn audit_against(
    metric: &MetricSpec,
    form: ClosedForm,
    n_samples: usize,
    seed: u64,
    scheme: OracleScheme,
) -> Result<AuditReport> {
    if n_samples == 0 {
        return Err(Error::input("n_samples must be at least 1"));
    }
    scheme.validate()?;
    let (triples, draws) = draw_samples(metric, n_samples, seed, scheme)?;
    let per_sample = triples
        .into_par_iter()
        .enumerate()
        .map(|(index, (y, u, v))| {
            let closed = form.eval(metric, &y, &u, &v)?;
            let oracle = g_oracle(metric, &y, &u, &v, scheme)?;
            let guu = g_oracle(metric, &y, &u, &u, scheme)?;
            let gvv = g_oracle(metric, &y, &v, &v, scheme)?;
            let abs = (closed - oracle).abs();
            let scale = oracle.abs().max((guu * gvv).abs().sqrt());
            let rel = if scale > 0.0 { abs / scale } else { abs };
            Ok(AuditSample {
                index,
                y,
                u,
                v,
                closed,
                oracle,
                abs_discrepancy: abs,
                rel_discrepancy: rel,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_abs_discrepancy = per_sample
        .iter()
        .map(|s| s.abs_discrepancy)
        .fold(0.0, f64::max);
    let mut worst = &per_sample[0];
    for s in &per_sample {
        if s.rel_discrepancy > worst.rel_discrepancy
            || (s.rel_discrepancy.is_nan() && !worst.rel_discrepancy.is_nan())
        {
            worst = s;
        }
    }
    let max_rel_discrepancy = worst.rel_discrepancy;
    Ok(AuditReport {
        metric: metric.kind().name(),
        closed_form: form,
        scheme,
        seed,
        samples: n_samples,
        draws,
        max_abs_discrepancy,
        max_rel_discrepancy,
        agreement_tol: AUDIT_AGREEMENT_TOL,
        agrees: max_rel_discrepancy <= AUDIT_AGREEMENT_TOL,
        worst_case: worst.clone(),
        per_sample,
    })
}
