//! Numerical toolkit for homogeneous Finsler spaces `G/H` carrying the
//! exponential metric `F = α·e^{β/α}` or the infinite-series metric
//! `F = β²/(β − α)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`] holds the Lie algebra `𝔤` (structure constants), the reductive
//!   split `𝔤 = 𝔥 + 𝔪`, brackets and projections.
//! * [`metric`] defines the `(α, β)`-metric family on `𝔪`, Shen's validity
//!   test, the norm `F`, and the closed-form fundamental tensors as printed
//!   for the two metrics.
//! * [`oracle`] computes `g_Y(U, V) = ½ ∂²/∂s∂t F²(Y + sU + tV)` from first
//!   principles (hyper-dual numbers or a four-point stencil) and audits the
//!   closed forms against it.
//! * [`geodesic`] decides geodesic vectors via
//!   `g_{Y_𝔪}(Y_𝔪, [Y, Z]_𝔪) = 0 ∀ Z ∈ 𝔤`, checks the Riemannian/Finsler
//!   equivalences, searches for geodesic vectors, and estimates g.o. coverage.
//! * [`document`], [`report`] and [`cli`] provide the JSON input format, the
//!   run reports and the `hfgeo` command line.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod geodesic;
pub mod lie;
pub mod metric;
pub mod oracle;
pub mod report;
pub mod scalar;
mod util;

pub use error::{Error, Result};
pub use geodesic::{
    CriterionResidual, EquivalenceReport, GeodesicSearchResult, GoCoverageReport, HomogeneousSpace,
    ResidualSource, SearchOptions,
};
pub use lie::{AlgebraVector, LieAlgebra, ReductiveSplit, StructureConstants, StructureReport};
pub use metric::{MetricKind, MetricSpec, PhiPolynomial, PhiValues, ShenReport};
pub use oracle::{AuditReport, OracleScheme};

/// Toolkit version embedded in every run report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
