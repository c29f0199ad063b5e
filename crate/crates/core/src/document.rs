//! JSON input documents.
//!
//! ```json
//! {
//!   "algebra": { "dim": 3, "structure_constants": [[1, 2, 3, 1.0]] },
//!   "split":   { "h_indices": [], "m_indices": [1, 2, 3] },
//!   "metric":  { "kind": "exponential",
//!                "inner_product": [[1,0,0],[0,1,0],[0,0,1]],
//!                "x": [0, 0, 0.5], "b0": 2.0 },
//!   "options": { "criterion_tol": 1e-8, "seed": 7 }
//! }
//! ```
//!
//! Indices are 1-based. Each structure-constant entry `[i, j, k, v]` sets
//! `c[i][j][k] = v` and, unless given explicitly, `c[j][i][k] = −v`. `x` has
//! one coordinate per basis vector of `𝔤` and must vanish on `𝔥`.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geodesic::{HomogeneousSpace, ResidualSource};
use crate::lie::{LieAlgebra, ReductiveSplit, StructureConstants, DEFAULT_JACOBI_TOL};
use crate::metric::{MetricKind, MetricSpec, PhiPolynomial};
use crate::oracle::OracleScheme;

pub const ENV_JACOBI_TOL: &str = "FG_TOL_JACOBI";
pub const ENV_CRITERION_TOL: &str = "FG_TOL_CRITERION";

/// Seed used when neither a flag nor the document sets one.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub algebra: AlgebraSection,
    pub split: SplitSection,
    pub metric: MetricSection,
    #[serde(default, skip_serializing_if = "OptionsSection::is_empty")]
    pub options: OptionsSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_labels: Option<Vec<String>>,
    /// `(i, j, k, value)`, 1-based.
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    pub h_indices: Vec<usize>,
    pub m_indices: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    Exponential,
    InfiniteSeries,
    CustomPhi,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    pub kind: KindName,
    /// Gram matrix on `𝔪`, rows and columns in `m_indices` order.
    pub inner_product: Vec<Vec<f64>>,
    pub x: Vec<f64>,
    pub b0: f64,
    /// Coefficients `c_0, c_1, …` of `φ(s) = Σ c_k s^k` (custom kind only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_phi: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Scheme for oracle evaluations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleScheme>,
}

impl OptionsSection {
    pub fn is_empty(&self) -> bool {
        *self == OptionsSection::default()
    }
}

/// Options after applying document values over environment overrides over
/// built-in defaults. Command-line flags are applied by the caller.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedOptions {
    pub jacobi_tol: f64,
    /// `None` defers to the residual source's default.
    pub criterion_tol: Option<f64>,
    pub seed: u64,
    pub oracle: OracleScheme,
}

impl ResolvedOptions {
    pub fn resolve(doc: &OptionsSection, env: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let from_env =
            |name: &str| -> Result<Option<f64>> {
                match env(name) {
                    None => Ok(None),
                    Some(raw) => raw.trim().parse::<f64>().map(Some).map_err(|_| {
                        Error::input(format!("{name}: cannot parse {raw:?} as a number"))
                    }),
                }
            };
        let jacobi_tol = match doc.jacobi_tol {
            Some(t) => t,
            None => from_env(ENV_JACOBI_TOL)?.unwrap_or(DEFAULT_JACOBI_TOL),
        };
        let criterion_tol = match doc.criterion_tol {
            Some(t) => Some(t),
            None => from_env(ENV_CRITERION_TOL)?,
        };
        for (name, t) in [
            ("jacobi_tol", Some(jacobi_tol)),
            ("criterion_tol", criterion_tol),
        ] {
            if let Some(t) = t {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::input(format!(
                        "options.{name}: must be positive, got {t}"
                    )));
                }
            }
        }
        let oracle = doc.oracle.unwrap_or_default();
        oracle.validate().map_err(|e| within("options.oracle", e))?;
        Ok(ResolvedOptions {
            jacobi_tol,
            criterion_tol,
            seed: doc.seed.unwrap_or(DEFAULT_SEED),
            oracle,
        })
    }

    /// Options with built-in defaults only.
    pub fn defaults() -> Self {
        ResolvedOptions::resolve(&OptionsSection::default(), |_| None).expect("defaults are valid")
    }

    pub fn criterion_tol_for(&self, source: ResidualSource) -> f64 {
        self.criterion_tol.unwrap_or_else(|| source.default_tol())
    }
}

/// Prefixes an error message with the document field it concerns.
fn within(field: &str, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("{field}: {m}")),
        Error::Domain(m) => Error::Input(format!("{field}: {m}")),
        Error::Singularity(m) => Error::Input(format!("{field}: {m}")),
        Error::Unsupported(m) => Error::Input(format!("{field}: {m}")),
        Error::Parse(m) => Error::Parse(format!("{field}: {m}")),
        Error::DimensionMismatch { expected, got } => {
            Error::Input(format!("{field}: expected dimension {expected}, got {got}"))
        }
        e @ Error::Io { .. } => e,
    }
}

fn zero_based(field: &str, idx: &[usize]) -> Result<Vec<usize>> {
    idx.iter()
        .map(|&i| {
            i.checked_sub(1).ok_or_else(|| {
                Error::input(format!("{field}: index 0 is invalid (indices are 1-based)"))
            })
        })
        .collect()
}

impl SpecDocument {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn build_algebra(&self, jacobi_tol: f64) -> Result<LieAlgebra> {
        let a = &self.algebra;
        let mut entries = Vec::with_capacity(a.structure_constants.len());
        for (n, &(i, j, k, v)) in a.structure_constants.iter().enumerate() {
            if i == 0 || j == 0 || k == 0 {
                return Err(Error::input(format!(
                    "algebra.structure_constants[{n}]: index 0 is invalid (indices are 1-based)"
                )));
            }
            entries.push((i - 1, j - 1, k - 1, v));
        }
        let c = StructureConstants::from_sparse(a.dim, &entries)
            .map_err(|e| within("algebra.structure_constants", e))?;
        let labels = match &a.basis_labels {
            Some(l) => l.clone(),
            None => crate::lie::default_labels(a.dim),
        };
        LieAlgebra::new(c, labels, jacobi_tol).map_err(|e| within("algebra", e))
    }

    pub fn build_split(&self) -> Result<ReductiveSplit> {
        let h = zero_based("split.h_indices", &self.split.h_indices)?;
        let m = zero_based("split.m_indices", &self.split.m_indices)?;
        ReductiveSplit::new(self.algebra.dim, h, m).map_err(|e| within("split", e))
    }

    pub fn build_metric(&self, split: &ReductiveSplit) -> Result<MetricSpec> {
        let md = &self.metric;
        let k = split.m_dim();
        if md.inner_product.len() != k || md.inner_product.iter().any(|r| r.len() != k) {
            return Err(Error::input(format!(
                "metric.inner_product: expected a {k}x{k} matrix (one row per m index)"
            )));
        }
        if md.x.len() != split.dim() {
            return Err(Error::input(format!(
                "metric.x: expected {} coordinates (one per basis vector), got {}",
                split.dim(),
                md.x.len()
            )));
        }
        for &h in split.h_indices() {
            if md.x[h] != 0.0 {
                return Err(Error::input(format!(
                    "metric.x: component {} lies in h and must be 0, got {}",
                    h + 1,
                    md.x[h]
                )));
            }
        }
        let kind = match (md.kind, &md.custom_phi) {
            (KindName::CustomPhi, Some(c)) => MetricKind::CustomPhi(
                PhiPolynomial::new(c.clone()).map_err(|e| within("metric.custom_phi", e))?,
            ),
            (KindName::CustomPhi, None) => {
                return Err(Error::input(
                    "metric.custom_phi: required when kind is custom_phi",
                ))
            }
            (_, Some(_)) => {
                return Err(Error::input(
                    "metric.custom_phi: only allowed when kind is custom_phi",
                ))
            }
            (KindName::Exponential, None) => MetricKind::Exponential,
            (KindName::InfiniteSeries, None) => MetricKind::InfiniteSeries,
        };
        let ip = DMatrix::from_fn(k, k, |i, j| md.inner_product[i][j]);
        let x_m: Vec<f64> = split.m_indices().iter().map(|&i| md.x[i]).collect();
        MetricSpec::new(kind, ip, x_m, md.b0).map_err(|e| within("metric", e))
    }

    pub fn build(&self, jacobi_tol: f64) -> Result<HomogeneousSpace> {
        let algebra = self.build_algebra(jacobi_tol)?;
        let split = self.build_split()?;
        let metric = self.build_metric(&split)?;
        HomogeneousSpace::new(algebra, split, metric, jacobi_tol).map_err(|e| within("split", e))
    }

    /// Document describing `space`, with empty options.
    pub fn from_space(space: &HomogeneousSpace) -> Self {
        let split = space.split();
        let metric = space.metric();
        let ip = metric.inner_product();
        let k = metric.dim();
        let (kind, custom_phi) = match metric.kind() {
            MetricKind::Exponential => (KindName::Exponential, None),
            MetricKind::InfiniteSeries => (KindName::InfiniteSeries, None),
            MetricKind::CustomPhi(p) => (KindName::CustomPhi, Some(p.coeffs().to_vec())),
        };
        let labels = space.algebra().labels().to_vec();
        let default = crate::lie::default_labels(space.dim());
        SpecDocument {
            algebra: AlgebraSection {
                dim: space.dim(),
                basis_labels: (labels != default).then_some(labels),
                structure_constants: space
                    .algebra()
                    .constants()
                    .to_sparse_upper()
                    .into_iter()
                    .map(|(i, j, k, v)| (i + 1, j + 1, k + 1, v))
                    .collect(),
            },
            split: SplitSection {
                h_indices: split.h_indices().iter().map(|i| i + 1).collect(),
                m_indices: split.m_indices().iter().map(|i| i + 1).collect(),
            },
            metric: MetricSection {
                kind,
                inner_product: (0..k)
                    .map(|i| (0..k).map(|j| ip[(i, j)]).collect())
                    .collect(),
                x: space.x_vector().into_coords(),
                b0: metric.b0(),
                custom_phi,
            },
            options: OptionsSection::default(),
        }
    }
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// A parsed, validated document.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub document: SpecDocument,
    pub space: HomogeneousSpace,
    pub options: ResolvedOptions,
    /// SHA-256 of the file bytes.
    pub digest: String,
}

/// Reads, parses and validates a document, resolving options against the
/// process environment.
pub fn parse_spec(path: impl AsRef<Path>) -> Result<LoadedSpec> {
    parse_spec_with_env(path, |k| std::env::var(k).ok())
}

pub fn parse_spec_with_env(
    path: impl AsRef<Path>,
    env: impl Fn(&str) -> Option<String>,
) -> Result<LoadedSpec> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Parse(format!("{}: not UTF-8: {e}", path.display())))?;
    load_str(text, env).map(|(document, space, options)| LoadedSpec {
        document,
        space,
        options,
        digest: sha256_hex(&bytes),
    })
}

/// Parses and validates document text.
pub fn load_str(
    text: &str,
    env: impl Fn(&str) -> Option<String>,
) -> Result<(SpecDocument, HomogeneousSpace, ResolvedOptions)> {
    let document = SpecDocument::from_json_str(text)?;
    let options = ResolvedOptions::resolve(&document.options, env)?;
    let space = document.build(options.jacobi_tol)?;
    Ok((document, space, options))
}
