//! Run reports written by `hfgeo --out`.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::{
    EquivalenceReport, GeodesicSearchResult, GoCoverageReport, InvarianceReport, ResidualSource,
    VectorCheck,
};
use crate::lie::StructureReport;
use crate::metric::ShenReport;
use crate::oracle::AuditReport;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidatePayload {
    pub dim: usize,
    pub h_dim: usize,
    pub m_dim: usize,
    pub metric: String,
    pub b: f64,
    pub b0: f64,
    pub structure: StructureReport,
    pub invariance: InvarianceReport,
    /// Shen's condition at the document's own `b`.
    pub shen: ShenReport,
    pub default_source: ResidualSource,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalencePayload {
    pub corollary: Option<EquivalenceReport>,
    /// Absent when `X = 0` or `X` is not admissible.
    pub theorem_x: Option<EquivalenceReport>,
    pub theorem_x_skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Validate(ValidatePayload),
    Shen(ShenReport),
    Audit(AuditReport),
    CheckVector(VectorCheck),
    Search(GeodesicSearchResult),
    GoCheck(GoCoverageReport),
    Equivalence(EquivalencePayload),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub toolkit_version: String,
    /// SHA-256 of the input document bytes.
    pub inputs_digest: String,
    /// `None` when timing is suppressed for byte-stable output.
    pub wall_time_ms: Option<f64>,
    pub payload: Payload,
}

impl RunReport {
    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_pretty()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
