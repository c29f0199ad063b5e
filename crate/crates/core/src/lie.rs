//! Real Lie algebras given by structure constants, together with a reductive
//! decomposition `𝔤 = 𝔥 + 𝔪`.
//!
//! Brackets are evaluated as `[a, b] = Σ_{i,j} a_i b_j c[i][j][·]`. Structure
//! constants are stored antisymmetrized, so `[a, b] = −[b, a]` holds bitwise.
//!
//! Only the infinitesimal reductive conditions `[𝔥, 𝔥] ⊆ 𝔥` and
//! `[𝔥, 𝔪] ⊆ 𝔪` are checked. Compactness of the isotropy group cannot be read
//! off structure constants and is left to the caller.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for the Jacobi identity and the reductive
/// conditions, per index triple.
pub const DEFAULT_JACOBI_TOL: f64 = 1e-9;

/// Largest change antisymmetrization may make to any stored entry.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Coordinates of an element of `𝔤` in the fixed basis `{e_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraVector(Vec<f64>);

impl AlgebraVector {
    /// Builds a vector, rejecting non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "coordinate {} is not finite ({})",
                i + 1,
                coords[i]
            )));
        }
        Ok(AlgebraVector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        AlgebraVector(vec![0.0; dim])
    }

    /// The basis vector `e_i` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        AlgebraVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// Euclidean coordinate norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        AlgebraVector(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &AlgebraVector) -> Result<Self> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(AlgebraVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for AlgebraVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense rank-3 array `c[i][j][k]` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
///
/// No invariants are enforced here; this is the raw form that
/// [`check_structure`] inspects and [`LieAlgebra::new`] validates.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        StructureConstants {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    /// Builds a dense array from sparse `(i, j, k, value)` entries (0-based).
    ///
    /// Each entry also fills `c[j][i][k] = −value` unless that slot is given
    /// explicitly, in which case both raw values are kept and any mismatch is
    /// left for the antisymmetry check to report.
    pub fn from_sparse(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = StructureConstants::zeros(dim);
        let mut given = vec![false; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::input(format!(
                    "structure constant index ({}, {}, {}) out of range for dimension {dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if !v.is_finite() {
                return Err(Error::input(format!(
                    "structure constant c[{}][{}][{}] is not finite",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            let at = c.offset(i, j, k);
            if given[at] {
                return Err(Error::input(format!(
                    "structure constant c[{}][{}][{}] given twice",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            given[at] = true;
            c.data[at] = v;
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let at = c.offset(i, j, k);
                    let mirror = c.offset(j, i, k);
                    if given[at] && !given[mirror] {
                        c.data[mirror] = -c.data[at];
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let at = self.offset(i, j, k);
        self.data[at] = value;
    }

    /// Worst `|c[i][j][k] + c[j][i][k]|` and where it occurs.
    pub fn antisymmetry_residual(&self) -> (f64, Option<[usize; 3]>) {
        let n = self.dim;
        let mut worst = (0.0, None);
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let r = (self.get(i, j, k) + self.get(j, i, k)).abs();
                    if r > worst.0 {
                        worst = (r, Some([i, j, k]));
                    }
                }
            }
        }
        worst
    }

    /// Worst component of `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`
    /// over all index triples.
    pub fn jacobi_residual(&self) -> (f64, Option<[usize; 3]>) {
        let n = self.dim;
        let mut worst = (0.0, None);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut r = 0.0;
                        for l in 0..n {
                            r += self.get(i, j, l) * self.get(l, k, m)
                                + self.get(j, k, l) * self.get(l, i, m)
                                + self.get(k, i, l) * self.get(l, j, m);
                        }
                        if r.abs() > worst.0 {
                            worst = (r.abs(), Some([i, j, k]));
                        }
                    }
                }
            }
        }
        worst
    }

    /// `(c[i][j][k] − c[j][i][k]) / 2` everywhere, plus the largest change made.
    fn antisymmetrized(&self) -> (StructureConstants, f64) {
        let n = self.dim;
        let mut out = StructureConstants::zeros(n);
        let mut change: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = 0.5 * (self.get(i, j, k) - self.get(j, i, k));
                    change = change.max((v - self.get(i, j, k)).abs());
                    out.set(i, j, k, v);
                }
            }
        }
        (out, change)
    }

    /// Nonzero entries `(i, j, k, value)` with `i < j` (0-based).
    pub fn to_sparse_upper(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// A validated real Lie algebra `𝔤`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    constants: StructureConstants,
    labels: Vec<String>,
}

impl LieAlgebra {
    /// Validates and stores the algebra. Constants are antisymmetrized; the
    /// input is rejected if that moves any entry by more than
    /// [`ANTISYMMETRY_TOL`], or if the Jacobi residual exceeds `jacobi_tol`.
    pub fn new(
        constants: StructureConstants,
        labels: Vec<String>,
        jacobi_tol: f64,
    ) -> Result<Self> {
        let n = constants.dim();
        if n == 0 {
            return Err(Error::input("algebra dimension must be positive"));
        }
        if labels.len() != n {
            return Err(Error::input(format!(
                "expected {n} basis labels, got {}",
                labels.len()
            )));
        }
        if !(jacobi_tol > 0.0) {
            return Err(Error::input("jacobi_tol must be positive"));
        }
        let (residual, at) = constants.antisymmetry_residual();
        // A change of r/2 per entry corresponds to a residual r.
        if residual / 2.0 > ANTISYMMETRY_TOL {
            let [i, j, k] = at.expect("nonzero residual has a location");
            return Err(Error::input(format!(
                "structure constants not antisymmetric: c[{}][{}][{}] = {} but c[{}][{}][{}] = {}",
                i + 1,
                j + 1,
                k + 1,
                constants.get(i, j, k),
                j + 1,
                i + 1,
                k + 1,
                constants.get(j, i, k)
            )));
        }
        let (constants, _) = constants.antisymmetrized();
        let (jacobi, at) = constants.jacobi_residual();
        if jacobi > jacobi_tol {
            let [i, j, k] = at.expect("nonzero residual has a location");
            return Err(Error::input(format!(
                "Jacobi identity fails for (e{}, e{}, e{}): residual {jacobi:e} > {jacobi_tol:e}",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        Ok(LieAlgebra { constants, labels })
    }

    /// Algebra with default labels `e1, …, en`.
    pub fn with_default_labels(constants: StructureConstants, jacobi_tol: f64) -> Result<Self> {
        let labels = default_labels(constants.dim());
        LieAlgebra::new(constants, labels, jacobi_tol)
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn basis(&self, i: usize) -> AlgebraVector {
        AlgebraVector::basis(self.dim(), i)
    }

    /// `[a, b] = Σ_{i,j} a_i b_j c[i][j][·]`.
    pub fn bracket(&self, a: &AlgebraVector, b: &AlgebraVector) -> Result<AlgebraVector> {
        Error::check_dim(self.dim(), a.dim())?;
        Error::check_dim(self.dim(), b.dim())?;
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let ai = a[i];
            if ai == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = ai * b[j];
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.constants.get(i, j, k);
                }
            }
        }
        Ok(AlgebraVector(out))
    }

    /// `[a, e_i]` for a single basis element.
    pub fn bracket_basis(&self, a: &AlgebraVector, i: usize) -> Result<AlgebraVector> {
        Error::check_dim(self.dim(), a.dim())?;
        let n = self.dim();
        let mut out = vec![0.0; n];
        for j in 0..n {
            let aj = a[j];
            if aj == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += aj * self.constants.get(j, i, k);
            }
        }
        Ok(AlgebraVector(out))
    }

    /// Whether `z` commutes with every basis element, within `tol`.
    pub fn is_central(&self, z: &AlgebraVector, tol: f64) -> Result<bool> {
        for i in 0..self.dim() {
            if self.bracket_basis(z, i)?.max_abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Partition of the basis indices into `𝔥` and `𝔪` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductiveSplit {
    dim: usize,
    h: Vec<usize>,
    m: Vec<usize>,
}

impl ReductiveSplit {
    /// Checks that the index sets are in range, disjoint, and cover `0..dim`.
    /// `𝔪` keeps the given order, which fixes the coordinate order on `𝔪`.
    pub fn new(dim: usize, h_indices: Vec<usize>, m_indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for (name, set) in [("h", &h_indices), ("m", &m_indices)] {
            for &i in set.iter() {
                if i >= dim {
                    return Err(Error::input(format!(
                        "{name}_indices: index {} out of range for dimension {dim}",
                        i + 1
                    )));
                }
                if seen[i] {
                    return Err(Error::input(format!(
                        "{name}_indices: index {} appears more than once in the split",
                        i + 1
                    )));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::input(format!(
                "split does not cover basis index {}",
                i + 1
            )));
        }
        if m_indices.is_empty() {
            return Err(Error::input("m_indices must not be empty"));
        }
        Ok(ReductiveSplit {
            dim,
            h: h_indices,
            m: m_indices,
        })
    }

    /// `𝔥 = 0`, `𝔪 = 𝔤`.
    pub fn trivial(dim: usize) -> Self {
        ReductiveSplit {
            dim,
            h: Vec::new(),
            m: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m
    }

    pub fn m_dim(&self) -> usize {
        self.m.len()
    }

    /// `v ↦ v_𝔪`: zeroes the `𝔥` coordinates.
    pub fn project_m(&self, v: &AlgebraVector) -> Result<AlgebraVector> {
        Error::check_dim(self.dim, v.dim())?;
        let mut out = v.0.clone();
        for &i in &self.h {
            out[i] = 0.0;
        }
        Ok(AlgebraVector(out))
    }

    /// Coordinates of `v_𝔪` in the `𝔪` basis (length `m_dim`).
    pub fn restrict_m(&self, v: &AlgebraVector) -> Result<Vec<f64>> {
        Error::check_dim(self.dim, v.dim())?;
        Ok(self.m.iter().map(|&i| v[i]).collect())
    }

    /// Coordinates of `v_𝔥` in the `𝔥` basis.
    pub fn restrict_h(&self, v: &AlgebraVector) -> Result<Vec<f64>> {
        Error::check_dim(self.dim, v.dim())?;
        Ok(self.h.iter().map(|&i| v[i]).collect())
    }

    /// Inverse of [`restrict_m`](Self::restrict_m).
    pub fn embed_m(&self, m_coords: &[f64]) -> Result<AlgebraVector> {
        Error::check_dim(self.m.len(), m_coords.len())?;
        let mut out = vec![0.0; self.dim];
        for (&i, &c) in self.m.iter().zip(m_coords) {
            out[i] = c;
        }
        Ok(AlgebraVector(out))
    }

    /// `m + h` assembled from coordinates on each summand.
    pub fn assemble(&self, m_coords: &[f64], h_coords: &[f64]) -> Result<AlgebraVector> {
        Error::check_dim(self.h.len(), h_coords.len())?;
        let mut out = self.embed_m(m_coords)?;
        for (&i, &c) in self.h.iter().zip(h_coords) {
            out.0[i] = c;
        }
        Ok(out)
    }
}

/// Residuals of the structural hypotheses on `(𝔤, 𝔥, 𝔪)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub tol: f64,
    pub antisymmetry_residual: f64,
    pub antisymmetry_pass: bool,
    pub jacobi_residual: f64,
    pub jacobi_pass: bool,
    /// Largest `𝔪`-component of `[h_a, h_b]`.
    pub subalgebra_residual: f64,
    pub subalgebra_pass: bool,
    /// Largest `𝔥`-component of `[h_a, m_b]`.
    pub reductive_residual: f64,
    pub reductive_pass: bool,
    pub pass: bool,
}

impl StructureReport {
    /// First failing check as a short message, if any.
    pub fn failure(&self) -> Option<String> {
        let checks = [
            (
                "antisymmetry",
                self.antisymmetry_pass,
                self.antisymmetry_residual,
            ),
            ("Jacobi identity", self.jacobi_pass, self.jacobi_residual),
            ("[h, h] ⊆ h", self.subalgebra_pass, self.subalgebra_residual),
            ("[h, m] ⊆ m", self.reductive_pass, self.reductive_residual),
        ];
        checks
            .iter()
            .find(|(_, pass, _)| !pass)
            .map(|(name, _, r)| format!("{name} fails: residual {r:e} > {:e}", self.tol))
    }
}

/// Evaluates antisymmetry, Jacobi, and the two reductive conditions.
/// Never fails: violations are carried in the report.
pub fn check_structure(
    constants: &StructureConstants,
    split: &ReductiveSplit,
    tol: f64,
) -> StructureReport {
    let (antisymmetry_residual, _) = constants.antisymmetry_residual();
    let (jacobi_residual, _) = constants.jacobi_residual();
    let mut subalgebra_residual: f64 = 0.0;
    let mut reductive_residual: f64 = 0.0;
    for &a in split.h_indices() {
        for &b in split.h_indices() {
            for &k in split.m_indices() {
                subalgebra_residual = subalgebra_residual.max(constants.get(a, b, k).abs());
            }
        }
        for &b in split.m_indices() {
            for &k in split.h_indices() {
                reductive_residual = reductive_residual.max(constants.get(a, b, k).abs());
            }
        }
    }
    let antisymmetry_pass = antisymmetry_residual <= 2.0 * ANTISYMMETRY_TOL;
    let jacobi_pass = jacobi_residual <= tol;
    let subalgebra_pass = subalgebra_residual <= tol;
    let reductive_pass = reductive_residual <= tol;
    StructureReport {
        tol,
        antisymmetry_residual,
        antisymmetry_pass,
        jacobi_residual,
        jacobi_pass,
        subalgebra_residual,
        subalgebra_pass,
        reductive_residual,
        reductive_pass,
        pass: antisymmetry_pass && jacobi_pass && subalgebra_pass && reductive_pass,
    }
}
