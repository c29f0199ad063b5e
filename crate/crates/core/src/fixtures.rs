//! Small named algebras and spaces used by tests, the acceptance suite and
//! examples. Every constructor panics on invalid data; the data is fixed.

use nalgebra::DMatrix;

use crate::geodesic::HomogeneousSpace;
use crate::lie::{LieAlgebra, ReductiveSplit, StructureConstants, DEFAULT_JACOBI_TOL};
use crate::metric::{MetricKind, MetricSpec};

fn algebra(dim: usize, entries: &[(usize, usize, usize, f64)]) -> LieAlgebra {
    let c = StructureConstants::from_sparse(dim, entries).expect("fixture constants");
    LieAlgebra::with_default_labels(c, DEFAULT_JACOBI_TOL).expect("fixture algebra")
}

/// `R^n` with the zero bracket.
pub fn abelian(n: usize) -> LieAlgebra {
    algebra(n, &[])
}

/// `[e1, e2] = e3`.
pub fn heisenberg() -> LieAlgebra {
    algebra(3, &[(0, 1, 2, 1.0)])
}

/// `[e1, e2] = e3`, `[e2, e3] = e1`, `[e3, e1] = e2`.
pub fn so3() -> LieAlgebra {
    algebra(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
}

/// `so(3) ⊕ R` with `e4` central.
pub fn so3_plus_r() -> LieAlgebra {
    algebra(4, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
}

/// Identity inner product on `𝔪`, `b0 = 10`, and `X` given in full `𝔤`
/// coordinates (its `𝔥` part must vanish).
pub fn space(
    alg: LieAlgebra,
    split: ReductiveSplit,
    kind: MetricKind,
    x_full: &[f64],
) -> HomogeneousSpace {
    assert_eq!(
        x_full.len(),
        alg.dim(),
        "x must have one coordinate per basis vector"
    );
    for &h in split.h_indices() {
        assert_eq!(x_full[h], 0.0, "x must vanish on h");
    }
    let x: Vec<f64> = split.m_indices().iter().map(|&i| x_full[i]).collect();
    let k = x.len();
    let metric = MetricSpec::new(kind, DMatrix::identity(k, k), x, 10.0).expect("fixture metric");
    HomogeneousSpace::new(alg, split, metric, DEFAULT_JACOBI_TOL).expect("fixture space")
}

/// Heisenberg group with `𝔥 = 0`.
pub fn heisenberg_space(kind: MetricKind, x_full: &[f64]) -> HomogeneousSpace {
    space(heisenberg(), ReductiveSplit::trivial(3), kind, x_full)
}

/// `SO(3)` with `𝔥 = 0`.
pub fn so3_space(kind: MetricKind, x_full: &[f64]) -> HomogeneousSpace {
    space(so3(), ReductiveSplit::trivial(3), kind, x_full)
}

/// `(SO(3) × R)/SO(2)` with `𝔥 = span(e3)`, `𝔪 = span(e1, e2, e4)` and
/// `X = x4·e4`.
pub fn so3_plus_r_space(kind: MetricKind, x4: f64) -> HomogeneousSpace {
    let split = ReductiveSplit::new(4, vec![2], vec![0, 1, 3]).expect("fixture split");
    space(so3_plus_r(), split, kind, &[0.0, 0.0, 0.0, x4])
}

fn riemannian(alg: LieAlgebra) -> HomogeneousSpace {
    let n = alg.dim();
    let metric = MetricSpec::riemannian(DMatrix::identity(n, n)).expect("fixture metric");
    HomogeneousSpace::new(alg, ReductiveSplit::trivial(n), metric, DEFAULT_JACOBI_TOL)
        .expect("fixture space")
}

/// Heisenberg group with the identity left-invariant Riemannian metric.
pub fn heisenberg_riemannian() -> HomogeneousSpace {
    riemannian(heisenberg())
}

/// `SO(3)` with the bi-invariant metric of the identity inner product.
pub fn so3_riemannian() -> HomogeneousSpace {
    riemannian(so3())
}
