//! Scalar abstraction shared by the plain `f64` evaluation of `F` and the
//! hyper-dual evaluation used by the Hessian oracle.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed to push a point through the `(α, β)` pipeline.
///
/// `lift` applies a C² scalar function given its value and first two
/// derivatives at the real part. That is all a second-order forward-mode
/// number needs, and it lets user-supplied `φ` enter the pipeline without
/// knowing anything about the number type.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(value: f64) -> Self;

    fn re(&self) -> f64;

    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self;

    fn scale(self, k: f64) -> Self {
        self * Self::constant(k)
    }

    fn sqrt(self) -> Self {
        let r = self.re().sqrt();
        self.lift(r, 0.5 / r, -0.25 / (r * r * r))
    }

    fn exp(self) -> Self {
        let e = self.re().exp();
        self.lift(e, e, e)
    }
}

impl Scalar for f64 {
    #[inline]
    fn constant(value: f64) -> Self {
        value
    }

    #[inline]
    fn re(&self) -> f64 {
        *self
    }

    #[inline]
    fn lift(self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }

    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }

    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

/// `Σ_ij a_i m_ij b_j` for a row-major square matrix.
pub(crate) fn quadratic<T: Scalar>(m: &nalgebra::DMatrix<f64>, a: &[T], b: &[T]) -> T {
    let n = a.len();
    let mut acc = T::constant(0.0);
    for i in 0..n {
        let mut row = T::constant(0.0);
        for j in 0..n {
            let w = m[(i, j)];
            if w != 0.0 {
                row = row + b[j].scale(w);
            }
        }
        acc = acc + a[i] * row;
    }
    acc
}

/// `Σ_i w_i a_i` with real weights.
pub(crate) fn weighted<T: Scalar>(w: &[f64], a: &[T]) -> T {
    w.iter()
        .zip(a)
        .fold(T::constant(0.0), |acc, (&wi, &ai)| acc + ai.scale(wi))
}
