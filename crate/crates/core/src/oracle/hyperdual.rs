use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// `a + b·ε₁ + c·ε₂ + d·ε₁ε₂` with `ε₁² = ε₂² = 0`.
///
/// Seeding `y + u·ε₁ + v·ε₂` and evaluating `f` leaves `∂²f/∂s∂t` (along `u`
/// and `v`) in the `ε₁ε₂` slot, with no truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub fn new(re: f64, e1: f64, e2: f64, e12: f64) -> Self {
        HyperDual { re, e1, e2, e12 }
    }

    pub fn seed(re: f64, e1: f64, e2: f64) -> Self {
        HyperDual {
            re,
            e1,
            e2,
            e12: 0.0,
        }
    }

    fn recip(self) -> Self {
        let r = 1.0 / self.re;
        self.lift(r, -r * r, 2.0 * r * r * r)
    }
}

impl Add for HyperDual {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        HyperDual::new(
            self.re + o.re,
            self.e1 + o.e1,
            self.e2 + o.e2,
            self.e12 + o.e12,
        )
    }
}

impl Sub for HyperDual {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        HyperDual::new(
            self.re - o.re,
            self.e1 - o.e1,
            self.e2 - o.e2,
            self.e12 - o.e12,
        )
    }
}

impl Neg for HyperDual {
    type Output = Self;

    fn neg(self) -> Self {
        HyperDual::new(-self.re, -self.e1, -self.e2, -self.e12)
    }
}

impl Mul for HyperDual {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        HyperDual::new(
            self.re * o.re,
            self.re * o.e1 + self.e1 * o.re,
            self.re * o.e2 + self.e2 * o.re,
            self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        )
    }
}

impl Div for HyperDual {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Scalar for HyperDual {
    fn constant(value: f64) -> Self {
        HyperDual::new(value, 0.0, 0.0, 0.0)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        HyperDual::new(
            f0,
            f1 * self.e1,
            f1 * self.e2,
            f1 * self.e12 + f2 * self.e1 * self.e2,
        )
    }

    fn scale(self, k: f64) -> Self {
        HyperDual::new(self.re * k, self.e1 * k, self.e2 * k, self.e12 * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_cross_term() {
        // f(s, t) = (1 + 2s + 3t)(4 - s + t): ∂²f/∂s∂t = 2·1 + 3·(−1) = −1
        let a = HyperDual::seed(1.0, 2.0, 3.0);
        let b = HyperDual::seed(4.0, -1.0, 1.0);
        let p = a * b;
        assert_eq!(p.re, 4.0);
        assert_eq!(p.e1, -1.0 + 2.0 * 4.0);
        assert_eq!(p.e12, -1.0);
    }

    #[test]
    fn exp_sqrt_div_match_finite_differences() {
        let f = |x: f64| (x.sqrt() / (1.0 + x)).exp();
        let x = HyperDual::seed(0.7, 1.0, 1.0);
        let fx = (x.sqrt() / (HyperDual::constant(1.0) + x)).exp();
        let h = 1e-4;
        let d1 = (f(0.7 + h) - f(0.7 - h)) / (2.0 * h);
        let d2 = (f(0.7 + h) - 2.0 * f(0.7) + f(0.7 - h)) / (h * h);
        assert!((fx.re - f(0.7)).abs() < 1e-15);
        assert!((fx.e1 - d1).abs() < 1e-7);
        assert!((fx.e12 - d2).abs() < 1e-6);
    }
}
