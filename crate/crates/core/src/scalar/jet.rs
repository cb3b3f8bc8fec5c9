use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{ExactScalar, Scalar};

/// Value, first and second derivative of a function of one parameter at a
/// sample point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet2 { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Jet2 { v, d1: 0.0, d2: 0.0 }
    }

    /// The parameter itself at `t`.
    pub const fn variable(t: f64) -> Self {
        Jet2 { v: t, d1: 1.0, d2: 0.0 }
    }

    /// Derivative jet. The third derivative is not tracked, so the
    /// resulting `d2` is NaN; value and `d1` stay exact.
    pub fn derivative(self) -> Self {
        Jet2 {
            v: self.d1,
            d1: self.d2,
            d2: f64::NAN,
        }
    }

    /// Composition `g ∘ self` given `g`, `g′`, `g″` at `self.v`.
    pub fn chain(self, g0: f64, g1: f64, g2: f64) -> Self {
        Jet2 {
            v: g0,
            d1: g1 * self.d1,
            d2: g2 * self.d1 * self.d1 + g1 * self.d2,
        }
    }

    pub fn recip(self) -> Self {
        let x = self.v;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Self {
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.v;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sinh(self) -> Self {
        self.chain(self.v.sinh(), self.v.cosh(), self.v.sinh())
    }

    pub fn cosh(self) -> Self {
        self.chain(self.v.cosh(), self.v.sinh(), self.v.cosh())
    }

    pub fn tanh(self) -> Self {
        let th = self.v.tanh();
        let s = 1.0 - th * th;
        self.chain(th, s, -2.0 * th * s)
    }

    pub fn acos(self) -> Self {
        let x = self.v;
        let r = 1.0 - x * x;
        self.chain(x.acos(), -1.0 / r.sqrt(), -x / (r * r.sqrt()))
    }

    pub fn asin(self) -> Self {
        let x = self.v;
        let r = 1.0 - x * x;
        self.chain(x.asin(), 1.0 / r.sqrt(), x / (r * r.sqrt()))
    }

    pub fn atan(self) -> Self {
        let x = self.v;
        let r = 1.0 + x * x;
        self.chain(x.atan(), 1.0 / r, -2.0 * x / (r * r))
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn powf(self, p: f64) -> Self {
        let x = self.v;
        self.chain(x.powf(p), p * x.powf(p - 1.0), p * (p - 1.0) * x.powf(p - 2.0))
    }

    pub fn powi(self, n: i32) -> Self {
        let x = self.v;
        let n_f = n as f64;
        let d1 = if n == 0 { 0.0 } else { n_f * x.powi(n - 1) };
        let d2 = if n == 0 || n == 1 {
            0.0
        } else {
            n_f * (n_f - 1.0) * x.powi(n - 2)
        };
        self.chain(x.powi(n), d1, d2)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Jet2::new(self.v + r.v, self.d1 + r.d1, self.d2 + r.d2)
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Jet2::new(self.v - r.v, self.d1 - r.d1, self.d2 - r.d2)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Jet2::new(
            self.v * r.v,
            self.d1 * r.v + self.v * r.d1,
            self.d2 * r.v + 2.0 * self.d1 * r.d1 + self.v * r.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, r: Self) -> Self {
        self * r.recip()
    }
}

impl Scalar for Jet2 {
    fn zero() -> Self {
        Jet2::constant(0.0)
    }
    fn one() -> Self {
        Jet2::constant(1.0)
    }
    fn from_i64(n: i64) -> Self {
        Jet2::constant(n as f64)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Jet2::constant(num as f64 / den as f64)
    }
    fn from_exact(x: &ExactScalar) -> Self {
        Jet2::constant(x.to_f64())
    }
    /// All three components vanish: a jet with zero value but nonzero slope
    /// still contributes after differentiation.
    fn is_zero(&self) -> bool {
        self.v == 0.0 && self.d1 == 0.0 && self.d2 == 0.0
    }
    fn value(&self) -> f64 {
        self.v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Jet2, b: (f64, f64, f64)) -> bool {
        (a.v - b.0).abs() < 1e-14 && (a.d1 - b.1).abs() < 1e-14 && (a.d2 - b.2).abs() < 1e-14
    }

    #[test]
    fn named_lifts() {
        assert!(close(Jet2::variable(FRAC_PI_2).sin(), (1.0, 0.0, -1.0)));
        assert!(close(Jet2::variable(3.0), (3.0, 1.0, 0.0)));
        assert!(close(Jet2::variable(0.0).cosh(), (1.0, 0.0, 1.0)));
    }

    #[test]
    fn constant_has_no_derivatives() {
        let c = Jet2::constant(2.5);
        assert_eq!((c.d1, c.d2), (0.0, 0.0));
    }

    #[test]
    fn leibniz() {
        let f = Jet2::new(2.0, 3.0, 5.0);
        let g = Jet2::new(7.0, 11.0, 13.0);
        let p = f * g;
        assert_eq!(p.v, 14.0);
        assert_eq!(p.d1, 3.0 * 7.0 + 2.0 * 11.0);
        assert_eq!(p.d2, 5.0 * 7.0 + 2.0 * 3.0 * 11.0 + 2.0 * 13.0);
    }

    #[test]
    fn quotient_of_identical_is_one() {
        let f = Jet2::variable(0.7).sin() + Jet2::constant(2.0);
        let q = f / f;
        assert!(close(q, (1.0, 0.0, 0.0)));
    }

    #[test]
    fn derivative_shifts() {
        let d = Jet2::new(1.0, 2.0, 3.0).derivative();
        assert_eq!((d.v, d.d1), (2.0, 3.0));
        assert!(d.d2.is_nan());
    }
}
