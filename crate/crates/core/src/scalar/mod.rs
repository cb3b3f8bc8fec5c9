//! Coefficient rings for forms.
//!
//! Forms are generic over [`Scalar`]. Three rings are provided: exact
//! quadratic surds ([`ExactScalar`]) for homogeneous frames, second-order
//! jets ([`Jet2`]) for quantities depending on the cone parameter `t`, and
//! plain `f64` for numeric checks.

mod exact;
mod expr;
mod jet;

pub use exact::{ExactScalar, Radical};
pub use expr::{Expr, Func};
pub use jet::Jet2;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A commutative coefficient ring with enough structure for exterior calculus.
///
/// `Div` is only ever called with a divisor known to be nonzero.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_exact(x: &ExactScalar) -> Self;
    /// Exact test in exact mode; all components `== 0.0` otherwise.
    fn is_zero(&self) -> bool;
    /// Numeric value (the jet value for [`Jet2`]).
    fn value(&self) -> f64;

    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.clone() * Self::from_ratio(num, den)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn value(&self) -> f64 {
        *self
    }
}
