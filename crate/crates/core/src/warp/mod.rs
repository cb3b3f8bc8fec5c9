//! Warped products `I ×_f F` over a one-dimensional base: G₂-structures over
//! SU(3) fibers, Spin(7)-structures over G₂ fibers, the Einstein profile
//! equation and the named cone families.
//!
//! Forms on the product are stored in the *mixed* presentation: fiber
//! coframe indices `1..n` plus `dt` as index `n + 1`, coefficients being jets
//! in `t`. In the warped metric `|eⁱ| = 1/f` and `|dt| = 1`;
//! [`to_orthonormal`] rescales to the coframe `{f e¹, …, f eⁿ, dt}`.

mod family;
mod g2;
mod grid;
mod spin7;

pub use family::{make_g2_family, FamilySpec, G2Family};
pub use g2::{
    cor35_conditions, warped_g2_generic, warped_g2_torsion, warped_phi, Cor35, G2Crosscheck,
    WarpedG2,
};
pub use grid::{
    chebyshev_grid, g2_grid, obstruction_variation, profile_grid, sample_window, spin7_grid,
    GridClass, DEFAULT_GRID,
};
pub use spin7::{
    cor64_conditions, warped_spin7_generic, warped_spin7_torsion, Cor64, Spin7Crosscheck, WarpedSpin7,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::frames::FrameAlgebra;
use crate::scalar::{Expr, Jet2};

/// The warping functions of the Einstein profile table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Warping {
    Linear,
    Sine,
    HypSine,
    HypCosine,
    Exponential,
}

impl Warping {
    pub const ALL: [Warping; 5] = [
        Warping::HypCosine,
        Warping::Exponential,
        Warping::HypSine,
        Warping::Linear,
        Warping::Sine,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "t" | "linear" => Warping::Linear,
            "sin" => Warping::Sine,
            "sinh" => Warping::HypSine,
            "cosh" => Warping::HypCosine,
            "exp" | "e^t" => Warping::Exponential,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Warping::Linear => "t",
            Warping::Sine => "sin",
            Warping::HypSine => "sinh",
            Warping::HypCosine => "cosh",
            Warping::Exponential => "exp",
        }
    }

    pub fn expr(self) -> Expr {
        let t = Expr::t();
        match self {
            Warping::Linear => t,
            Warping::Sine => t.sin(),
            Warping::HypSine => t.sinh(),
            Warping::HypCosine => t.cosh(),
            Warping::Exponential => t.exp(),
        }
    }

    pub fn derivative_expr(self) -> Expr {
        let t = Expr::t();
        match self {
            Warping::Linear => Expr::c(1.0),
            Warping::Sine => t.cos(),
            Warping::HypSine => t.cosh(),
            Warping::HypCosine => t.sinh(),
            Warping::Exponential => t.exp(),
        }
    }

    /// Maximal interval on which `f ≠ 0`.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Warping::Linear | Warping::HypSine => (0.0, f64::INFINITY),
            Warping::Sine => (0.0, std::f64::consts::PI),
            Warping::HypCosine | Warping::Exponential => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `(μ, λ)` for a fiber of dimension `d`, normalised as in the profile
    /// table: `μ ∈ {−(d−1), 0, d−1}`, `λ ∈ {−d, 0, d}`.
    pub fn einstein_constants(self, d: usize) -> (f64, f64) {
        let d = d as f64;
        match self {
            Warping::HypCosine => (-(d - 1.0), -d),
            Warping::Exponential => (0.0, -d),
            Warping::HypSine => (d - 1.0, -d),
            Warping::Linear => (d - 1.0, 0.0),
            Warping::Sine => (d - 1.0, d),
        }
    }
}

/// `f`, `α`, `β` on an open interval, with `α² + β² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpProfile {
    pub f: Expr,
    pub alpha: Expr,
    pub beta: Expr,
    pub domain: (f64, f64),
    pub warping: Option<Warping>,
}

/// A profile evaluated at one `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileJets {
    pub t: f64,
    pub f: Jet2,
    pub alpha: Jet2,
    pub beta: Jet2,
}

impl ProfileJets {
    /// `f′` as a jet; its second derivative is not available.
    pub fn df(&self) -> Jet2 {
        self.f.derivative()
    }
}

impl WarpProfile {
    pub fn new(warping: Warping, alpha: Expr, beta: Expr) -> Self {
        WarpProfile {
            f: warping.expr(),
            alpha,
            beta,
            domain: warping.domain(),
            warping: Some(warping),
        }
    }

    pub fn constant_angle(warping: Warping, alpha: f64, beta: f64) -> Self {
        Self::new(warping, Expr::c(alpha), Expr::c(beta))
    }

    /// `α = cos θ`, `β = sin θ`.
    pub fn angle(warping: Warping, theta: Expr) -> Self {
        Self::new(warping, theta.clone().cos(), theta.sin())
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn at(&self, t: f64) -> Result<ProfileJets> {
        let (lo, hi) = self.domain;
        if !(t > lo && t < hi) {
            return Err(Error::Domain {
                func: "warp profile",
                value: t,
            });
        }
        let f = self.f.jet(t)?;
        if f.v == 0.0 {
            return Err(Error::Domain {
                func: "warping function",
                value: t,
            });
        }
        let alpha = self.alpha.jet(t)?;
        let beta = self.beta.jet(t)?;
        let unit = alpha.v * alpha.v + beta.v * beta.v;
        if (unit - 1.0).abs() > 1e-12 {
            return Err(Error::hypothesis(
                "unit-angle",
                format!("α² + β² = {unit} at t = {t}"),
            ));
        }
        Ok(ProfileJets { t, f, alpha, beta })
    }
}

/// `(f′)² + (λ/d) f² − μ/(d−1)`.
pub fn einstein_profile_residual(f: &Expr, lambda: f64, mu: f64, d: usize, t: f64) -> Result<f64> {
    let j = f.jet(t)?;
    let d = d as f64;
    Ok(j.d1 * j.d1 + lambda / d * j.v * j.v - mu / (d - 1.0))
}

fn fiber_count(mask: u16, n: usize) -> i32 {
    (mask & !(1 << (n - 1))).count_ones() as i32
}

/// Mixed → orthonormal coframe `{f eⁱ, dt}`.
pub fn to_orthonormal(a: &Form<Jet2>, f: Jet2) -> Form<Jet2> {
    let n = a.dim();
    let r = f.recip();
    a.map_masked(|m, c| *c * r.powi(fiber_count(m, n)))
}

/// Orthonormal → mixed.
pub fn to_mixed(a: &Form<Jet2>, f: Jet2) -> Form<Jet2> {
    let n = a.dim();
    a.map_masked(|m, c| *c * f.powi(fiber_count(m, n)))
}

/// Hodge star of the warped metric, on mixed forms.
pub fn warped_hodge(a: &Form<Jet2>, f: Jet2) -> Form<Jet2> {
    to_mixed(&to_orthonormal(a, f).hodge(), f)
}

pub fn warped_norm2(a: &Form<Jet2>, f: Jet2) -> Jet2 {
    to_orthonormal(a, f).norm2()
}

/// Exterior derivative on `I × F`. `product` is the fiber frame with one
/// closed direction appended for `dt`; the `t`-dependence of coefficients
/// enters through `d(c eᴵ) = c deᴵ + (−1)^p c′ eᴵ∧dt`.
pub fn warped_d(product: &FrameAlgebra, a: &Form<Jet2>) -> Form<Jet2> {
    let mut out = product.d(a);
    let n = a.dim();
    let dt = 1u16 << (n - 1);
    let odd = a.degree() % 2 == 1;
    for (m, c) in a.terms() {
        if m & dt == 0 {
            let c1 = c.derivative();
            out.add_to_mask(m | dt, if odd { -c1 } else { c1 });
        }
    }
    out
}

/// Codifferential of a mixed 1-form in the warped metric, `δ = −*d*`.
pub fn warped_codifferential_1form(product: &FrameAlgebra, a: &Form<Jet2>, f: Jet2) -> Jet2 {
    -warped_hodge(&warped_d(product, &warped_hodge(a, f)), f).scalar_part()
}

pub(crate) fn dt_form(n: usize) -> Form<Jet2> {
    Form::basis(n, &[n])
}

#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn profile_table_solves_the_ode() {
        for w in Warping::ALL {
            for d in [6, 7] {
                let (mu, lambda) = w.einstein_constants(d);
                for t in [0.3, 0.8, 1.7] {
                    let r = einstein_profile_residual(&w.expr(), lambda, mu, d, t).unwrap();
                    assert!(r.abs() < 1e-12, "{w:?} d={d}: {r}");
                }
            }
        }
    }

    #[test]
    fn profile_rejects_non_unit_angle() {
        let p = WarpProfile::constant_angle(Warping::Linear, 1.0, 0.5);
        assert!(matches!(p.at(1.0), Err(Error::Hypothesis { .. })));
        assert!(p.at(-1.0).is_err());
    }

    #[test]
    fn hodge_of_dt_is_weighted_volume() {
        // *dt = f⁶ vol₆ up to the sign of moving dt past six fiber indices
        let f = Jet2::variable(2.0);
        let s = warped_hodge(&dt_form(7), f);
        assert_eq!(s.get(&[1, 2, 3, 4, 5, 6]).v, 64.0);
    }

    #[test]
    fn d_of_coefficient() {
        let frame = FrameAlgebra::abelian(7);
        let f = Jet2::variable(1.5);
        let a = Form::term(7, f * f, &[1]);
        let da = warped_d(&frame, &a);
        // d(t² e¹) = 2t dt∧e¹ = −2t e¹∧dt
        assert_eq!(da.get(&[1, 7]).v, -3.0);
        assert_eq!(warped_d(&frame, &da).max_abs(), 0.0);
    }
}
