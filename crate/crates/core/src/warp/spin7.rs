//! Spin(7)-structures `ϕ = f³ φ∧dt + f⁴ *₇φ` on `I ×_f M` over a G₂ fiber.

use serde::Serialize;

use super::{
    dt_form, to_mixed, to_orthonormal, warped_codifferential_1form, warped_d, WarpProfile,
};
use crate::catalog::G2Fiber;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::g2;
use crate::scalar::Jet2;
use crate::spin7::{spin7_scalar, spin7_torsion, Spin7Structure, TorsionSpin7};

#[derive(Clone, Debug, PartialEq)]
pub struct WarpedSpin7 {
    pub t: f64,
    pub mixed: TorsionSpin7<f64>,
    pub ortho: TorsionSpin7<f64>,
    pub delta_lambda1: f64,
    pub scalar: f64,
    pub dphi_norm: f64,
}

impl WarpedSpin7 {
    pub fn norms(&self) -> [f64; 2] {
        self.ortho.norms()
    }

    pub fn mask(&self, tol: f64) -> u8 {
        self.ortho.mask(tol * self.dphi_norm.max(1.0))
    }
}

fn lift(a: &Form<f64>) -> Form<Jet2> {
    a.map(|c| Jet2::constant(*c)).extend(8)
}

fn warped_phi4(f: Jet2) -> Form<Jet2> {
    let phi = g2::phi::<f64>();
    let f3 = f * f * f;
    lift(&phi).wedge(&dt_form(8)).scale(&f3) + lift(&phi.hodge()).scale(&(f3 * f))
}

fn assemble(t: f64, mixed: TorsionSpin7<Jet2>, f: Jet2, delta: f64) -> WarpedSpin7 {
    let ortho = TorsionSpin7 {
        lambda1: to_orthonormal(&mixed.lambda1, f),
        lambda5: to_orthonormal(&mixed.lambda5, f),
    };
    let s = Spin7Structure::new(to_orthonormal(&warped_phi4(f), f));
    let dphi = ortho.dphi(&s).to_f64();
    let ortho = ortho.value();
    WarpedSpin7 {
        t,
        mixed: mixed.value(),
        scalar: spin7_scalar(&ortho, &delta),
        ortho,
        delta_lambda1: delta,
        dphi_norm: dphi.norm2().max(0.0).sqrt(),
    }
}

/// Closed-form torsion at `t`; only `w.f` is used.
pub fn warped_spin7_torsion(fiber: &G2Fiber, w: &WarpProfile, t: f64) -> Result<WarpedSpin7> {
    let p = w.at(t)?;
    let f = p.f;
    let fp = p.df();
    let tau = &fiber.torsion;
    let phi = g2::phi::<f64>();
    let star_phi = phi.hodge();
    let dt = dt_form(8);
    let c = Jet2::constant;
    let f3 = f * f * f;
    let f4 = f3 * f;

    let a = (c(tau.tau0) + c(4.0) * fp) / f;
    let lambda1 = dt.scale(&a) + lift(&tau.tau1).scale(&c(24.0 / 7.0));
    let lambda5 = lift(&tau.tau1.wedge(&phi)).wedge(&dt).scale(&(c(-3.0 / 7.0) * f3))
        + lift(&tau.tau1.wedge(&star_phi)).scale(&(c(4.0 / 7.0) * f4))
        + lift(&tau.tau2.wedge(&phi)).scale(&f4)
        + lift(&tau.tau3.hodge()).wedge(&dt).scale(&f3);

    // δ₈(a dt + γ) = −(a′ + 7af′/f) + f⁻² δ₇γ
    let delta = -(a.d1 + 7.0 * a.v * fp.v / f.v) + (24.0 / 7.0) * fiber.delta_tau1 / (f.v * f.v);
    Ok(assemble(t, TorsionSpin7 { lambda1, lambda5 }, f, delta))
}

/// Torsion extracted from the jet-built `dϕ` (frame-backed fibers only; the
/// G₂ form is the standard one in the fiber coframe).
pub fn warped_spin7_generic(fiber: &G2Fiber, w: &WarpProfile, t: f64) -> Result<WarpedSpin7> {
    let frame = fiber
        .frame
        .as_ref()
        .ok_or_else(|| Error::hypothesis("no-frame", "generic path needs a frame-backed fiber"))?;
    if frame.dim() != 7 {
        return Err(Error::Dimension(frame.dim(), 7));
    }
    let product = frame.extend_abelian(1);
    let f = w.at(t)?.f;
    let phi4 = warped_phi4(f);
    let dphi_o = to_orthonormal(&warped_d(&product, &phi4), f);
    let s = Spin7Structure::new(to_orthonormal(&phi4, f));
    let tol = 1e-8 * dphi_o.max_abs().max(1.0);
    let ortho = spin7_torsion(&s, &dphi_o, tol)?;
    let mixed = TorsionSpin7 {
        lambda1: to_mixed(&ortho.lambda1, f),
        lambda5: to_mixed(&ortho.lambda5, f),
    };
    let delta = warped_codifferential_1form(&product, &mixed.lambda1, f).v;
    Ok(assemble(t, mixed, f, delta))
}

/// Residuals i)–v): `τ₀ + 4f′`, `|τ₁|` (twice), `|τ₂|`, `|τ₃|`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Cor64 {
    pub residuals: [f64; 5],
}

impl Cor64 {
    /// Residual indices governing λ₁ and λ₅.
    pub const GROUPS: [&'static [usize]; 2] = [&[0, 1], &[2, 3, 4]];

    pub fn vanishing(&self, tol: f64) -> [bool; 2] {
        Self::GROUPS.map(|g| g.iter().all(|&i| self.residuals[i].abs() <= tol))
    }
}

pub fn cor64_conditions(fiber: &G2Fiber, w: &WarpProfile, t: f64) -> Result<Cor64> {
    let p = w.at(t)?;
    let [_, n1, n2, n3] = fiber.torsion.norms();
    Ok(Cor64 {
        residuals: [fiber.torsion.tau0 + 4.0 * p.f.d1, n1, n1, n2, n3],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Spin7Crosscheck {
    pub t: f64,
    pub deviation: [f64; 2],
    pub max_deviation: f64,
    pub scalar_closed: f64,
    pub scalar_generic: f64,
}

impl Spin7Crosscheck {
    pub fn run(fiber: &G2Fiber, w: &WarpProfile, t: f64) -> Result<Self> {
        let a = warped_spin7_torsion(fiber, w, t)?;
        let b = warped_spin7_generic(fiber, w, t)?;
        let deviation = [
            (a.ortho.lambda1.clone() - b.ortho.lambda1.clone()).max_abs(),
            (a.ortho.lambda5.clone() - b.ortho.lambda5.clone()).max_abs(),
        ];
        Ok(Spin7Crosscheck {
            t,
            deviation,
            max_deviation: deviation[0].max(deviation[1]),
            scalar_closed: a.scalar,
            scalar_generic: b.scalar,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_fiber;
    use crate::warp::Warping;

    fn fiber(name: &str) -> G2Fiber {
        load_fiber(name).unwrap().g2().unwrap().clone()
    }

    fn profile(w: Warping) -> WarpProfile {
        WarpProfile::constant_angle(w, 1.0, 0.0)
    }

    #[test]
    fn cone_over_nearly_parallel_is_parallel() {
        let r = warped_spin7_torsion(&fiber("np_g2_abstract:-4"), &profile(Warping::Linear), 0.9)
            .unwrap();
        assert!(r.norms().iter().all(|n| *n < 1e-12));
        assert!(r.scalar.abs() < 1e-9);
    }

    #[test]
    fn sine_cone_scalar_curvature() {
        let np = fiber("np_g2_abstract");
        let r = warped_spin7_torsion(&np, &profile(Warping::Sine), std::f64::consts::FRAC_PI_2)
            .unwrap();
        assert!((r.ortho.lambda1.get(&[8]) - 4.0).abs() < 1e-12);
        assert!(r.norms()[1] < 1e-12);
        assert!((r.scalar - 56.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_cone_over_parallel_fiber() {
        let r = warped_spin7_torsion(&fiber("parallel_g2_abstract"), &profile(Warping::Exponential), 0.3)
            .unwrap();
        assert!((r.ortho.lambda1.get(&[8]) - 4.0).abs() < 1e-12);
        assert!((r.scalar + 56.0).abs() < 1e-9);
        let c = cor64_conditions(&fiber("parallel_g2_abstract"), &profile(Warping::Exponential), 0.3)
            .unwrap();
        assert!((c.residuals[0] - 4.0 * 0.3f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_generic() {
        for (name, w) in [
            ("abelian7", Warping::Exponential),
            ("s3xs3_r", Warping::Sine),
            ("solv6_r", Warping::HypCosine),
        ] {
            for t in [0.4, 1.1] {
                let x = Spin7Crosscheck::run(&fiber(name), &profile(w), t).unwrap();
                assert!(x.max_deviation < 1e-9, "{name}: {x:?}");
                assert!((x.scalar_closed - x.scalar_generic).abs() < 1e-9, "{name}: {x:?}");
            }
        }
    }
}
