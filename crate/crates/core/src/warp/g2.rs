//! G₂-structures `φ = f² ω∧dt + f³(α ψ₊ − β ψ₋)` on `I ×_f L`.

use serde::Serialize;

use super::{
    dt_form, to_mixed, to_orthonormal, warped_codifferential_1form, warped_d, warped_hodge,
    ProfileJets, WarpProfile,
};
use crate::catalog::Su3Fiber;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::g2::{g2_scalar, g2_torsion, G2Structure, TorsionG2};
use crate::scalar::{Jet2, Scalar};
use crate::su3::{omega, psi_minus, psi_plus, TorsionSU3};

/// Warped torsion at one `t`, in both presentations.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedG2 {
    pub t: f64,
    /// Fiber forms and `dt`, as the torsion is usually written.
    pub mixed: TorsionG2<f64>,
    /// Components in the orthonormal coframe `{f e¹, …, f e⁶, dt}`.
    pub ortho: TorsionG2<f64>,
    pub delta_tau1: f64,
    pub scalar: f64,
    /// `|dφ|`, the scale of the vanishing threshold.
    pub dphi_norm: f64,
}

impl WarpedG2 {
    pub fn norms(&self) -> [f64; 4] {
        self.ortho.norms()
    }

    /// Nonvanishing pattern under `norm ≤ tol·max(1, |dφ|)`.
    pub fn mask(&self, tol: f64) -> u8 {
        self.ortho.mask(tol * self.dphi_norm.max(1.0))
    }
}

fn lift(a: &Form<f64>) -> Form<Jet2> {
    a.map(|c| Jet2::constant(*c)).extend(7)
}

fn values(t: &TorsionG2<Jet2>) -> TorsionG2<f64> {
    t.value()
}

fn ortho_torsion(t: &TorsionG2<Jet2>, f: Jet2) -> TorsionG2<Jet2> {
    TorsionG2 {
        tau0: t.tau0,
        tau1: to_orthonormal(&t.tau1, f),
        tau2: to_orthonormal(&t.tau2, f),
        tau3: to_orthonormal(&t.tau3, f),
    }
}

/// `φ` in the mixed presentation.
pub fn warped_phi(p: &ProfileJets) -> Form<Jet2> {
    let f = p.f;
    let dt = dt_form(7);
    let w = lift(&omega::<f64>());
    w.wedge(&dt).scale(&(f * f))
        + (lift(&psi_plus::<f64>()).scale(&p.alpha) - lift(&psi_minus::<f64>()).scale(&p.beta))
            .scale(&(f * f * f))
}

fn jet(x: f64) -> Jet2 {
    Jet2::constant(x)
}

fn scale(a: &Form<f64>, c: Jet2) -> Form<Jet2> {
    lift(a).scale(&c)
}

/// Closed-form torsion in the mixed presentation.
///
/// The two `*₆(ν₁∧ω)`, `*₆(π₁∧ω)` terms of `τ₃` carry a factor `f²`: without
/// it they would scale as `f⁻³` in the orthonormal coframe while every other
/// term scales as `f⁻¹`, and the generic extraction disagrees.
fn closed_form(t: &TorsionSU3<f64>, p: &ProfileJets) -> TorsionG2<Jet2> {
    let (f, a, b) = (p.f, p.alpha, p.beta);
    let fp = p.df();
    let (ap, bp) = (a.derivative(), b.derivative());
    let (p0, s0) = (jet(t.pi0), jet(t.sigma0));
    let fr = f.recip();
    let dt = dt_form(7);
    let w = omega::<f64>();
    let w2 = w.wedge(&w);
    let pp = psi_plus::<f64>();
    let pm = psi_minus::<f64>();
    let (pi1, nu1) = (&t.pi1, &t.nu1);
    let k = |x: f64| jet(x);

    let tau0 = k(4.0 / 7.0) * fr * (k(3.0) * p0 * a - k(3.0) * s0 * b + f * (a * bp - b * ap));

    let tau1 = dt.scale(&((p0 * b + s0 * a + k(2.0) * fp) * fr * k(0.5)))
        + lift(&(nu1.clone() + pi1.clone())).scale(&k(1.0 / 6.0));

    let star = |x: Form<f64>| x.hodge();
    let tau2 = (scale(&star(nu1.wedge(&w2)), k(-2.0 / 3.0))
        + scale(&star(pi1.wedge(&w2)), k(1.0 / 3.0)))
    .wedge(&dt)
        + scale(&star(pi1.wedge(&pp)), k(-1.0 / 3.0) * f * b)
        + scale(&star(pi1.wedge(&pm)), k(-1.0 / 3.0) * f * a)
        + scale(&star(nu1.wedge(&pp)), k(2.0 / 3.0) * f * b)
        + scale(&star(nu1.wedge(&pm)), k(2.0 / 3.0) * f * a)
        - scale(&t.pi2, f * b)
        - scale(&t.sigma2, f * a);

    let f2 = f * f;
    let tau3 = scale(
        &pp,
        k(-3.0 / 14.0) * f2 * (p0 * a * a - s0 * a * b - k(2.0) * f * bp),
    ) + scale(
        &pm,
        k(3.0 / 14.0) * f2 * (p0 * a * b - s0 * b * b + k(2.0) * f * ap),
    ) + scale(&w, k(2.0 / 7.0) * f * (p0 * a - s0 * b - k(2.0) * f * a * bp + k(2.0) * f * b * ap))
        .wedge(&dt)
        + scale(&star(nu1.wedge(&w)), k(-0.5) * f2)
        + scale(&star(pi1.wedge(&w)), k(0.5) * f2)
        + (scale(&star(pi1.wedge(&pp)), k(0.5) * f * a)
            - scale(&star(pi1.wedge(&pm)), k(0.5) * f * b)
            - scale(&star(nu1.wedge(&pp)), k(0.5) * f * a)
            + scale(&star(nu1.wedge(&pm)), k(0.5) * f * b)
            + scale(&t.pi2, f * a)
            - scale(&t.sigma2, f * b))
        .wedge(&dt)
        - scale(&star(t.nu3.clone()), f2);

    TorsionG2 {
        tau0,
        tau1,
        tau2,
        tau3,
    }
}

/// `δτ₁` for `τ₁ = a dt + γ`: `−(a′ + 6af′/f) + f⁻² δ₆γ`.
fn closed_delta_tau1(fiber: &Su3Fiber, t: &TorsionSU3<f64>, p: &ProfileJets) -> f64 {
    let f = p.f;
    let fp = p.df();
    let a = (jet(t.pi0) * p.beta + jet(t.sigma0) * p.alpha + jet(2.0) * fp) / (jet(2.0) * f);
    let delta_gamma = (fiber.delta_pi1.value() + fiber.delta_nu1.value()) / 6.0;
    -(a.d1 + 6.0 * a.v * fp.v / f.v) + delta_gamma / (f.v * f.v)
}

fn assemble(
    t: f64,
    mixed: &TorsionG2<Jet2>,
    f: Jet2,
    phi_o: &Form<Jet2>,
    delta_tau1: f64,
) -> WarpedG2 {
    let ortho = ortho_torsion(mixed, f);
    let g = G2Structure::new(phi_o.clone());
    let (dphi, _) = ortho.differentials(&g);
    let ortho = values(&ortho);
    let scalar = g2_scalar(&ortho, &delta_tau1);
    WarpedG2 {
        t,
        mixed: values(mixed),
        ortho,
        delta_tau1,
        scalar,
        dphi_norm: dphi.norm2().v.max(0.0).sqrt(),
    }
}

/// Closed-form torsion of the warped structure at `t`.
pub fn warped_g2_torsion(fiber: &Su3Fiber, w: &WarpProfile, t: f64) -> Result<WarpedG2> {
    let p = w.at(t)?;
    let tf = fiber.torsion.to_f64();
    tf.check_membership(1e-9)?;
    let mixed = closed_form(&tf, &p);
    let delta = closed_delta_tau1(fiber, &tf, &p);
    let phi_o = to_orthonormal(&warped_phi(&p), p.f);
    Ok(assemble(t, &mixed, p.f, &phi_o, delta))
}

/// Torsion extracted from `dφ`, `d*φ` built by the Leibniz rule on the
/// fiber frame (requires a frame-backed fiber).
pub fn warped_g2_generic(fiber: &Su3Fiber, w: &WarpProfile, t: f64) -> Result<WarpedG2> {
    let frame = fiber
        .frame
        .as_ref()
        .ok_or_else(|| Error::hypothesis("no-frame", "generic path needs a frame-backed fiber"))?;
    if frame.dim() != 6 {
        return Err(Error::Dimension(frame.dim(), 6));
    }
    let product = frame.extend_abelian(1);
    let p = w.at(t)?;
    let f = p.f;
    let phi = warped_phi(&p);
    let dphi = warped_d(&product, &phi);
    let dstar = warped_d(&product, &warped_hodge(&phi, f));
    let phi_o = to_orthonormal(&phi, f);
    let g = G2Structure::new(phi_o.clone());
    let dphi_o = to_orthonormal(&dphi, f);
    let tol = 1e-8 * dphi_o.max_abs().max(1.0);
    let ortho = g2_torsion(&g, &dphi_o, &to_orthonormal(&dstar, f), tol)?;
    let mixed = TorsionG2 {
        tau0: ortho.tau0,
        tau1: to_mixed(&ortho.tau1, f),
        tau2: to_mixed(&ortho.tau2, f),
        tau3: to_mixed(&ortho.tau3, f),
    };
    let delta = warped_codifferential_1form(&product, &mixed.tau1, f).v;
    Ok(assemble(t, &mixed, f, &phi_o, delta))
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Crosscheck {
    pub t: f64,
    /// Max componentwise deviation per τᵢ, orthonormal coframe.
    pub deviation: [f64; 4],
    pub max_deviation: f64,
    pub scalar_closed: f64,
    pub scalar_generic: f64,
}

fn max_diff(a: &Form<f64>, b: &Form<f64>) -> f64 {
    (a.clone() - b.clone()).max_abs()
}

pub(crate) fn crosscheck_from(a: &WarpedG2, b: &WarpedG2) -> G2Crosscheck {
    let deviation = [
        (a.ortho.tau0 - b.ortho.tau0).abs(),
        max_diff(&a.ortho.tau1, &b.ortho.tau1),
        max_diff(&a.ortho.tau2, &b.ortho.tau2),
        max_diff(&a.ortho.tau3, &b.ortho.tau3),
    ];
    G2Crosscheck {
        t: a.t,
        deviation,
        max_deviation: deviation.into_iter().fold(0.0, f64::max),
        scalar_closed: a.scalar,
        scalar_generic: b.scalar,
    }
}

impl G2Crosscheck {
    pub fn run(fiber: &Su3Fiber, w: &WarpProfile, t: f64) -> Result<Self> {
        let closed = warped_g2_torsion(fiber, w, t)?;
        let generic = warped_g2_generic(fiber, w, t)?;
        Ok(crosscheck_from(&closed, &generic))
    }
}

/// Residuals i)–ix) of the vanishing conditions; norms are in the fiber
/// metric.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Cor35 {
    pub residuals: [f64; 9],
}

impl Cor35 {
    /// Residual indices (0-based) governing τ₀, τ₁, τ₂, τ₃.
    pub const GROUPS: [&'static [usize]; 4] = [&[0], &[1, 2], &[3, 4], &[5, 6, 7, 8]];

    /// Which τᵢ the residuals predict to vanish.
    pub fn vanishing(&self, tol: f64) -> [bool; 4] {
        Self::GROUPS.map(|g| g.iter().all(|&i| self.residuals[i].abs() <= tol))
    }
}

pub fn cor35_conditions(fiber: &Su3Fiber, w: &WarpProfile, t: f64) -> Result<Cor35> {
    let p = w.at(t)?;
    let tf = fiber.torsion.to_f64();
    let (f, a, b) = (p.f.v, p.alpha.v, p.beta.v);
    let (ap, bp) = (p.alpha.d1, p.beta.d1);
    let fp = p.f.d1;
    let (p0, s0) = (tf.pi0, tf.sigma0);
    let n = |x: Form<f64>| x.norm2().max(0.0).sqrt();
    let (pi1, nu1) = (&tf.pi1, &tf.nu1);
    Ok(Cor35 {
        residuals: [
            3.0 * p0 * a - 3.0 * s0 * b + f * a * bp - f * b * ap,
            s0 * a + p0 * b + 2.0 * fp,
            n(pi1.clone() + nu1.clone()),
            n(pi1.clone() - nu1.scale(&2.0)),
            n(tf.pi2.scale(&b) + tf.sigma2.scale(&a)),
            p0 * a - s0 * b - 2.0 * f * a * bp + 2.0 * f * b * ap,
            n(pi1.clone() - nu1.clone()),
            n(tf.pi2.scale(&a) - tf.sigma2.scale(&b)),
            n(tf.nu3.clone()),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_fiber;
    use crate::scalar::Expr;
    use crate::warp::Warping;

    fn fiber(name: &str) -> Su3Fiber {
        load_fiber(name).unwrap().su3().unwrap().clone()
    }

    #[test]
    fn usual_cone_over_nearly_kaehler_is_parallel() {
        let nk = fiber("nk_abstract");
        let w = WarpProfile::constant_angle(Warping::Linear, 1.0, 0.0);
        let r = warped_g2_torsion(&nk, &w, 1.3).unwrap();
        assert!(r.norms().iter().all(|n| *n < 1e-12), "{:?}", r.norms());
        assert!(cor35_conditions(&nk, &w, 1.3)
            .unwrap()
            .residuals
            .iter()
            .all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn sine_cone_is_nearly_parallel() {
        let nk = fiber("nk_abstract");
        // ρ = atan2(0, 1) = 0
        let w = WarpProfile::angle(Warping::Sine, Expr::t());
        let r = warped_g2_torsion(&nk, &w, 1.0).unwrap();
        assert!((r.ortho.tau0 - 4.0).abs() < 1e-12);
        assert!(r.norms()[1..].iter().all(|n| *n < 1e-12));
        assert!((r.scalar - 42.0).abs() < 1e-9);
        let c = cor35_conditions(&nk, &w, 1.0).unwrap();
        assert!(c.residuals[1..].iter().all(|x| x.abs() < 1e-12));
        assert!((c.residuals[0] - 7.0 * 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn exponential_cone_over_flat_fiber() {
        let ab = fiber("abelian6");
        let w = WarpProfile::constant_angle(Warping::Exponential, 1.0, 0.0);
        for r in [
            warped_g2_torsion(&ab, &w, 0.0).unwrap(),
            warped_g2_generic(&ab, &w, 0.0).unwrap(),
        ] {
            assert!((r.ortho.tau1.get(&[7]) - 1.0).abs() < 1e-12);
            assert!((r.delta_tau1 + 6.0).abs() < 1e-12);
            assert!((r.scalar + 42.0).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_matches_generic_on_solvmanifold() {
        let s = fiber("solv6");
        let w = WarpProfile::constant_angle(Warping::HypCosine, 1.0, 0.0);
        let x = G2Crosscheck::run(&s, &w, 0.7).unwrap();
        assert!(x.max_deviation < 1e-9, "{x:?}");
        assert!((x.scalar_closed - x.scalar_generic).abs() < 1e-9);
        assert!((x.scalar_closed + 42.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_matches_generic_with_moving_angle() {
        let s = fiber("s3xs3");
        let theta = Expr::c(0.4) - Expr::t().cos() * 0.3;
        let w = WarpProfile::angle(Warping::Sine, theta);
        for t in [0.5, 1.5, 2.5] {
            let x = G2Crosscheck::run(&s, &w, t).unwrap();
            assert!(x.max_deviation < 1e-9, "{x:?}");
            assert!((x.scalar_closed - x.scalar_generic).abs() < 1e-9, "{x:?}");
        }
    }
}
