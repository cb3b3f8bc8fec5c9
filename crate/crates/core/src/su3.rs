//! SU(3)-structures on six-dimensional frames: torsion forms, their
//! irreducible components, classes and scalar curvature.

use crate::class::{su3_bits, ClassLabel};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::frames::FrameAlgebra;
use crate::linalg;
use crate::scalar::{ExactScalar, Scalar};

pub fn omega<S: Scalar>() -> Form<S> {
    Form::from_digits(6, &[(1, "12"), (1, "34"), (1, "56")])
}

pub fn psi_plus<S: Scalar>() -> Form<S> {
    Form::from_digits(6, &[(1, "135"), (-1, "146"), (-1, "236"), (-1, "245")])
}

pub fn psi_minus<S: Scalar>() -> Form<S> {
    Form::from_digits(6, &[(1, "136"), (1, "145"), (1, "235"), (-1, "246")])
}

/// The almost complex structure acting on forms of the adapted coframe,
/// `J e¹ = −e²`, `J e² = e¹` (and likewise on the other two complex lines),
/// extended multiplicatively. With this sign `Jψ₊ = ψ₋`.
pub fn j<S: Scalar>(a: &Form<S>) -> Form<S> {
    assert_eq!(a.dim(), 6);
    if a.degree() == 0 {
        return a.clone();
    }
    let images: Vec<Form<S>> = (1..=6)
        .map(|i| {
            if i % 2 == 1 {
                -Form::basis(6, &[i + 1])
            } else {
                Form::basis(6, &[i - 1])
            }
        })
        .collect();
    a.substitute(&images)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SU3Structure<S: Scalar> {
    pub omega: Form<S>,
    pub psi_plus: Form<S>,
    pub psi_minus: Form<S>,
}

impl<S: Scalar> SU3Structure<S> {
    /// The standard forms of an adapted coframe.
    pub fn canonical() -> Self {
        SU3Structure {
            omega: omega(),
            psi_plus: psi_plus(),
            psi_minus: psi_minus(),
        }
    }

    pub fn is_adapted(&self) -> bool {
        *self == Self::canonical()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionSU3<S: Scalar> {
    pub pi0: S,
    pub sigma0: S,
    pub pi1: Form<S>,
    pub nu1: Form<S>,
    pub pi2: Form<S>,
    pub sigma2: Form<S>,
    pub nu3: Form<S>,
}

/// `|x| ≤ tol`, exact when `tol == 0`.
pub(crate) fn negligible<S: Scalar>(x: &S, tol: f64) -> bool {
    x.is_zero() || x.value().abs() <= tol
}

pub(crate) fn form_negligible<S: Scalar>(f: &Form<S>, tol: f64) -> bool {
    f.coeffs().iter().all(|c| negligible(c, tol))
}

impl<S: Scalar> TorsionSU3<S> {
    pub fn zero() -> Self {
        TorsionSU3 {
            pi0: S::zero(),
            sigma0: S::zero(),
            pi1: Form::zero(6, 1),
            nu1: Form::zero(6, 1),
            pi2: Form::zero(6, 2),
            sigma2: Form::zero(6, 2),
            nu3: Form::zero(6, 3),
        }
    }

    /// `(dω, dψ₊, dψ₋)` assembled from the torsion forms.
    pub fn differentials(&self) -> (Form<S>, Form<S>, Form<S>) {
        let w = omega::<S>();
        let pp = psi_plus::<S>();
        let pm = psi_minus::<S>();
        let w2 = w.wedge(&w);
        let domega = pp.scale(&self.sigma0.scale_ratio(-3, 2))
            + pm.scale(&self.pi0.scale_ratio(3, 2))
            + self.nu1.wedge(&w)
            + self.nu3.clone();
        let dpp = w2.scale(&self.pi0) + self.pi1.wedge(&pp) - self.pi2.wedge(&w);
        let dpm = w2.scale(&self.sigma0) + self.pi1.wedge(&pm) - self.sigma2.wedge(&w);
        (domega, dpp, dpm)
    }

    /// Membership of π₂, σ₂ in Ω²₈ and of ν₃ in Ω³₁₂; `Err` names the
    /// offending component.
    pub fn check_membership(&self, tol: f64) -> Result<()> {
        let w = omega::<S>();
        let w2 = w.wedge(&w);
        let pp = psi_plus::<S>();
        let pm = psi_minus::<S>();
        for (name, beta) in [("pi2", &self.pi2), ("sigma2", &self.sigma2)] {
            let ok = form_negligible(&beta.wedge(&pp), tol)
                && form_negligible(&beta.wedge(&w2), tol)
                && form_negligible(&(j(beta) - beta.clone()), tol);
            if !ok {
                return Err(Error::Membership(format!("{name} is not in Ω²₈")));
            }
        }
        let nu3_ok = [&w, &pp, &pm]
            .iter()
            .all(|f| form_negligible(&self.nu3.wedge(f), tol));
        if !nu3_ok {
            return Err(Error::Membership("nu3 is not in Ω³₁₂".into()));
        }
        Ok(())
    }

    /// Bit mask of the nonzero components (see [`crate::class::su3_bits`]).
    /// A component counts as zero when its norm is at most
    /// `tol · max(1, largest component norm)`; `tol = 0` is exact.
    pub fn mask(&self, tol: f64) -> u8 {
        use su3_bits::*;
        let norms = [
            (PI0, self.pi0.square()),
            (SIGMA0, self.sigma0.square()),
            (PI2, self.pi2.norm2()),
            (SIGMA2, self.sigma2.norm2()),
            (NU3, self.nu3.norm2()),
            (NU1, self.nu1.norm2()),
            (PI1, self.pi1.norm2()),
        ];
        let scale = norms
            .iter()
            .map(|(_, n)| n.value().abs().sqrt())
            .fold(1.0, f64::max);
        norms
            .iter()
            .filter(|(_, n)| !(n.is_zero() || n.value().abs().sqrt() <= tol * scale))
            .fold(0, |m, (b, _)| m | b)
    }

    pub fn to_f64(&self) -> TorsionSU3<f64> {
        TorsionSU3 {
            pi0: self.pi0.value(),
            sigma0: self.sigma0.value(),
            pi1: self.pi1.to_f64(),
            nu1: self.nu1.to_f64(),
            pi2: self.pi2.to_f64(),
            sigma2: self.sigma2.to_f64(),
            nu3: self.nu3.to_f64(),
        }
    }
}

fn one_forms<S: Scalar>() -> Vec<Form<S>> {
    (1..=6).map(|i| Form::basis(6, &[i])).collect()
}

fn combine<S: Scalar>(coeffs: &[S]) -> Form<S> {
    Form::from_coeffs(6, 1, coeffs.to_vec())
}

/// Decomposes `(dω, dψ₊, dψ₋)` of an adapted structure into torsion forms
/// by orthogonal projection onto the irreducible summands.
///
/// `tol` bounds the consistency and membership checks (`0` = exact).
pub fn extract<S: Scalar>(
    domega: &Form<S>,
    dpsi_plus: &Form<S>,
    dpsi_minus: &Form<S>,
    tol: f64,
) -> Result<TorsionSU3<S>> {
    let w = omega::<S>();
    let w2 = w.wedge(&w);
    let pp = psi_plus::<S>();
    let pm = psi_minus::<S>();
    let es = one_forms::<S>();

    let span = |lead: &Form<S>, tail: &Form<S>| -> Vec<Form<S>> {
        std::iter::once(lead.clone())
            .chain(es.iter().map(|e| e.wedge(tail)))
            .collect()
    };

    let (c_plus, rem_plus) = linalg::project(dpsi_plus, &span(&w2, &pp))?;
    let (c_minus, rem_minus) = linalg::project(dpsi_minus, &span(&w2, &pm))?;
    let pi0 = c_plus[0].clone();
    let pi1 = combine(&c_plus[1..]);
    let sigma0 = c_minus[0].clone();
    let pi1_check = combine(&c_minus[1..]);
    if !form_negligible(&(pi1.clone() - pi1_check), tol) {
        return Err(Error::Inconsistent(
            "the 1-form parts of dψ₊ and dψ₋ disagree".into(),
        ));
    }
    // −β∧ω = *β on Ω²₈, so the Ω⁴₈ remainders are Hodge duals.
    let pi2 = rem_plus.hodge();
    let sigma2 = rem_minus.hodge();

    let mut span_w = vec![pp.clone(), pm.clone()];
    span_w.extend(es.iter().map(|e| e.wedge(&w)));
    let (c_w, nu3) = linalg::project(domega, &span_w)?;
    let nu1 = combine(&c_w[2..]);
    let sigma0_w = c_w[0].scale_ratio(-2, 3);
    let pi0_w = c_w[1].scale_ratio(2, 3);
    if !negligible(&(sigma0_w - sigma0.clone()), tol) || !negligible(&(pi0_w - pi0.clone()), tol) {
        return Err(Error::Inconsistent(
            "the Ω³₁ parts of dω disagree with π₀, σ₀ from dψ±".into(),
        ));
    }

    let t = TorsionSU3 {
        pi0,
        sigma0,
        pi1,
        nu1,
        pi2,
        sigma2,
        nu3,
    };
    t.check_membership(tol)?;
    let (a, b, c) = t.differentials();
    let rebuilt = form_negligible(&(a - domega.clone()), tol)
        && form_negligible(&(b - dpsi_plus.clone()), tol)
        && form_negligible(&(c - dpsi_minus.clone()), tol);
    if !rebuilt {
        return Err(Error::Inconsistent(
            "torsion forms do not reproduce the differentials".into(),
        ));
    }
    Ok(t)
}

/// Exact torsion of an adapted SU(3)-structure on a frame algebra.
pub fn su3_torsion(
    s: &SU3Structure<ExactScalar>,
    frame: &FrameAlgebra,
) -> Result<TorsionSU3<ExactScalar>> {
    if frame.dim() != 6 {
        return Err(Error::Dimension(frame.dim(), 6));
    }
    if !s.is_adapted() {
        return Err(Error::Frame("SU(3)-structure must be given in an adapted coframe".into()));
    }
    extract(
        &frame.d(&s.omega),
        &frame.d(&s.psi_plus),
        &frame.d(&s.psi_minus),
        0.0,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct SU3Class<S: Scalar> {
    pub label: ClassLabel,
    /// `c = −(3/2)σ₀` in `dω = cψ₊` for coupled structures.
    pub coupled_c: Option<S>,
}

pub fn su3_class<S: Scalar>(t: &TorsionSU3<S>, tol: f64) -> SU3Class<S> {
    let label = ClassLabel::su3(t.mask(tol));
    let coupled_c = label
        .names
        .iter()
        .any(|n| n == "coupled")
        .then(|| t.sigma0.scale_ratio(-3, 2));
    SU3Class { label, coupled_c }
}

/// Scalar curvature of the induced metric from the torsion forms and the
/// codifferentials `δπ₁`, `δν₁`.
pub fn su3_scalar_with<S: Scalar>(t: &TorsionSU3<S>, delta_pi1: &S, delta_nu1: &S) -> S {
    t.pi0.square().scale_ratio(15, 2)
        + t.sigma0.square().scale_ratio(15, 2)
        + delta_pi1.scale_ratio(2, 1)
        + delta_nu1.scale_ratio(2, 1)
        - t.nu1.norm2()
        - t.sigma2.norm2().scale_ratio(1, 2)
        - t.pi2.norm2().scale_ratio(1, 2)
        - t.nu3.norm2().scale_ratio(1, 2)
        + t.pi1.inner(&t.nu1).scale_ratio(4, 1)
}

pub fn su3_scalar(t: &TorsionSU3<ExactScalar>, frame: &FrameAlgebra) -> ExactScalar {
    let dp = frame.codifferential(&t.pi1).scalar_part();
    let dn = frame.codifferential(&t.nu1).scalar_part();
    su3_scalar_with(t, &dp, &dn)
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = ExactScalar;

    #[test]
    fn compatibility() {
        let s = SU3Structure::<E>::canonical();
        assert!(s.omega.wedge(&s.psi_plus).is_zero());
        assert!(s.omega.wedge(&s.psi_minus).is_zero());
        let w3 = s.omega.wedge(&s.omega).wedge(&s.omega);
        assert_eq!(s.psi_plus.wedge(&s.psi_minus), w3.scale_ratio(2, 3));
    }

    #[test]
    fn j_maps_psi_plus_to_psi_minus() {
        assert_eq!(j(&psi_plus::<E>()), psi_minus());
        assert_eq!(j(&omega::<E>()), omega());
    }

    #[test]
    fn flat_torus_has_no_torsion() {
        let f = FrameAlgebra::abelian(6);
        let t = su3_torsion(&SU3Structure::canonical(), &f).unwrap();
        assert_eq!(t, TorsionSU3::zero());
        assert_eq!(su3_class(&t, 0.0).label.mask, 0);
    }

    #[test]
    fn inconsistent_differentials_are_rejected() {
        let pp = psi_plus::<f64>();
        let e1 = Form::<f64>::basis(6, &[1]);
        // π₁ ∧ ψ₊ in dψ₊ without the matching term in dψ₋.
        let r = extract(&Form::zero(6, 3), &e1.wedge(&pp), &Form::zero(6, 4), 1e-9);
        assert!(matches!(r, Err(Error::Inconsistent(_))));
    }
}
