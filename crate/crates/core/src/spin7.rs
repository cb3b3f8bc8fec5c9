//! Spin(7)-structures on eight-dimensional coframes.

use crate::class::{spin7_bits, ClassLabel};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::g2;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::su3::form_negligible;

/// `φ ∧ e⁸ + *₇φ` with `φ` the standard G₂ form on `e¹..e⁷`.
pub fn phi4<S: Scalar>() -> Form<S> {
    let phi = g2::phi::<S>();
    let star = phi.hodge();
    phi.extend(8).wedge(&Form::basis(8, &[8])) + star.extend(8)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spin7Structure<S: Scalar> {
    pub phi4: Form<S>,
}

impl<S: Scalar> Spin7Structure<S> {
    pub fn new(phi4: Form<S>) -> Self {
        assert_eq!((phi4.dim(), phi4.degree()), (8, 4));
        Spin7Structure { phi4 }
    }

    pub fn canonical() -> Self {
        Self::new(phi4())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionSpin7<S: Scalar> {
    pub lambda1: Form<S>,
    pub lambda5: Form<S>,
}

impl<S: Scalar> TorsionSpin7<S> {
    pub fn dphi(&self, s: &Spin7Structure<S>) -> Form<S> {
        self.lambda1.wedge(&s.phi4) + self.lambda5.clone()
    }

    pub fn norms(&self) -> [f64; 2] {
        [
            self.lambda1.norm2().value().max(0.0).sqrt(),
            self.lambda5.norm2().value().max(0.0).sqrt(),
        ]
    }

    pub fn mask(&self, threshold: f64) -> u8 {
        let [n1, n5] = self.norms();
        let mut m = 0;
        if !(self.lambda1.is_zero() || n1 <= threshold) {
            m |= spin7_bits::Y1;
        }
        if !(self.lambda5.is_zero() || n5 <= threshold) {
            m |= spin7_bits::Y2;
        }
        m
    }

    pub fn value(&self) -> TorsionSpin7<f64> {
        TorsionSpin7 {
            lambda1: self.lambda1.to_f64(),
            lambda5: self.lambda5.to_f64(),
        }
    }
}

/// `λ₁ = −(1/7)*((*dϕ)∧ϕ)`, `λ₅ = dϕ − λ₁∧ϕ`.
pub fn spin7_torsion<S: Scalar>(
    s: &Spin7Structure<S>,
    dphi4: &Form<S>,
    tol: f64,
) -> Result<TorsionSpin7<S>> {
    if dphi4.dim() != 8 {
        return Err(Error::Dimension(dphi4.dim(), 8));
    }
    if dphi4.degree() != 5 {
        return Err(Error::Degree(dphi4.degree(), 5));
    }
    let lambda1 = dphi4.hodge().wedge(&s.phi4).hodge().scale_ratio(-1, 7);
    let lambda5 = dphi4.clone() - lambda1.wedge(&s.phi4);
    if !form_negligible(&s.phi4.wedge(&lambda5.hodge()), tol) {
        return Err(Error::Membership("lambda5 is not in Ω⁵₄₈".into()));
    }
    Ok(TorsionSpin7 { lambda1, lambda5 })
}

pub fn spin7_class<S: Scalar>(t: &TorsionSpin7<S>, tol: f64) -> ClassLabel {
    let scale = t.norms().into_iter().fold(1.0, f64::max);
    ClassLabel::spin7(t.mask(tol * scale))
}

pub fn spin7_scalar<S: Scalar>(t: &TorsionSpin7<S>, delta_lambda1: &S) -> S {
    t.lambda1.norm2().scale_ratio(21, 8) - t.lambda5.norm2().scale_ratio(1, 2)
        + delta_lambda1.scale_ratio(7, 2)
}

/// `(1/c) Σ_{k,l,m} ϕ_{iklm} ϕ_{jklm}` for a chosen normalisation `c`.
/// The ordered triple sum is six times the sum over `k<l<m`.
pub fn metric_with_normalisation(phi4: &Form<f64>, c: f64) -> Matrix<f64> {
    let contractions: Vec<Form<f64>> = (1..=8).map(|i| phi4.interior(i)).collect();
    (0..8)
        .map(|i| {
            (0..8)
                .map(|j| 6.0 * contractions[i].inner(&contractions[j]) / c)
                .collect()
        })
        .collect()
}

/// The induced metric. Each `e_i` lies in seven of the fourteen monomials of
/// the standard form, so the normalising constant is 42.
pub fn metric(phi4: &Form<f64>) -> Matrix<f64> {
    metric_with_normalisation(phi4, 42.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    #[test]
    fn standard_form() {
        let p = phi4::<ExactScalar>();
        let expected = Form::from_digits(
            8,
            &[
                (1, "1278"),
                (1, "3478"),
                (1, "5678"),
                (1, "1358"),
                (-1, "1468"),
                (-1, "2368"),
                (-1, "2458"),
                (1, "1234"),
                (1, "1256"),
                (1, "3456"),
                (1, "1367"),
                (1, "1457"),
                (1, "2357"),
                (-1, "2467"),
            ],
        );
        assert_eq!(p, expected);
        assert_eq!(p.hodge(), p);
        assert_eq!(p.norm2(), ExactScalar::from_i64(14));
    }

    #[test]
    fn metric_normalisation() {
        let p = phi4::<f64>();
        let g = metric(&p);
        let g24 = metric_with_normalisation(&p, 24.0);
        for i in 0..8 {
            for j in 0..8 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((g[i][j] - d).abs() < 1e-15);
                assert!((g24[i][j] - 1.75 * d).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn conformal_parallel_extraction() {
        let s = Spin7Structure::<ExactScalar>::canonical();
        let l1 = Form::term(8, ExactScalar::from_i64(4), &[8]);
        let t = spin7_torsion(&s, &l1.wedge(&s.phi4), 0.0).unwrap();
        assert_eq!(t.lambda1, l1);
        assert!(t.lambda5.is_zero());
        assert_eq!(spin7_class(&t, 0.0).to_string(), "Y1");
    }
}
