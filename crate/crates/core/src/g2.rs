//! G₂-structures on seven-dimensional coframes: torsion extraction,
//! Fernández–Gray classes, scalar curvature and the induced metric.

use crate::class::{g2_bits, ClassLabel};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::su3::{form_negligible, negligible};

pub fn phi<S: Scalar>() -> Form<S> {
    Form::from_digits(
        7,
        &[
            (1, "127"),
            (1, "347"),
            (1, "567"),
            (1, "135"),
            (-1, "146"),
            (-1, "236"),
            (-1, "245"),
        ],
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2Structure<S: Scalar> {
    pub phi: Form<S>,
    pub star_phi: Form<S>,
}

impl<S: Scalar> G2Structure<S> {
    /// A G₂ 3-form on an orthonormal coframe it induces (the caller
    /// guarantees that; see [`metric`]).
    pub fn new(phi: Form<S>) -> Self {
        assert_eq!((phi.dim(), phi.degree()), (7, 3));
        let star_phi = phi.hodge();
        G2Structure { phi, star_phi }
    }

    pub fn canonical() -> Self {
        Self::new(phi())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionG2<S: Scalar> {
    pub tau0: S,
    pub tau1: Form<S>,
    pub tau2: Form<S>,
    pub tau3: Form<S>,
}

impl<S: Scalar> TorsionG2<S> {
    pub fn zero() -> Self {
        TorsionG2 {
            tau0: S::zero(),
            tau1: Form::zero(7, 1),
            tau2: Form::zero(7, 2),
            tau3: Form::zero(7, 3),
        }
    }

    /// `(dφ, d*φ)` rebuilt from the torsion forms.
    pub fn differentials(&self, g: &G2Structure<S>) -> (Form<S>, Form<S>) {
        let dphi = g.star_phi.scale(&self.tau0)
            + self.tau1.wedge(&g.phi).scale_ratio(3, 1)
            + self.tau3.hodge();
        let dstar = self.tau1.wedge(&g.star_phi).scale_ratio(4, 1) + self.tau2.wedge(&g.phi);
        (dphi, dstar)
    }

    /// Norms `(|τ₀|, |τ₁|, |τ₂|, |τ₃|)` in floating point.
    pub fn norms(&self) -> [f64; 4] {
        [
            self.tau0.value().abs(),
            self.tau1.norm2().value().max(0.0).sqrt(),
            self.tau2.norm2().value().max(0.0).sqrt(),
            self.tau3.norm2().value().max(0.0).sqrt(),
        ]
    }

    /// Nonzero pattern as X-bits: τ₀ ↦ X1, τ₂ ↦ X2, τ₃ ↦ X3, τ₁ ↦ X4.
    /// A component vanishes when its norm is `≤ threshold` (exactly zero
    /// for a zero threshold).
    pub fn mask(&self, threshold: f64) -> u8 {
        let [n0, n1, n2, n3] = self.norms();
        let zero = [
            self.tau0.is_zero(),
            self.tau1.is_zero(),
            self.tau2.is_zero(),
            self.tau3.is_zero(),
        ];
        let mut m = 0;
        if !(zero[0] || n0 <= threshold) {
            m |= g2_bits::X1;
        }
        if !(zero[2] || n2 <= threshold) {
            m |= g2_bits::X2;
        }
        if !(zero[3] || n3 <= threshold) {
            m |= g2_bits::X3;
        }
        if !(zero[1] || n1 <= threshold) {
            m |= g2_bits::X4;
        }
        m
    }

    pub fn check_membership(&self, g: &G2Structure<S>, tol: f64) -> Result<()> {
        if !form_negligible(&self.tau2.wedge(&g.star_phi), tol) {
            return Err(Error::Membership("tau2 is not in Ω²₁₄".into()));
        }
        if !form_negligible(&self.tau3.wedge(&g.phi), tol)
            || !form_negligible(&self.tau3.wedge(&g.star_phi), tol)
        {
            return Err(Error::Membership("tau3 is not in Ω³₂₇".into()));
        }
        Ok(())
    }

    pub fn value(&self) -> TorsionG2<f64> {
        TorsionG2 {
            tau0: self.tau0.value(),
            tau1: self.tau1.to_f64(),
            tau2: self.tau2.to_f64(),
            tau3: self.tau3.to_f64(),
        }
    }
}

/// Torsion forms from caller-supplied `dφ` and `d*φ`.
///
/// `tol` is the absolute tolerance of the membership checks (`0` = exact).
pub fn g2_torsion<S: Scalar>(
    g: &G2Structure<S>,
    dphi: &Form<S>,
    dstarphi: &Form<S>,
    tol: f64,
) -> Result<TorsionG2<S>> {
    if dphi.dim() != 7 || dstarphi.dim() != 7 {
        return Err(Error::Dimension(dphi.dim(), 7));
    }
    if dphi.degree() != 4 || dstarphi.degree() != 5 {
        return Err(Error::Degree(dphi.degree(), 4));
    }
    let phi = &g.phi;
    let tau0 = dphi.wedge(phi).hodge().scalar_part().scale_ratio(1, 7);
    let star_dphi = dphi.hodge();
    let tau1 = star_dphi.wedge(phi).hodge().scale_ratio(-1, 12);
    let tau2 = -dstarphi.hodge() + tau1.wedge(&g.star_phi).hodge().scale_ratio(4, 1);
    let tau3 = star_dphi - phi.scale(&tau0) - tau1.wedge(phi).hodge().scale_ratio(3, 1);
    let t = TorsionG2 {
        tau0,
        tau1,
        tau2,
        tau3,
    };
    t.check_membership(g, tol)?;
    Ok(t)
}

pub fn g2_class<S: Scalar>(t: &TorsionG2<S>, tol: f64) -> ClassLabel {
    let scale = t.norms().into_iter().fold(1.0, f64::max);
    ClassLabel::g2(t.mask(tol * scale))
}

pub fn g2_scalar<S: Scalar>(t: &TorsionG2<S>, delta_tau1: &S) -> S {
    delta_tau1.scale_ratio(12, 1) + t.tau0.square().scale_ratio(21, 8)
        + t.tau1.norm2().scale_ratio(30, 1)
        - t.tau2.norm2().scale_ratio(1, 2)
        - t.tau3.norm2().scale_ratio(1, 2)
}

/// `g(e_i, e_j) = (1/6) Σ_{k,l} φ_{ikl} φ_{jkl}` in the coframe `φ` is
/// written in.
pub fn metric(phi: &Form<f64>) -> Matrix<f64> {
    let n = phi.dim();
    let contractions: Vec<Form<f64>> = (1..=n).map(|i| phi.interior(i)).collect();
    (0..n)
        .map(|i| {
            (0..n)
                // the ordered double sum counts each k<l pair twice
                .map(|j| contractions[i].inner(&contractions[j]) / 3.0)
                .collect()
        })
        .collect()
}

/// Bryant's metric, valid for any nondegenerate 3-form (not only in a
/// coframe it makes orthonormal): `ι_iφ ∧ ι_jφ ∧ φ = 6 B_ij vol`,
/// `g = det(B)^{−1/9} B`.
pub fn bryant_metric(phi: &Form<f64>) -> Result<Matrix<f64>> {
    assert_eq!((phi.dim(), phi.degree()), (7, 3));
    let contractions: Vec<Form<f64>> = (1..=7).map(|i| phi.interior(i)).collect();
    let b: Matrix<f64> = (0..7)
        .map(|i| {
            (0..7)
                .map(|j| contractions[i].wedge(&contractions[j]).wedge(phi).top() / 6.0)
                .collect()
        })
        .collect();
    let det = determinant(&b);
    if !negligible(&det, 0.0) && det > 0.0 {
        let s = det.powf(-1.0 / 9.0);
        Ok(b.iter().map(|r| r.iter().map(|x| x * s).collect()).collect())
    } else {
        Err(Error::Singular)
    }
}

fn determinant(m: &Matrix<f64>) -> f64 {
    let n = m.len();
    let mut a = m.clone();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    #[test]
    fn star_phi_monomials() {
        let s = phi::<ExactScalar>().hodge();
        let expected = Form::from_digits(
            7,
            &[
                (1, "3456"),
                (1, "1256"),
                (1, "1234"),
                (1, "1367"),
                (1, "1457"),
                (1, "2357"),
                (-1, "2467"),
            ],
        );
        assert_eq!(s, expected);
        assert_eq!(phi::<ExactScalar>().norm2(), ExactScalar::from_i64(7));
    }

    #[test]
    fn canonical_metric_is_identity() {
        let g = metric(&phi());
        let b = bryant_metric(&phi()).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert_eq!(g[i][j], d);
                assert!((b[i][j] - d).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn nearly_parallel_round_trip() {
        let g = G2Structure::<ExactScalar>::canonical();
        let t = TorsionG2 {
            tau0: ExactScalar::from_i64(4),
            ..TorsionG2::zero()
        };
        let (dphi, dstar) = t.differentials(&g);
        let back = g2_torsion(&g, &dphi, &dstar, 0.0).unwrap();
        assert_eq!(back, t);
        assert_eq!(g2_class(&back, 0.0).to_string(), "X1");
        assert_eq!(g2_scalar(&back, &ExactScalar::zero()), ExactScalar::from_i64(42));
    }
}
