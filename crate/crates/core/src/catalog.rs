//! Built-in fibers: homogeneous frames with SU(3)- or G₂-structures, and
//! fibers known only through their (constant) torsion.

use crate::class::{ClassLabel, Group};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::frames::FrameAlgebra;
use crate::g2::{self, G2Structure, TorsionG2};
use crate::linalg::Matrix;
use crate::scalar::{ExactScalar, Radical, Scalar};
use crate::su3::{self, SU3Structure, TorsionSU3};

type E = ExactScalar;

#[derive(Clone, Debug)]
pub struct Su3Fiber {
    pub torsion: TorsionSU3<E>,
    pub delta_pi1: E,
    pub delta_nu1: E,
    /// Present for homogeneous fibers; the structure is the standard one in
    /// this coframe.
    pub frame: Option<FrameAlgebra>,
}

#[derive(Clone, Debug)]
pub struct G2Fiber {
    pub torsion: TorsionG2<f64>,
    pub delta_tau1: f64,
    pub frame: Option<FrameAlgebra>,
}

#[derive(Clone, Debug)]
pub enum Fiber {
    Su3(Su3Fiber),
    G2(G2Fiber),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub fiber: Fiber,
    pub expected_class: ClassLabel,
    /// Einstein constant of the fiber metric, when it is Einstein.
    pub mu: Option<f64>,
    pub note: &'static str,
}

impl CatalogEntry {
    pub fn su3(&self) -> Option<&Su3Fiber> {
        match &self.fiber {
            Fiber::Su3(f) => Some(f),
            Fiber::G2(_) => None,
        }
    }

    pub fn g2(&self) -> Option<&G2Fiber> {
        match &self.fiber {
            Fiber::G2(f) => Some(f),
            Fiber::Su3(_) => None,
        }
    }

    pub fn frame(&self) -> Option<&FrameAlgebra> {
        match &self.fiber {
            Fiber::Su3(f) => f.frame.as_ref(),
            Fiber::G2(f) => f.frame.as_ref(),
        }
    }
}

pub const FIBERS: &[&str] = &[
    "s3xs3",
    "solv6",
    "abelian6",
    "twistor_sigma2",
    "nk_abstract",
    "cy_abstract",
    "np_g2_abstract",
    "np_g2_abstract:-4",
    "parallel_g2_abstract",
    "lcp_g2_derived",
    "lcp_g2_derived:sin",
    "lcp_g2_derived:t",
    "lcp_g2_derived:sinh",
    "s3xs3_r",
    "solv6_r",
    "abelian7",
];

pub const FRAMES: &[&str] = &["su2_raw", "s3xs3", "solv6", "abelian6", "s3_padded", "s3xs3_r", "solv6_r", "abelian7"];

fn q(n: i64, d: i64) -> E {
    E::rational(n, d)
}

fn surd(n: i64, d: i64, r: Radical) -> E {
    E::term(n, d, r)
}

/// `su(2) ⊕ su(2)` in the coframe `(e¹, e², e³, f¹, f², f³)`.
pub fn su2_pair() -> FrameAlgebra {
    let one = E::one();
    FrameAlgebra::from_table(
        6,
        &[
            vec![(one.clone(), "23")],
            vec![(-one.clone(), "13")],
            vec![(one.clone(), "12")],
            vec![(one.clone(), "56")],
            vec![(-one.clone(), "46")],
            vec![(one, "45")],
        ],
    )
    .expect("su(2) ⊕ su(2)")
}

/// Rows of `h = B·(e, f)` for the adapted coframe of S³×S³.
pub fn s3xs3_basis() -> Matrix<E> {
    let a = surd(1, 10, Radical::Five);
    let b = surd(1, 10, Radical::Ten);
    let z = E::zero();
    vec![
        vec![a.clone(), z.clone(), z.clone(), a.clone(), z.clone(), z.clone()],
        vec![-a.clone(), z.clone(), z.clone(), a, z.clone(), z.clone()],
        vec![z.clone(), b.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), b.clone(), z.clone()],
        vec![z.clone(), z.clone(), b.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z, b],
    ]
}

pub fn s3xs3_frame() -> FrameAlgebra {
    su2_pair()
        .change_basis(&s3xs3_basis())
        .expect("basis change is invertible")
}

pub fn solv6_frame() -> FrameAlgebra {
    let a = surd(1, 4, Radical::Ten);
    let b = surd(1, 2, Radical::Ten);
    FrameAlgebra::from_table(
        6,
        &[
            vec![(a.clone(), "16")],
            vec![(a.clone(), "26")],
            vec![(a.clone(), "36")],
            vec![(a, "46")],
            vec![(b.clone(), "12"), (b.clone(), "34"), (b, "56")],
            vec![],
        ],
    )
    .expect("solvable frame")
}

/// The round S³ (`de¹ = e²³`, …) with three closed directions appended.
pub fn s3_padded() -> FrameAlgebra {
    let one = E::one();
    FrameAlgebra::from_table(
        3,
        &[vec![(one.clone(), "23")], vec![(-one.clone(), "13")], vec![(one, "12")]],
    )
    .expect("su(2)")
    .extend_abelian(3)
}

pub fn load_frame(name: &str) -> Result<FrameAlgebra> {
    Ok(match name {
        "su2_raw" => su2_pair(),
        "s3xs3" => s3xs3_frame(),
        "solv6" => solv6_frame(),
        "abelian6" => FrameAlgebra::abelian(6),
        "s3_padded" => s3_padded(),
        "s3xs3_r" => s3xs3_frame().extend_abelian(1),
        "solv6_r" => solv6_frame().extend_abelian(1),
        "abelian7" => FrameAlgebra::abelian(7),
        _ => return Err(Error::UnknownEntry(name.into())),
    })
}

/// ν₃ of S³×S³ as printed with the example.
pub fn s3xs3_nu3() -> Form<E> {
    let h = surd(1, 2, Radical::Five);
    let r = E::sqrt5();
    let t = |c: E, idx: &[usize]| Form::term(6, c, idx);
    t(-h.clone(), &[1, 3, 5])
        + t(h.clone(), &[1, 4, 6])
        + t(-h.clone(), &[2, 3, 6])
        + t(-h, &[2, 4, 5])
        + t(r.clone(), &[2, 3, 5])
        + t(r, &[2, 4, 6])
}

/// The torsion printed for each frame-backed SU(3) fiber.
pub fn expected_su3_torsion(name: &str) -> Option<TorsionSU3<E>> {
    match name {
        "s3xs3" => Some(TorsionSU3 {
            sigma0: -E::sqrt5(),
            nu3: s3xs3_nu3(),
            ..TorsionSU3::zero()
        }),
        "solv6" => Some(TorsionSU3 {
            pi1: Form::term(6, -E::sqrt10(), &[6]),
            ..TorsionSU3::zero()
        }),
        "abelian6" => Some(TorsionSU3::zero()),
        _ => None,
    }
}

/// Fiber with the standard SU(3)-structure in the coframe of `frame`.
pub fn su3_from_frame(frame: FrameAlgebra) -> Result<Su3Fiber> {
    let torsion = su3::su3_torsion(&SU3Structure::canonical(), &frame)?;
    let delta_pi1 = frame.codifferential(&torsion.pi1).scalar_part();
    let delta_nu1 = frame.codifferential(&torsion.nu1).scalar_part();
    Ok(Su3Fiber {
        torsion,
        delta_pi1,
        delta_nu1,
        frame: Some(frame),
    })
}

fn su3_data(torsion: TorsionSU3<E>) -> Result<Su3Fiber> {
    torsion.check_membership(0.0)?;
    Ok(Su3Fiber {
        torsion,
        delta_pi1: E::zero(),
        delta_nu1: E::zero(),
        frame: None,
    })
}

/// Fiber with the standard G₂-structure in the coframe of `frame`.
pub fn g2_from_frame(frame: FrameAlgebra) -> Result<G2Fiber> {
    let g = G2Structure::<E>::canonical();
    let t = g2::g2_torsion(&g, &frame.d(&g.phi), &frame.d(&g.star_phi), 0.0)?;
    let delta_tau1 = if t.tau1.is_zero() {
        0.0
    } else {
        frame.codifferential(&t.tau1).scalar_part().to_f64()
    };
    Ok(G2Fiber {
        torsion: t.value(),
        delta_tau1,
        frame: Some(frame),
    })
}

fn g2_data(tau0: f64, tau1: Form<f64>, delta_tau1: f64) -> G2Fiber {
    G2Fiber {
        torsion: TorsionG2 {
            tau0,
            tau1,
            ..TorsionG2::zero()
        },
        delta_tau1,
        frame: None,
    }
}

/// Locally conformal parallel G₂ fiber obtained as the warped product of a
/// nearly Kähler manifold with `(α, β) = (−1, 0)` and warping `w`, read off at
/// the cone parameter `s = 1`: `τ₁ = g ds`, `g = (1 + w′)/w`.
fn lcp_from_nearly_kaehler(w: fn(f64) -> (f64, f64, f64)) -> G2Fiber {
    let (f, f1, f2) = w(1.0);
    let g = (1.0 + f1) / f;
    let g1 = f2 / f - (1.0 + f1) * f1 / (f * f);
    let delta = -(g1 + 6.0 * g * f1 / f);
    g2_data(0.0, Form::term(7, g, &[7]), delta)
}

pub fn load_fiber(name: &str) -> Result<CatalogEntry> {
    let su3_label = |s: &str| ClassLabel::parse(Group::SU3, s).expect("label");
    let g2_label = |s: &str| ClassLabel::parse(Group::G2, s).expect("label");
    let (fiber, expected_class, mu, note) = match name {
        "s3xs3" => (
            Fiber::Su3(su3_from_frame(s3xs3_frame())?),
            su3_label("W1-⊕W3"),
            Some(5.0),
            "su(2)⊕su(2) in the rescaled adapted coframe h = B(e, f)",
        ),
        "solv6" => (
            Fiber::Su3(su3_from_frame(solv6_frame())?),
            su3_label("W5"),
            Some(-5.0),
            "rank-one Einstein solvable extension",
        ),
        "abelian6" => (
            Fiber::Su3(su3_from_frame(FrameAlgebra::abelian(6))?),
            su3_label("{0}"),
            Some(0.0),
            "flat torus",
        ),
        "twistor_sigma2" => {
            let s = surd(1, 3, Radical::Ten);
            let sigma2 = Form::from_digits(6, &[(1, "12"), (1, "34"), (-2, "56")]).scale(&-s);
            let t = TorsionSU3 {
                sigma0: surd(2, 3, Radical::Ten),
                sigma2,
                ..TorsionSU3::zero()
            };
            (
                Fiber::Su3(su3_data(t)?),
                su3_label("W1-⊕W2-"),
                Some(5.0),
                "coupled twistor structure at σ = 2, rescaled by √(8/5) to an orthonormal coframe",
            )
        }
        "nk_abstract" => (
            Fiber::Su3(su3_data(TorsionSU3 {
                sigma0: q(-2, 1),
                ..TorsionSU3::zero()
            })?),
            su3_label("W1-"),
            Some(5.0),
            "nearly Kähler, σ₀ = −2",
        ),
        "cy_abstract" => (
            Fiber::Su3(su3_data(TorsionSU3::zero())?),
            su3_label("{0}"),
            Some(0.0),
            "Calabi–Yau",
        ),
        "np_g2_abstract" | "np_g2_abstract:4" => (
            Fiber::G2(g2_data(4.0, Form::zero(7, 1), 0.0)),
            g2_label("X1"),
            Some(6.0),
            "nearly parallel, τ₀ = 4",
        ),
        "np_g2_abstract:-4" => (
            Fiber::G2(g2_data(-4.0, Form::zero(7, 1), 0.0)),
            g2_label("X1"),
            Some(6.0),
            "nearly parallel, τ₀ = −4",
        ),
        "parallel_g2_abstract" => (
            Fiber::G2(g2_data(0.0, Form::zero(7, 1), 0.0)),
            g2_label("P"),
            Some(0.0),
            "torsion-free G₂",
        ),
        "lcp_g2_derived" => (
            // exponential cone over a Calabi–Yau fiber: τ₁ = ds, δτ₁ = −6
            Fiber::G2(g2_data(0.0, Form::basis(7, &[7]), -6.0)),
            g2_label("X4"),
            Some(-6.0),
            "exponential cone over Calabi–Yau",
        ),
        "lcp_g2_derived:sin" => (
            Fiber::G2(lcp_from_nearly_kaehler(|s| (s.sin(), s.cos(), -s.sin()))),
            g2_label("X4"),
            Some(6.0),
            "sine warped product over nearly Kähler, (α, β) = (−1, 0), at s = 1",
        ),
        "lcp_g2_derived:t" => (
            Fiber::G2(lcp_from_nearly_kaehler(|s| (s, 1.0, 0.0))),
            g2_label("X4"),
            Some(0.0),
            "cone over nearly Kähler, (α, β) = (−1, 0), at s = 1",
        ),
        "lcp_g2_derived:sinh" => (
            Fiber::G2(lcp_from_nearly_kaehler(|s| (s.sinh(), s.cosh(), s.sinh()))),
            g2_label("X4"),
            Some(-6.0),
            "sinh warped product over nearly Kähler, (α, β) = (−1, 0), at s = 1",
        ),
        "s3xs3_r" | "solv6_r" | "abelian7" => {
            let fiber = g2_from_frame(load_frame(name)?)?;
            let label = g2::g2_class(&fiber.torsion, 1e-12);
            (Fiber::G2(fiber), label, None, "product of an SU(3) frame with a line")
        }
        _ => return Err(Error::UnknownEntry(name.into())),
    };
    Ok(CatalogEntry {
        name: name.into(),
        fiber,
        expected_class,
        mu,
        note,
    })
}
