//! Randomized checks of the form identities the torsion formulas rest on.
//!
//! Every identity is phrased as "this form vanishes" and evaluated twice per
//! sample: with exact surd coefficients (must be exactly zero) and with
//! `f64` coefficients (must be below `1e-12`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exterior::Form;
use crate::scalar::{ExactScalar, Radical, Scalar};
use crate::{g2, spin7, su3};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const NUMERIC_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub samples: usize,
    /// Samples whose exact residual is not identically zero.
    pub exact_failures: usize,
    /// Relative to the size of the two sides.
    pub max_numeric_residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

/// One random input: a form (degree chosen by the identity) and a warping
/// factor, as small integers so both rings see the same data.
#[derive(Clone, Debug)]
struct Sample {
    coeffs: Vec<(i64, i64, bool)>,
    degree: usize,
    f: (i64, i64),
}

impl Sample {
    fn draw(rng: &mut ChaCha8Rng, dim: usize, degree: usize) -> Self {
        let len = crate::exterior::masks(dim, degree).len();
        Sample {
            coeffs: (0..len)
                .map(|_| (rng.gen_range(-9..=9), rng.gen_range(1..=6), rng.gen_bool(0.25)))
                .collect(),
            degree,
            f: (rng.gen_range(1..=9), rng.gen_range(1..=4)),
        }
    }

    fn form<S: Scalar>(&self, dim: usize) -> Form<S> {
        let sqrt5 = ExactScalar::term(1, 1, Radical::Five);
        Form::from_coeffs(
            dim,
            self.degree,
            self.coeffs
                .iter()
                .map(|&(n, d, surd)| {
                    let q = ExactScalar::rational(n, d);
                    S::from_exact(&if surd { q * sqrt5.clone() } else { q })
                })
                .collect(),
        )
    }

    fn factor<S: Scalar>(&self) -> S {
        S::from_ratio(self.f.0, self.f.1)
    }
}

fn powi<S: Scalar>(x: &S, k: i32) -> S {
    let mut r = S::one();
    for _ in 0..k.unsigned_abs() {
        r = r * x.clone();
    }
    if k < 0 {
        S::one() / r
    } else {
        r
    }
}

/// Hodge star of `f² g_fiber + dt²` on forms written in `{eⁱ, dt}`, with
/// `dt` the last coframe vector.
fn warped_hodge<S: Scalar>(a: &Form<S>, f: &S) -> Form<S> {
    let n = a.dim();
    let fibre = |m: u16| (m & !(1 << (n - 1))).count_ones() as i32;
    let ortho = a.map_masked(|m, c| c.clone() * powi(f, -fibre(m)));
    ortho.hodge().map_masked(|m, c| c.clone() * powi(f, fibre(m)))
}

fn dt<S: Scalar>(n: usize) -> Form<S> {
    Form::basis(n, &[n])
}

/// Pairs `(lhs, rhs)` that must agree.
type Check<S> = fn(&Sample) -> Vec<(Form<S>, Form<S>)>;

struct Identity {
    name: &'static str,
    statement: &'static str,
    dim: usize,
    /// Input degrees, cycled over the samples.
    degrees: &'static [usize],
    exact: Check<ExactScalar>,
    numeric: Check<f64>,
}

fn lemma11<S: Scalar>(k: usize) -> impl Fn(&Sample) -> Vec<(Form<S>, Form<S>)> {
    move |s| {
        let tau = s.form::<S>(6);
        let (w, pp, pm) = (su3::omega::<S>(), su3::psi_plus::<S>(), su3::psi_minus::<S>());
        let two_star = tau.hodge().scale_ratio(2, 1);
        let tw2 = tau.wedge(&w).wedge(&w);
        let r = match k {
            0 => (tau.wedge(&w).hodge().wedge(&w), two_star),
            1 => (tau.wedge(&pp).hodge().wedge(&pp), two_star),
            2 => (tau.wedge(&pm).hodge().wedge(&pm), two_star),
            3 => (tau.wedge(&pp).hodge().wedge(&pm), -tw2),
            _ => (tau.wedge(&pm).hodge().wedge(&pp), tw2),
        };
        vec![r]
    }
}

fn eq4<S: Scalar>(k: usize) -> impl Fn(&Sample) -> Vec<(Form<S>, Form<S>)> {
    move |s| {
        let kappa = s.form::<S>(7);
        let phi = g2::phi::<S>();
        let r = if k == 0 {
            (kappa.wedge(&phi).hodge().wedge(&phi).hodge(), kappa.scale_ratio(-4, 1))
        } else {
            let psi = phi.hodge();
            (kappa.wedge(&psi).hodge().wedge(&psi).hodge(), kappa.scale_ratio(3, 1))
        };
        vec![r]
    }
}

fn eq18<S: Scalar>(s: &Sample) -> Vec<(Form<S>, Form<S>)> {
    let kappa = s.form::<S>(8);
    let phi = spin7::phi4::<S>();
    vec![(kappa.wedge(&phi).hodge().wedge(&phi).hodge(), kappa.scale_ratio(-7, 1))]
}

/// Fiber of dimension `n`, warped product of dimension `n + 1`:
/// `*γ = f^{n−2q}(*γ)∧dt`, `*(γ∧dt) = ±f^{n−2q} *γ` with sign
/// `(−1)^{q + shift}`.
fn warped_star<S: Scalar>(s: &Sample, n: usize, shift: usize) -> Vec<(Form<S>, Form<S>)> {
    let q = s.degree;
    let gamma = s.form::<S>(n);
    let f = s.factor::<S>();
    let c = powi(&f, n as i32 - 2 * q as i32);
    let star = gamma.hodge().extend(n + 1).scale(&c);
    let sign = if (q + shift) % 2 == 0 { c.clone() } else { -c.clone() };
    let g = gamma.extend(n + 1);
    vec![
        (warped_hodge(&g, &f), star.wedge(&dt(n + 1))),
        (warped_hodge(&g.wedge(&dt(n + 1)), &f), gamma.hodge().extend(n + 1).scale(&sign)),
    ]
}

fn lemma32<S: Scalar>(s: &Sample) -> Vec<(Form<S>, Form<S>)> {
    warped_star(s, 6, 0)
}

fn lemma62<S: Scalar>(s: &Sample) -> Vec<(Form<S>, Form<S>)> {
    warped_star(s, 7, 1)
}

macro_rules! both {
    ($f:expr) => {
        (
            (|s: &Sample| -> Vec<(Form<ExactScalar>, Form<ExactScalar>)> { $f(s) }) as Check<ExactScalar>,
            (|s: &Sample| -> Vec<(Form<f64>, Form<f64>)> { $f(s) }) as Check<f64>,
        )
    };
}

fn catalogue() -> Vec<Identity> {
    const ONE: &[usize] = &[1];
    let mut out = Vec::new();
    let lemma = [
        "*(τ∧ω)∧ω = 2*τ",
        "*(τ∧ψ₊)∧ψ₊ = 2*τ",
        "*(τ∧ψ₋)∧ψ₋ = 2*τ",
        "*(τ∧ψ₊)∧ψ₋ = −τ∧ω²",
        "*(τ∧ψ₋)∧ψ₊ = τ∧ω²",
    ];
    let exact: [Check<ExactScalar>; 5] = [
        |s| lemma11(0)(s),
        |s| lemma11(1)(s),
        |s| lemma11(2)(s),
        |s| lemma11(3)(s),
        |s| lemma11(4)(s),
    ];
    let numeric: [Check<f64>; 5] = [
        |s| lemma11(0)(s),
        |s| lemma11(1)(s),
        |s| lemma11(2)(s),
        |s| lemma11(3)(s),
        |s| lemma11(4)(s),
    ];
    for k in 0..5 {
        out.push(Identity {
            name: ["su3-omega", "su3-psi-plus", "su3-psi-minus", "su3-mixed-plus", "su3-mixed-minus"][k],
            statement: lemma[k],
            dim: 6,
            degrees: ONE,
            exact: exact[k],
            numeric: numeric[k],
        });
    }
    out.push(Identity {
        name: "g2-phi",
        statement: "*(*(κ∧φ)∧φ) = −4κ",
        dim: 7,
        degrees: ONE,
        exact: |s| eq4(0)(s),
        numeric: |s| eq4(0)(s),
    });
    out.push(Identity {
        name: "g2-star-phi",
        statement: "*(*(κ∧*φ)∧*φ) = 3κ",
        dim: 7,
        degrees: ONE,
        exact: |s| eq4(1)(s),
        numeric: |s| eq4(1)(s),
    });
    let (e, n) = both!(eq18);
    out.push(Identity {
        name: "spin7-phi",
        statement: "*(*(κ∧ϕ)∧ϕ) = −7κ",
        dim: 8,
        degrees: ONE,
        exact: e,
        numeric: n,
    });
    let (e, n) = both!(lemma32);
    out.push(Identity {
        name: "warped-star-7",
        statement: "*₇γ = f^{6−2q}(*₆γ)∧dt, *₇(γ∧dt) = (−1)^q f^{6−2q} *₆γ",
        dim: 6,
        degrees: &[0, 1, 2, 3, 4, 5, 6],
        exact: e,
        numeric: n,
    });
    let (e, n) = both!(lemma62);
    out.push(Identity {
        name: "warped-star-8",
        statement: "*₈β = f^{7−2q}(*₇β)∧dt, *₈(β∧dt) = (−1)^{q+1} f^{7−2q} *₇β",
        dim: 7,
        degrees: &[0, 1, 2, 3, 4, 5, 6, 7],
        exact: e,
        numeric: n,
    });
    out
}

fn run_one(id: &Identity, samples: usize, seed: u64) -> IdentityResult {
    // One stream per identity, so adding identities never shifts the others.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fxhash(id.name));
    let inputs: Vec<Sample> = (0..samples)
        .map(|i| Sample::draw(&mut rng, id.dim, id.degrees[i % id.degrees.len()]))
        .collect();
    let (exact_failures, max_numeric_residual) = inputs
        .par_iter()
        .map(|s| {
            let bad = (id.exact)(s).into_iter().any(|(l, r)| l != r) as usize;
            let res = (id.numeric)(s)
                .into_iter()
                .fold(0.0f64, |m, (l, r)| m.max(relative_residual(&l, &r)));
            (bad, res)
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    IdentityResult {
        name: id.name,
        statement: id.statement,
        samples,
        exact_failures,
        max_numeric_residual,
        pass: exact_failures == 0 && max_numeric_residual < NUMERIC_TOL,
    }
}

/// `max|l − r| / max(1, max|l|, max|r|)`: inputs are scaled by powers of the
/// warping factor, so absolute round-off grows with them.
fn relative_residual(l: &Form<f64>, r: &Form<f64>) -> f64 {
    let scale = l.max_abs().max(r.max_abs()).max(1.0);
    (l.clone() - r.clone()).max_abs() / scale
}

fn fxhash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Runs the full suite with `samples` random inputs per identity.
pub fn run_identities(samples: usize, seed: u64) -> IdentityReport {
    IdentityReport {
        seed,
        results: catalogue().iter().map(|id| run_one(id, samples, seed)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_sample() {
        let r = run_identities(50, 7);
        for x in &r.results {
            assert!(x.pass, "{x:?}");
        }
        assert_eq!(r.results.len(), 10);
    }

    #[test]
    fn report_is_deterministic() {
        let a = serde_json::to_string(&run_identities(20, 1)).unwrap();
        let b = serde_json::to_string(&run_identities(20, 1)).unwrap();
        assert_eq!(a, b);
    }
}
