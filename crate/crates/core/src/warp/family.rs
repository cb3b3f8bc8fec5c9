//! Named warped G₂ families over SU(3) fibers.
//!
//! Spec syntax: `name` or `name:key=value,key=value`, e.g.
//! `coclosed_theta:case=iii`, `lcp:f=sinh,eps=-1`, `family_57:a=1,b=1`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::{WarpProfile, Warping};
use crate::catalog::Su3Fiber;
use crate::class::{su3_bits, ClassLabel};
use crate::error::{Error, Result};
use crate::scalar::{Expr, Scalar};
use crate::su3::su3_scalar_with;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        if name.is_empty() {
            return Err(Error::FamilySpec(format!("missing family name in {s:?}")));
        }
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|x| !x.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::FamilySpec(format!("expected key=value, got {kv:?}")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(FamilySpec {
            name: name.to_string(),
            params,
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

impl FamilySpec {
    pub fn new(name: &str, params: &[(&str, &str)]) -> Self {
        FamilySpec {
            name: name.into(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn num(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.str(key) {
            Some(v) => v
                .parse::<Expr>()
                .and_then(|e| e.value(0.0))
                .map_err(|_| Error::FamilySpec(format!("{key}={v} is not a number"))),
            None => default.ok_or_else(|| Error::FamilySpec(format!("missing parameter {key}"))),
        }
    }

    fn warping(&self, default: Option<Warping>) -> Result<Warping> {
        match self.str("f") {
            Some(v) => {
                Warping::parse(v).ok_or_else(|| Error::FamilySpec(format!("unknown warping f={v}")))
            }
            None => default.ok_or_else(|| Error::FamilySpec("missing parameter f".into())),
        }
    }

    fn eps(&self) -> Result<f64> {
        let e = self.num("eps", Some(1.0))?;
        if e != 1.0 && e != -1.0 {
            return Err(Error::FamilySpec(format!("eps must be ±1, got {e}")));
        }
        Ok(e)
    }
}

/// A family member: profile plus the predicted strict class and Einstein
/// constant (`None` when the family makes no prediction).
#[derive(Clone, Debug)]
pub struct G2Family {
    pub spec: FamilySpec,
    pub profile: WarpProfile,
    pub expected_class: Option<ClassLabel>,
    pub lambda: Option<f64>,
}

fn class(text: &str) -> ClassLabel {
    ClassLabel::parse(crate::class::Group::G2, text).expect("static class label")
}

fn lambda_of(w: Warping) -> f64 {
    w.einstein_constants(6).1
}

struct FiberInfo {
    pi0: f64,
    sigma0: f64,
    mask: u8,
    scalar: f64,
}

fn info(fiber: &Su3Fiber) -> FiberInfo {
    let t = &fiber.torsion;
    FiberInfo {
        pi0: t.pi0.value(),
        sigma0: t.sigma0.value(),
        mask: t.mask(1e-12),
        scalar: su3_scalar_with(t, &fiber.delta_pi1, &fiber.delta_nu1).value(),
    }
}

fn require_scal30(i: &FiberInfo) -> Result<()> {
    if (i.scalar - 30.0).abs() > 1e-9 {
        return Err(Error::hypothesis(
            "fiber-scalar",
            format!("fiber scalar curvature is {}, not 30", i.scalar),
        ));
    }
    Ok(())
}

fn require_class(i: &FiberInfo, allowed: u8, what: &str) -> Result<()> {
    if i.mask & !allowed != 0 {
        return Err(Error::hypothesis(
            "fiber-class",
            format!("fiber torsion is not in {what}"),
        ));
    }
    Ok(())
}

fn require_nearly_kaehler_type(i: &FiberInfo) -> Result<()> {
    use su3_bits::*;
    require_class(i, PI0 | SIGMA0, "W1+ ⊕ W1-")?;
    let c2 = i.pi0 * i.pi0 + i.sigma0 * i.sigma0;
    if (c2 - 4.0).abs() > 1e-9 {
        return Err(Error::hypothesis(
            "fiber-normalisation",
            format!("π₀² + σ₀² = {c2}, not 4"),
        ));
    }
    Ok(())
}

fn require_warping(w: Warping, allowed: &[Warping], family: &str) -> Result<()> {
    if !allowed.contains(&w) {
        return Err(Error::FamilySpec(format!(
            "{family} does not admit f = {}",
            w.name()
        )));
    }
    Ok(())
}

/// Coupled constant `c = −3σ₀/2` of a coupled fiber, `|c| > 3` enforced.
fn coupled_constant(fiber: &Su3Fiber) -> Result<f64> {
    use su3_bits::*;
    let i = info(fiber);
    if i.mask & !(SIGMA0 | SIGMA2) != 0 || i.mask & SIGMA2 == 0 {
        return Err(Error::hypothesis(
            "not-coupled",
            "fiber is not coupled (needs σ₀ and σ₂ only, σ₂ ≠ 0)",
        ));
    }
    let c = -1.5 * i.sigma0;
    if c.abs() <= 3.0 + 1e-12 {
        return Err(Error::hypothesis(
            "coupled-constant",
            format!("coupled constant |c| = {} must exceed 3", c.abs()),
        ));
    }
    require_scal30(&i)?;
    Ok(c)
}

/// Builds a named family member over `fiber`.
pub fn make_g2_family(spec: &FamilySpec, fiber: &Su3Fiber) -> Result<G2Family> {
    let done = |profile: WarpProfile, cls: Option<&str>, lambda: Option<f64>| G2Family {
        spec: spec.clone(),
        profile,
        expected_class: cls.map(class),
        lambda,
    };
    let t = Expr::t;
    let name = if spec.name == "family_56" { "x1x4_theta" } else { spec.name.as_str() };
    match name {
        "cone_parallel" => {
            let i = info(fiber);
            require_nearly_kaehler_type(&i)?;
            require_scal30(&i)?;
            let p = WarpProfile::constant_angle(Warping::Linear, -i.sigma0 / 2.0, -i.pi0 / 2.0);
            Ok(done(p, Some("P"), Some(0.0)))
        }
        "sine_cone_np" => {
            let i = info(fiber);
            require_nearly_kaehler_type(&i)?;
            require_scal30(&i)?;
            let eps = spec.eps()?;
            let rho = (-i.pi0 / 2.0).atan2(-i.sigma0 / 2.0);
            let p = WarpProfile::angle(Warping::Sine, t() * eps + rho);
            Ok(done(p, Some("X1"), Some(6.0)))
        }
        "lcp" => {
            let i = info(fiber);
            let w = spec.warping(None)?;
            let eps = spec.eps()?;
            if i.mask == 0 {
                require_warping(w, &[Warping::Exponential], "lcp over a Calabi–Yau fiber")?;
                let p = WarpProfile::constant_angle(w, 1.0, 0.0);
                return Ok(done(p, Some("X4"), Some(-6.0)));
            }
            require_nearly_kaehler_type(&i)?;
            require_scal30(&i)?;
            require_warping(
                w,
                &[Warping::HypSine, Warping::Linear, Warping::Sine],
                "lcp over a W1± fiber",
            )?;
            let p = WarpProfile::constant_angle(w, eps * i.sigma0 / 2.0, eps * i.pi0 / 2.0);
            let cls = if w == Warping::Linear && eps < 0.0 { "P" } else { "X4" };
            Ok(done(p, Some(cls), Some(lambda_of(w))))
        }
        "coclosed_theta" => {
            use su3_bits::*;
            let i = info(fiber);
            require_class(&i, PI0 | SIGMA0 | NU3, "W1+ ⊕ W1- ⊕ W3")?;
            require_scal30(&i)?;
            let c = (i.pi0 * i.pi0 + i.sigma0 * i.sigma0).sqrt();
            if c < 2.0 - 1e-12 {
                return Err(Error::hypothesis("coclosed-constant", format!("C = {c} < 2")));
            }
            let a = i.pi0.atan2(i.sigma0);
            let case = spec.str("case").unwrap_or("i");
            let (w, domain) = match case {
                "i" => (Warping::Linear, None),
                "ii" => (Warping::Sine, None),
                "iii" => {
                    if c <= 2.0 + 1e-12 {
                        return Err(Error::hypothesis(
                            "coclosed-constant",
                            format!("case iii needs C > 2, got C = {c}"),
                        ));
                    }
                    (Warping::HypSine, Some(((c + (c * c - 4.0).sqrt()) / 2.0).ln()))
                }
                other => return Err(Error::FamilySpec(format!("coclosed_theta case {other}"))),
            };
            let theta = Expr::c(a) - (w.derivative_expr() * (-2.0 / c)).acos();
            let mut p = WarpProfile::angle(w, theta);
            if let Some(hi) = domain {
                p = p.with_domain(0.0, hi);
            }
            let cls = if i.mask & NU3 != 0 {
                "X1+X3"
            } else if w == Warping::Linear {
                "P"
            } else {
                "X1"
            };
            Ok(done(p, Some(cls), Some(lambda_of(w))))
        }
        "coupled_const" => {
            let c = coupled_constant(fiber)?;
            let w = spec.warping(Some(Warping::Linear))?;
            let case = spec.str("case").unwrap_or("i");
            let (alpha, beta, cls) = match case {
                "i" => (1.0, 0.0, "X2+X4"),
                "ii" => (0.0, 1.0, "X1+X3+X4"),
                "iii" => {
                    require_warping(w, &[Warping::Linear], "coupled_const case iii")?;
                    (3.0 / c, (c * c - 9.0).sqrt() / c, "X1+X2+X3")
                }
                other => return Err(Error::FamilySpec(format!("coupled_const case {other}"))),
            };
            require_warping(w, &[Warping::HypSine, Warping::Linear, Warping::Sine], "coupled_const")?;
            let p = WarpProfile::constant_angle(w, alpha, beta);
            Ok(done(p, Some(cls), Some(lambda_of(w))))
        }
        "coupled_theta" => {
            let c = coupled_constant(fiber)?;
            let w = spec.warping(None)?;
            require_warping(w, &[Warping::Sine, Warping::HypSine], "coupled_theta")?;
            let fp = w.derivative_expr();
            let alpha = fp.clone() * (3.0 / c);
            let beta = (Expr::c(c * c) - fp.clone() * fp * 9.0).sqrt() * (1.0 / c);
            let mut p = WarpProfile::new(w, alpha, beta);
            if w == Warping::HypSine {
                p = p.with_domain(0.0, ((c.abs() + (c * c - 9.0).sqrt()) / 3.0).ln());
            }
            Ok(done(p, Some("X1+X2+X3"), Some(lambda_of(w))))
        }
        "x234_theta" => {
            let c = coupled_constant(fiber)?;
            let w = spec.warping(None)?;
            let g = match w {
                Warping::Linear => t(),
                Warping::Sine => (t() * 0.5).tan(),
                Warping::HypSine => (t() * 0.5).tanh(),
                _ => return Err(Error::FamilySpec(format!("x234_theta with f = {}", w.name()))),
            };
            let u = g.pow(Expr::c(-2.0 * c));
            let p = WarpProfile::angle(w, u.atan() * 2.0);
            Ok(done(p, Some("X2+X3+X4"), Some(lambda_of(w))))
        }
        "x1x4_theta" => {
            let i = info(fiber);
            if (i.sigma0 + 2.0).abs() > 1e-12 || i.mask != su3_bits::SIGMA0 {
                return Err(Error::hypothesis(
                    "fiber-class",
                    "x1x4_theta needs a nearly Kähler fiber with σ₀ = −2",
                ));
            }
            require_scal30(&i)?;
            let default = (spec.name == "family_56").then_some(Warping::Sine);
            let w = spec.warping(default)?;
            let c = spec.num("C", None)?;
            let g = match w {
                Warping::Linear => t(),
                Warping::HypSine => (t() * 0.5).tanh(),
                Warping::Sine => (t() * 0.5).tan(),
                _ => return Err(Error::FamilySpec(format!("x1x4_theta with f = {}", w.name()))),
            };
            let p = WarpProfile::angle(w, (g * c.exp()).atan() * 2.0);
            let cls = if w == Warping::Sine && c == 0.0 { "X1" } else { "X1+X4" };
            Ok(done(p, Some(cls), Some(lambda_of(w))))
        }
        "family_57" => {
            let c = coupled_constant(fiber)?;
            let w = spec.warping(Some(Warping::Linear))?;
            let a = spec.num("a", None)?;
            let b = spec.num("b", None)?;
            let near = |x: f64, y: f64| (x - y).abs() <= 1e-12;
            let (alpha, beta, cls) = match w {
                Warping::Linear => {
                    let (a0, b0) = (3.0 / c, (c * c - 9.0).sqrt() / c);
                    let r = a0 * a0 * a * a + b0 * b0 * b * b;
                    if !near(r, 1.0) {
                        return Err(Error::FamilySpec(format!(
                            "(a, b) = ({a}, {b}) is off the ellipse: α₀²a² + β₀²b² = {r}"
                        )));
                    }
                    let cls = if near(a, 1.0) {
                        "X1+X2+X3"
                    } else if near(b, 0.0) {
                        "X2+X4"
                    } else if near(a, 0.0) {
                        "X1+X3+X4"
                    } else {
                        "X"
                    };
                    (a0 * a, b0 * b, cls)
                }
                Warping::Sine | Warping::HypSine => {
                    if !near(a * a + b * b, 1.0) {
                        return Err(Error::FamilySpec(format!(
                            "(a, b) = ({a}, {b}) is off the unit circle"
                        )));
                    }
                    let cls = if near(b, 0.0) {
                        "X2+X4"
                    } else if near(a, 0.0) {
                        "X1+X3+X4"
                    } else {
                        "X"
                    };
                    (a, b, cls)
                }
                _ => return Err(Error::FamilySpec(format!("family_57 with f = {}", w.name()))),
            };
            let p = WarpProfile::constant_angle(w, alpha, beta);
            Ok(done(p, Some(cls), Some(lambda_of(w))))
        }
        "x34_const" => {
            use su3_bits::*;
            let i = info(fiber);
            require_class(&i, PI0 | SIGMA0 | NU3, "W1+ ⊕ W1- ⊕ W3")?;
            require_scal30(&i)?;
            let w = spec.warping(Some(Warping::Linear))?;
            require_warping(w, &[Warping::HypSine, Warping::Linear, Warping::Sine], "x34_const")?;
            let p = WarpProfile::constant_angle(w, 1.0, 0.0);
            Ok(done(p, Some("X3+X4"), Some(lambda_of(w))))
        }
        "solv_cosh" => {
            let i = info(fiber);
            if (i.scalar + 30.0).abs() > 1e-9 {
                return Err(Error::hypothesis(
                    "fiber-scalar",
                    format!("fiber scalar curvature is {}, not −30", i.scalar),
                ));
            }
            let p = WarpProfile::constant_angle(Warping::HypCosine, 1.0, 0.0);
            Ok(done(p, Some("X2+X3+X4"), Some(-6.0)))
        }
        "warp" => {
            let parse = |k: &str, d: &str| -> Result<Expr> {
                spec.str(k).unwrap_or(d).parse::<Expr>()
            };
            let f = parse("f", "t")?;
            let profile = WarpProfile {
                warping: spec.str("f").and_then(Warping::parse),
                domain: match spec.str("f").and_then(Warping::parse) {
                    Some(w) => w.domain(),
                    None => (spec.num("lo", Some(0.0))?, spec.num("hi", Some(PI))?),
                },
                f,
                alpha: parse("alpha", "1")?,
                beta: parse("beta", "0")?,
            };
            Ok(done(profile, None, None))
        }
        other => Err(Error::FamilySpec(format!("unknown family {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_fiber;

    fn fiber(name: &str) -> Su3Fiber {
        load_fiber(name).unwrap().su3().unwrap().clone()
    }

    fn make(spec: &str, fib: &str) -> Result<G2Family> {
        make_g2_family(&spec.parse().unwrap(), &fiber(fib))
    }

    #[test]
    fn spec_round_trip() {
        let s: FamilySpec = "lcp:f=sinh,eps=-1".parse().unwrap();
        assert_eq!(s.name, "lcp");
        assert_eq!(s.to_string(), "lcp:eps=-1,f=sinh");
        assert!("lcp:f".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn coclosed_case_iii_domain() {
        let fam = make("coclosed_theta:case=iii", "s3xs3").unwrap();
        let hi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((fam.profile.domain.1 - hi).abs() < 1e-12);
        assert_eq!(fam.expected_class.unwrap(), class("X1+X3"));
        assert_eq!(fam.lambda, Some(-6.0));
        // C = 2 for a nearly Kähler fiber
        let e = make("coclosed_theta:case=iii", "nk_abstract").unwrap_err();
        assert!(matches!(e, Error::Hypothesis { code: "coclosed-constant", .. }));
    }

    #[test]
    fn coupled_case_iii_reproduces_the_twistor_example() {
        let fam = make("coupled_const:case=iii", "twistor_sigma2").unwrap();
        let r10 = 10f64.sqrt();
        let p = fam.profile.at(1.0).unwrap();
        assert!((p.alpha.v + 3.0 / r10).abs() < 1e-15);
        assert!((p.beta.v + 1.0 / r10).abs() < 1e-15);
        assert_eq!(fam.expected_class.unwrap(), class("X1+X2+X3"));
    }

    #[test]
    fn hypotheses_are_checked() {
        assert!(matches!(
            make("coupled_const:case=i", "nk_abstract").unwrap_err(),
            Error::Hypothesis { code: "not-coupled", .. }
        ));
        assert!(matches!(
            make("cone_parallel", "s3xs3").unwrap_err(),
            Error::Hypothesis { .. }
        ));
        assert!(make("family_57:a=2,b=2", "twistor_sigma2").is_err());
        assert!(make("nope", "nk_abstract").is_err());
    }

    #[test]
    fn cone_parallel_angle() {
        let fam = make("cone_parallel", "nk_abstract").unwrap();
        let p = fam.profile.at(0.5).unwrap();
        assert_eq!((p.alpha.v, p.beta.v), (1.0, 0.0));
    }
}
