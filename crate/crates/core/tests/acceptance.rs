//! End-to-end acceptance run: one line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;

use holotor::catalog::{expected_su3_torsion, load_fiber, load_frame, s3xs3_nu3, Su3Fiber};
use holotor::class::{su3_bits, ClassLabel};
use holotor::exterior::Form;
use holotor::identities::{run_identities, DEFAULT_SAMPLES, DEFAULT_SEED};
use holotor::riemann::einstein_verify;
use holotor::scalar::{ExactScalar as E, Expr, Scalar};
use holotor::su3::{su3_class, su3_scalar, su3_scalar_with, su3_torsion, SU3Structure};
use holotor::tables::{metric_identity_families, nonexistence_sweep, table5, table6};
use holotor::warp::{
    einstein_profile_residual, make_g2_family, profile_grid, FamilySpec, G2Crosscheck,
    Spin7Crosscheck, WarpProfile, Warping, DEFAULT_GRID,
};
use holotor::error::Error;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn identities() -> Outcome {
    let r = run_identities(DEFAULT_SAMPLES, DEFAULT_SEED);
    for x in &r.results {
        ensure(
            x.pass,
            format!("{}: {} exact failures, numeric {:.1e}", x.name, x.exact_failures, x.max_numeric_residual),
        )?;
    }
    let worst = r.results.iter().map(|x| x.max_numeric_residual).fold(0.0, f64::max);
    Ok(format!("{} identities × {} samples, exact, numeric ≤ {worst:.1e}", r.results.len(), DEFAULT_SAMPLES))
}

fn homogeneous(name: &str) -> Result<(holotor::su3::TorsionSU3<E>, holotor::frames::FrameAlgebra), String> {
    let frame = load_frame(name).map_err(|e| e.to_string())?;
    let t = su3_torsion(&SU3Structure::canonical(), &frame).map_err(|e| e.to_string())?;
    Ok((t, frame))
}

fn example_s3xs3() -> Outcome {
    let (t, frame) = homogeneous("s3xs3")?;
    ensure(t.sigma0 == -E::sqrt5(), "σ₀ ≠ −√5")?;
    ensure(t.nu3 == s3xs3_nu3() && s3xs3_nu3().terms().count() == 6, "ν₃ differs from the printed form")?;
    ensure(Some(&t) == expected_su3_torsion("s3xs3").as_ref(), "torsion record differs")?;
    let cls = su3_class(&t, 0.0).label;
    ensure(cls == ClassLabel::su3(su3_bits::SIGMA0 | su3_bits::NU3), format!("class {cls}"))?;
    let scal = su3_scalar(&t, &frame);
    ensure(scal == E::from_i64(30), format!("Scal = {scal:?}"))?;
    let r = einstein_verify(&frame, 5.0, 1e-9).map_err(|e| e.to_string())?;
    ensure(r.passed, format!("Ric − 5·id = {:.1e}", r.deviation))?;
    Ok(format!("σ₀ = −√5, class {cls}, Scal = 30 exactly, |Ric − 5·id| = {:.1e}", r.deviation))
}

fn example_solv6() -> Outcome {
    let (t, frame) = homogeneous("solv6")?;
    ensure(t.pi1 == Form::term(6, -E::sqrt10(), &[6]), "π₁ ≠ −√10 e⁶")?;
    let cls = su3_class(&t, 0.0).label;
    ensure(cls == ClassLabel::su3(su3_bits::PI1), format!("class {cls}"))?;
    let delta = frame.codifferential(&t.pi1).scalar_part().to_f64();
    ensure((delta + 15.0).abs() < 1e-9, format!("δπ₁ = {delta}"))?;
    let scal = su3_scalar(&t, &frame).to_f64();
    ensure((scal + 30.0).abs() < 1e-9, format!("Scal = {scal}"))?;
    let r = einstein_verify(&frame, -5.0, 1e-9).map_err(|e| e.to_string())?;
    ensure(r.passed, format!("Ric + 5·id = {:.1e}", r.deviation))?;
    Ok(format!("π₁ = −√10 e⁶, class {cls}, δπ₁ = −15, Scal = −30, |Ric + 5·id| = {:.1e}", r.deviation))
}

fn twistor() -> Outcome {
    let e = load_fiber("twistor_sigma2").map_err(|e| e.to_string())?;
    let f = e.su3().ok_or("not an SU(3) fiber")?;
    let c = su3_class(&f.torsion, 0.0);
    ensure(c.coupled_c == Some(-E::sqrt10()), format!("c = {:?}", c.coupled_c))?;
    ensure(f.torsion.sigma0.square() == E::rational(40, 9), "σ₀² ≠ 40/9")?;
    ensure(f.torsion.sigma2.norm2() == E::rational(20, 3), "|σ₂|² ≠ 20/3")?;
    let scal = su3_scalar_with(&f.torsion, &f.delta_pi1, &f.delta_nu1).to_f64();
    ensure((scal - 30.0).abs() < 1e-9, format!("Scal = {scal}"))?;
    Ok("coupled, c = −√10, σ₀² = 40/9, |σ₂|² = 20/3, Scal = 30".into())
}

fn crosscheck() -> Outcome {
    let t = Expr::t();
    let g2_configs: Vec<(&str, WarpProfile)> = vec![
        ("s3xs3", WarpProfile::constant_angle(Warping::Linear, 1.0, 0.0)),
        ("s3xs3", WarpProfile::angle(Warping::Sine, Expr::c(0.4) - t.clone().cos() * 0.3)),
        ("solv6", WarpProfile::constant_angle(Warping::HypCosine, 1.0, 0.0)),
        ("solv6", WarpProfile::angle(Warping::HypSine, t.clone() * 0.5)),
        ("abelian6", WarpProfile::constant_angle(Warping::Exponential, 0.6, 0.8)),
        ("abelian6", WarpProfile::angle(Warping::Linear, t.clone().atan())),
        ("s3xs3", WarpProfile::angle(Warping::Exponential, t.clone() * 0.2)),
    ];
    let mut worst = 0.0f64;
    let mut n = 0;
    for (name, p) in &g2_configs {
        let e = load_fiber(name).map_err(|e| e.to_string())?;
        let fiber = e.su3().ok_or("not an SU(3) fiber")?;
        for t in profile_grid(p, DEFAULT_GRID) {
            let x = G2Crosscheck::run(fiber, p, t).map_err(|e| format!("{name} t={t}: {e}"))?;
            ensure(
                x.max_deviation < 1e-9,
                format!("{name} f={} t={t}: deviation {:.1e}", p.f, x.max_deviation),
            )?;
            worst = worst.max(x.max_deviation);
            n += 1;
        }
    }
    let spin7 = [("s3xs3_r", Warping::Sine), ("solv6_r", Warping::HypCosine)];
    for (name, w) in spin7 {
        let e = load_fiber(name).map_err(|e| e.to_string())?;
        let fiber = e.g2().ok_or("not a G₂ fiber")?;
        let p = WarpProfile::constant_angle(w, 1.0, 0.0);
        for t in profile_grid(&p, DEFAULT_GRID) {
            let x = Spin7Crosscheck::run(fiber, &p, t).map_err(|e| format!("{name} t={t}: {e}"))?;
            ensure(x.max_deviation < 1e-9, format!("{name} t={t}: deviation {:.1e}", x.max_deviation))?;
            worst = worst.max(x.max_deviation);
            n += 1;
        }
    }
    Ok(format!(
        "{} G₂ + {} Spin(7) configurations, {n} points, max deviation {worst:.1e}",
        g2_configs.len(),
        spin7.len()
    ))
}

fn table(which: u8) -> Outcome {
    let r = if which == 5 { table5(DEFAULT_GRID, 1e-9) } else { table6(DEFAULT_GRID, 1e-9) };
    let mut configs = 0;
    let mut worst = 0.0f64;
    for row in &r.rows {
        for c in &row.configs {
            ensure(c.pass, format!("row {}: {} {} {:?}", row.class, c.fiber, c.family, c.notes))?;
            worst = worst.max(c.scalar_deviation);
            configs += 1;
        }
        ensure(row.status != holotor::tables::RowStatus::Fail, format!("row {}: {}", row.class, row.note))?;
    }
    let realized = r.rows.iter().filter(|r| !r.configs.is_empty()).count();
    if which == 6 {
        // the sine cone over a nearly parallel fiber
        let np = load_fiber("np_g2_abstract").map_err(|e| e.to_string())?;
        let p = WarpProfile::constant_angle(Warping::Sine, 1.0, 0.0);
        let s = holotor::warp::warped_spin7_torsion(np.g2().unwrap(), &p, 1.0).map_err(|e| e.to_string())?;
        ensure((s.scalar - 56.0).abs() < 1e-9, format!("sine cone Scal = {}", s.scalar))?;
    }
    Ok(format!(
        "{realized} rows / {configs} configurations reproduced, max |Scal − {}λ| = {worst:.1e}",
        if which == 5 { 7 } else { 8 }
    ))
}

fn sweep() -> Outcome {
    let r = nonexistence_sweep(DEFAULT_GRID, 1e-9);
    ensure(r.violations.is_empty(), format!("{:?}", r.violations))?;
    for (w, v) in &r.obstruction {
        ensure(*v > 0.1, format!("f¹³f″ varies only {v} for f = {w}"))?;
    }
    let least = r.obstruction.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{} G₂ + {} Spin(7) configurations, no forbidden class; f¹³f″ variation ≥ {least:.2}",
        r.g2_configs, r.spin7_configs
    ))
}

fn einstein_ode() -> Outcome {
    let mut worst = 0.0f64;
    for d in [6, 7] {
        for w in Warping::ALL {
            let (mu, lambda) = w.einstein_constants(d);
            let p = WarpProfile::constant_angle(w, 1.0, 0.0);
            for t in profile_grid(&p, DEFAULT_GRID) {
                let r = einstein_profile_residual(&w.expr(), lambda, mu, d, t).map_err(|e| e.to_string())?;
                ensure(r.abs() < 1e-12, format!("f = {}, d = {d}, t = {t}: {r:e}", w.name()))?;
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(format!("5 columns × d ∈ {{6, 7}} × {DEFAULT_GRID} points, max residual {worst:.1e}"))
}

fn metric_families() -> Outcome {
    let r = metric_identity_families(DEFAULT_GRID, 1e-9);
    ensure(r.errors.is_empty(), format!("{:?}", r.errors))?;
    for s in &r.ellipse {
        ensure(
            s.metric_deviation < 1e-12 && s.expected_class == s.observed_class,
            format!("(a, b) = ({}, {}): {} vs {}, metric {:.1e}", s.a, s.b, s.expected_class, s.observed_class, s.metric_deviation),
        )?;
    }
    for s in &r.dichotomy {
        ensure(s.expected_class == s.observed_class, format!("C = {}: {}", s.c, s.observed_class))?;
    }
    ensure(r.passed(), "family report failed")?;
    let worst = r.ellipse.iter().map(|s| s.metric_deviation).fold(0.0, f64::max);
    Ok(format!(
        "{} ellipse samples share g = f²·id ⊕ 1 (dev {worst:.1e}); C-dichotomy holds at 0, 0.5, −1",
        r.ellipse.len()
    ))
}

fn endpoints() -> Outcome {
    let s3 = load_fiber("s3xs3").map_err(|e| e.to_string())?;
    let spec: FamilySpec = "coclosed_theta:case=iii".parse().map_err(|e: Error| e.to_string())?;
    let fam = make_g2_family(&spec, s3.su3().unwrap()).map_err(|e| e.to_string())?;
    let want = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let hi = fam.profile.domain.1;
    ensure((hi - want).abs() < 1e-12, format!("upper endpoint {hi}, expected {want}"))?;

    // C = 2: the nearly Kähler fiber with σ₀ = −2
    let nk = load_fiber("nk_abstract").map_err(|e| e.to_string())?;
    match make_g2_family(&spec, nk.su3().unwrap()) {
        Err(Error::Hypothesis { code: "coclosed-constant", .. }) => {}
        other => return Err(format!("C = 2 not rejected: {:?}", other.map(|f| f.spec))),
    }

    // |c| = 3: a coupled fiber with σ₀ = −2 and σ₂ ≠ 0
    let tw = load_fiber("twistor_sigma2").map_err(|e| e.to_string())?;
    let mut fiber: Su3Fiber = tw.su3().unwrap().clone();
    fiber.torsion.sigma0 = E::from_i64(-2);
    let spec: FamilySpec = "coupled_const:case=iii,f=t".parse().map_err(|e: Error| e.to_string())?;
    match make_g2_family(&spec, &fiber) {
        Err(Error::Hypothesis { code: "coupled-constant", .. }) => {}
        other => return Err(format!("|c| = 3 not rejected: {:?}", other.map(|f| f.spec))),
    }
    Ok(format!("endpoint ln((1+√5)/2) to {:.1e}; C = 2 and |c| = 3 rejected", (hi - want).abs()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("form identity suite", identities),
        ("S³×S³ nearly Kähler-type example", example_s3xs3),
        ("Einstein solvmanifold example", example_solv6),
        ("twistor coupled fiber", twistor),
        ("closed form vs generic torsion", crosscheck),
        ("Einstein warped G₂ table", || table(5)),
        ("Einstein warped Spin(7) table", || table(6)),
        ("non-existence guards", sweep),
        ("Einstein profile ODE", einstein_ode),
        ("metric-identity families", metric_families),
        ("domain endpoints and hypothesis errors", endpoints),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let r = check();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
