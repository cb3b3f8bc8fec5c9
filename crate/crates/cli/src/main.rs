//! `holotor` command-line front end.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use holotor::catalog::{g2_from_frame, load_fiber, load_frame, su3_from_frame, CatalogEntry, Fiber};
use holotor::class::{g2_bits, ClassLabel};
use holotor::error::Error;
use holotor::frames::FrameAlgebra;
use holotor::identities::{run_identities, DEFAULT_SAMPLES, DEFAULT_SEED};
use holotor::riemann::{einstein_verify, ricci};
use holotor::su3::{su3_class, su3_scalar, su3_torsion, SU3Structure};
use holotor::tables::{table5, table6, TableReport};
use holotor::warp::{
    cor35_conditions, g2_grid, make_g2_family, profile_grid, spin7_grid, FamilySpec, G2Crosscheck,
    Spin7Crosscheck, WarpProfile, Warping, DEFAULT_GRID,
};

mod render;

#[derive(Parser, Debug)]
#[command(name = "holotor", version, about = "Intrinsic torsion of SU(3), G₂ and Spin(7) structures")]
struct Cli {
    /// Print only the machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Vanishing tolerance (default: $HOLOTOR_TOL or 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion, class and scalar curvature of the standard SU(3)-structure on a frame.
    ClassifySu3 {
        #[arg(long)]
        frame: String,
    },
    /// Warped G₂-structure over an SU(3) fiber along a family.
    ClassifyG2 {
        #[arg(long)]
        fiber: String,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        t_grid: usize,
    },
    /// Warped Spin(7)-structure over a G₂ fiber.
    ClassifySpin7 {
        #[arg(long)]
        fiber: String,
        /// Warping function: t, sin, sinh, cosh, exp.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        t_grid: usize,
    },
    /// Ricci tensor and Einstein check.
    Ricci {
        #[arg(long)]
        frame: String,
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
    },
    /// Reproduce the Einstein warped-structure tables.
    VerifyTables {
        #[arg(long, value_parser = ["5", "6"])]
        table: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        t_grid: usize,
    },
    /// Closed-form torsion against generic extraction from dφ.
    Crosscheck {
        #[arg(long)]
        fiber: String,
        /// Family spec (SU(3) fibers) or warping name (G₂ fibers).
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        t_grid: usize,
    },
    /// Randomized check of the form identities.
    Identities {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    inputs_digest: String,
    tolerance: f64,
    results: Value,
    pass: bool,
}

/// Failure before any verification could run.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<(Value, bool), UsageError>;

fn tolerance(cli: Option<f64>) -> Result<f64, UsageError> {
    if let Some(t) = cli {
        return Ok(t);
    }
    match std::env::var("HOLOTOR_TOL") {
        Ok(s) => s
            .parse()
            .map_err(|_| UsageError(format!("HOLOTOR_TOL is not a number: {s:?}"))),
        Err(_) => Ok(1e-9),
    }
}

/// A catalog name, or a path to a frame file.
fn frame_arg(arg: &str, digest: &mut Sha256) -> Result<(String, FrameAlgebra), UsageError> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| UsageError(format!("{arg}: {e}")))?;
        digest.update(text.as_bytes());
        let frame = FrameAlgebra::from_json(&text).map_err(|e| UsageError(format!("{arg}: {e}")))?;
        Ok((arg.to_string(), frame))
    } else {
        Ok((arg.to_string(), load_frame(arg)?))
    }
}

fn fiber_arg(arg: &str, digest: &mut Sha256) -> Result<CatalogEntry, UsageError> {
    if !Path::new(arg).is_file() {
        return Ok(load_fiber(arg)?);
    }
    let (name, frame) = frame_arg(arg, digest)?;
    let fiber = match frame.dim() {
        6 => Fiber::Su3(su3_from_frame(frame)?),
        7 => Fiber::G2(g2_from_frame(frame)?),
        n => return Err(UsageError(format!("{name}: fibers are 6- or 7-dimensional, got {n}"))),
    };
    let expected_class = match &fiber {
        Fiber::Su3(f) => su3_class(&f.torsion, 0.0).label,
        Fiber::G2(f) => holotor::g2::g2_class(&f.torsion, 1e-12),
    };
    Ok(CatalogEntry {
        name,
        fiber,
        expected_class,
        mu: None,
        note: "frame file",
    })
}

fn classify_su3(frame: &str, tol: f64, digest: &mut Sha256) -> Run {
    let (name, frame) = frame_arg(frame, digest)?;
    if frame.dim() != 6 {
        return Err(UsageError(format!("{name}: SU(3) frames are 6-dimensional")));
    }
    let t = su3_torsion(&SU3Structure::canonical(), &frame)?;
    let class = su3_class(&t, 0.0);
    let scalar = su3_scalar(&t, &frame);
    let tf = t.to_f64();
    let norms = json!({
        "pi0": tf.pi0.abs(),
        "sigma0": tf.sigma0.abs(),
        "pi1": tf.pi1.norm2().sqrt(),
        "nu1": tf.nu1.norm2().sqrt(),
        "pi2": tf.pi2.norm2().sqrt(),
        "sigma2": tf.sigma2.norm2().sqrt(),
        "nu3": tf.nu3.norm2().sqrt(),
    });
    let numeric_class = ClassLabel::su3(tf.mask(tol));
    let pass = numeric_class == class.label && t.check_membership(tol).is_ok();
    Ok((
        json!({
            "frame": name,
            "class": class.label.to_string(),
            "names": class.label.names,
            "coupled_c": class.coupled_c.map(|c| c.to_string()),
            "pi0": t.pi0.to_string(),
            "sigma0": t.sigma0.to_string(),
            "norms": norms,
            "scalar": scalar.to_string(),
            "scalar_value": scalar.to_f64(),
        }),
        pass,
    ))
}

fn classify_g2(fiber: &str, family: &str, n: usize, tol: f64, digest: &mut Sha256) -> Run {
    let entry = fiber_arg(fiber, digest)?;
    let su3 = entry
        .su3()
        .ok_or_else(|| UsageError(format!("{fiber} is not an SU(3) fiber")))?;
    let spec: FamilySpec = family.parse()?;
    let fam = make_g2_family(&spec, su3)?;
    let (grid, samples) = g2_grid(su3, &fam.profile, n, tol)?;
    let mut cor35_consistent = true;
    let mut points = Vec::new();
    for s in &samples {
        let c = cor35_conditions(su3, &fam.profile, s.t)?;
        let mask = s.mask(tol);
        let predicted = c.vanishing(tol * s.dphi_norm.max(1.0));
        let observed = [
            mask & g2_bits::X1 == 0,
            mask & g2_bits::X4 == 0,
            mask & g2_bits::X2 == 0,
            mask & g2_bits::X3 == 0,
        ];
        cor35_consistent &= predicted == observed;
        points.push(json!({
            "t": s.t,
            "norms": s.norms(),
            "scalar": s.scalar,
            "cor35_residuals": c.residuals,
        }));
    }
    let mut pass = cor35_consistent;
    if let Some(e) = &fam.expected_class {
        pass &= *e == grid.label;
    }
    let scalar_deviation = fam.lambda.map(|l| grid.scalar_deviation(7.0 * l));
    if let Some(d) = scalar_deviation {
        pass &= d <= 1e-9;
    }
    Ok((
        json!({
            "fiber": entry.name,
            "family": spec.to_string(),
            "f": fam.profile.f.to_string(),
            "class": grid.label.to_string(),
            "strict": grid.label.strict,
            "names": grid.label.names,
            "expected_class": fam.expected_class.map(|c| c.to_string()),
            "lambda": fam.lambda,
            "scalar_deviation": scalar_deviation,
            "cor35_consistent": cor35_consistent,
            "points": points,
        }),
        pass,
    ))
}

fn warping_arg(s: &str) -> Result<Warping, UsageError> {
    let s = s.strip_prefix("f=").unwrap_or(s);
    Warping::parse(s).ok_or_else(|| UsageError(format!("unknown warping {s:?} (t, sin, sinh, cosh, exp)")))
}

fn classify_spin7(fiber: &str, f: &str, n: usize, tol: f64, digest: &mut Sha256) -> Run {
    let entry = fiber_arg(fiber, digest)?;
    let g2 = entry
        .g2()
        .ok_or_else(|| UsageError(format!("{fiber} is not a G₂ fiber")))?;
    let w = warping_arg(f)?;
    let profile = WarpProfile::constant_angle(w, 1.0, 0.0);
    let (grid, samples) = spin7_grid(g2, &profile, n, tol)?;
    let einstein = entry.mu.filter(|mu| (w.einstein_constants(7).0 - mu).abs() < 1e-12);
    let lambda = einstein.map(|_| w.einstein_constants(7).1);
    let scalar_deviation = lambda.map(|l| grid.scalar_deviation(8.0 * l));
    let pass = scalar_deviation.map_or(true, |d| d <= 1e-9);
    Ok((
        json!({
            "fiber": entry.name,
            "f": w.name(),
            "class": grid.label.to_string(),
            "names": grid.label.names,
            "lambda": lambda,
            "scalar_deviation": scalar_deviation,
            "points": samples.iter().map(|s| json!({
                "t": s.t,
                "norms": s.norms(),
                "scalar": s.scalar,
            })).collect::<Vec<_>>(),
        }),
        pass,
    ))
}

fn ricci_cmd(frame: &str, mu: Option<f64>, tol: f64, digest: &mut Sha256) -> Run {
    let (name, frame) = frame_arg(frame, digest)?;
    let ric = ricci(&frame)?;
    let n = ric.len() as f64;
    let mu = mu.unwrap_or_else(|| (0..ric.len()).map(|i| ric[i][i]).sum::<f64>() / n);
    let r = einstein_verify(&frame, mu, tol)?;
    Ok((
        json!({
            "frame": name,
            "mu": r.mu,
            "fitted_mu": r.fitted_mu,
            "scalar": r.scalar,
            "deviation": r.deviation,
            "einstein": r.passed,
            "ricci": ric,
        }),
        r.passed,
    ))
}

fn verify_tables(table: Option<&str>, n: usize, tol: f64) -> Run {
    let reports: Vec<TableReport> = match table {
        Some("5") => vec![table5(n, tol)],
        Some("6") => vec![table6(n, tol)],
        _ => vec![table5(n, tol), table6(n, tol)],
    };
    let pass = reports.iter().all(TableReport::passed);
    Ok((serde_json::to_value(&reports).expect("serializable"), pass))
}

fn crosscheck(fiber: &str, family: &str, n: usize, digest: &mut Sha256) -> Run {
    let entry = fiber_arg(fiber, digest)?;
    let mut points = Vec::new();
    let mut worst = 0.0f64;
    match &entry.fiber {
        Fiber::Su3(su3) => {
            let fam = make_g2_family(&family.parse()?, su3)?;
            for t in profile_grid(&fam.profile, n) {
                let x = G2Crosscheck::run(su3, &fam.profile, t)?;
                worst = worst.max(x.max_deviation);
                points.push(serde_json::to_value(&x).expect("serializable"));
            }
        }
        Fiber::G2(g2) => {
            let profile = WarpProfile::constant_angle(warping_arg(family)?, 1.0, 0.0);
            for t in profile_grid(&profile, n) {
                let x = Spin7Crosscheck::run(g2, &profile, t)?;
                worst = worst.max(x.max_deviation);
                points.push(serde_json::to_value(&x).expect("serializable"));
            }
        }
    }
    Ok((
        json!({
            "fiber": entry.name,
            "family": family,
            "max_deviation": worst,
            "points": points,
        }),
        worst < 1e-9,
    ))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let tol = match tolerance(cli.tol) {
        Ok(t) => t,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    // the digest covers the arguments that determine the numbers, plus file contents
    let echo: Vec<String> = argv.iter().skip(1).filter(|a| *a != "--json").cloned().collect();
    let mut digest = Sha256::new();
    for a in &echo {
        digest.update(a.as_bytes());
        digest.update([0]);
    }
    digest.update(tol.to_bits().to_le_bytes());
    let outcome = match &cli.command {
        Command::ClassifySu3 { frame } => classify_su3(frame, tol, &mut digest),
        Command::ClassifyG2 { fiber, family, t_grid } => classify_g2(fiber, family, *t_grid, tol, &mut digest),
        Command::ClassifySpin7 { fiber, f, t_grid } => classify_spin7(fiber, f, *t_grid, tol, &mut digest),
        Command::Ricci { frame, mu } => ricci_cmd(frame, *mu, tol, &mut digest),
        Command::VerifyTables { table, t_grid } => verify_tables(table.as_deref(), *t_grid, tol),
        Command::Crosscheck { fiber, family, t_grid } => crosscheck(fiber, family, *t_grid, &mut digest),
        Command::Identities { samples } => {
            let r = run_identities(*samples, cli.seed);
            let pass = r.passed();
            Ok((serde_json::to_value(&r).expect("serializable"), pass))
        }
    };
    let (results, pass) = match outcome {
        Ok(x) => x,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let report = Report {
        command: echo,
        inputs_digest: format!("{:x}", digest.finalize()),
        tolerance: tol,
        results,
        pass,
    };
    let text = if cli.json {
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        format!(
            "{}digest {}\n{}\n",
            render::human(&cli.command_name(), &report.results),
            report.inputs_digest,
            if pass { "PASS" } else { "FAIL" }
        )
    };
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(if pass { 0 } else { 1 })
}

impl Cli {
    fn command_name(&self) -> String {
        match &self.command {
            Command::ClassifySu3 { .. } => "classify-su3",
            Command::ClassifyG2 { .. } => "classify-g2",
            Command::ClassifySpin7 { .. } => "classify-spin7",
            Command::Ricci { .. } => "ricci",
            Command::VerifyTables { .. } => "verify-tables",
            Command::Crosscheck { .. } => "crosscheck",
            Command::Identities { .. } => "identities",
        }
        .into()
    }
}
