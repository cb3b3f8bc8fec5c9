use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holotor"))
        .args(args)
        .env_remove("HOLOTOR_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    });
    (v, out.status.code().unwrap())
}

#[test]
fn both_tables_verify() {
    let (v, code) = json(&["verify-tables"]);
    assert_eq!(code, 0);
    let tables = v["results"].as_array().unwrap();
    assert_eq!(tables.len(), 2);
    let absent: Vec<&str> = tables[0]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "ExpectedAbsent")
        .map(|r| r["class"].as_str().unwrap())
        .collect();
    assert_eq!(absent, ["X2", "X3", "X1+X2", "X2+X3"]);
}

#[test]
fn ricci_of_the_sphere_product() {
    let (v, code) = json(&["ricci", "--frame", "s3xs3", "--mu", "5"]);
    assert_eq!(code, 0);
    assert!((v["results"]["scalar"].as_f64().unwrap() - 30.0).abs() < 1e-9);
    assert_eq!(v["results"]["einstein"], true);
}

#[test]
fn non_einstein_frame_fails_verification() {
    assert_eq!(run(&["ricci", "--frame", "s3_padded"]).status.code(), Some(1));
}

#[test]
fn sine_cone_is_nearly_parallel() {
    let (v, code) = json(&["classify-g2", "--fiber", "nk_abstract", "--family", "sine_cone_np:eps=1"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["class"], "X1");
    assert_eq!(r["strict"], true);
    assert_eq!(r["cor35_consistent"], true);
    for p in r["points"].as_array().unwrap() {
        assert!((p["norms"][0].as_f64().unwrap() - 4.0).abs() < 1e-9);
        assert!((p["scalar"].as_f64().unwrap() - 42.0).abs() < 1e-9);
    }
}

#[test]
fn spin7_sine_cone() {
    let (v, code) = json(&["classify-spin7", "--fiber", "np_g2_abstract", "--f", "sin"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["class"], "Y1");
    assert_eq!(v["results"]["lambda"], 7.0);
}

#[test]
fn crosschecks_agree() {
    for (fiber, family) in [("solv6", "solv_cosh"), ("s3xs3", "coclosed_theta:case=ii"), ("solv6_r", "cosh")] {
        let (v, code) = json(&["crosscheck", "--fiber", fiber, "--family", family]);
        assert_eq!(code, 0, "{fiber}");
        assert!(v["results"]["max_deviation"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn frame_file_matches_catalog_name() {
    let frame = holotor::catalog::load_frame("s3xs3").unwrap();
    let path = std::env::temp_dir().join(format!("holotor-s3xs3-{}.json", std::process::id()));
    std::fs::write(&path, frame.to_json()).unwrap();
    let (by_file, code) = json(&["classify-su3", "--frame", path.to_str().unwrap()]);
    let (by_name, _) = json(&["classify-su3", "--frame", "s3xs3"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(by_file["results"]["class"], "W1-⊕W3");
    assert_eq!(by_file["results"]["scalar"], "30");
    assert_eq!(by_file["results"]["norms"], by_name["results"]["norms"]);
    assert_ne!(by_file["inputs_digest"], by_name["inputs_digest"]);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["--json", "identities", "--samples", "30", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--json", "identities", "--samples", "30", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_holotor"))
        .args(["--json", "ricci", "--frame", "solv6", "--mu", "-5"])
        .env("HOLOTOR_TOL", "1e-6")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerance"], 1e-6);
    let out = Command::new(env!("CARGO_BIN_EXE_holotor"))
        .args(["ricci", "--frame", "solv6"])
        .env("HOLOTOR_TOL", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["classify-g2", "--fiber", "nope", "--family", "lcp:f=exp"][..],
        &["classify-g2", "--fiber", "nk_abstract", "--family", "coclosed_theta:case=iii"],
        &["classify-g2", "--fiber", "np_g2_abstract", "--family", "lcp:f=exp"],
        &["classify-spin7", "--fiber", "np_g2_abstract", "--f", "tan"],
        &["verify-tables", "--table", "4"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn human_output_ends_with_verdict() {
    let out = run(&["classify-su3", "--frame", "solv6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("W5"));
    assert!(text.trim_end().ends_with("PASS"));
}
