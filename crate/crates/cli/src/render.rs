//! Aligned plain-text rendering of the JSON results.

use serde_json::Value;

fn num(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) {
                format!("{x:.3e}")
            } else {
                format!("{x:.6}")
            }
        }
        Value::Null => "–".into(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(num).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

fn fields(v: &Value, keys: &[&str]) -> String {
    keys.iter()
        .filter_map(|k| v.get(*k).map(|x| format!("{k:<18} {}\n", num(x))))
        .collect()
}

fn points(v: &Value, extra: Option<&str>) -> String {
    let rows: Vec<Vec<String>> = v["points"]
        .as_array()
        .map(|ps| {
            ps.iter()
                .map(|p| {
                    let mut r = vec![num(&p["t"]), num(&p["norms"]), num(&p["scalar"])];
                    r.extend(extra.map(|k| num(&p[k])));
                    r
                })
                .collect()
        })
        .unwrap_or_default();
    let mut header = vec!["t", "torsion norms", "Scal"];
    header.extend(extra);
    table(&header, &rows)
}

pub fn human(command: &str, v: &Value) -> String {
    match command {
        "classify-su3" => {
            fields(v, &["frame", "class", "names", "coupled_c", "pi0", "sigma0", "scalar"])
                + &fields(&v["norms"], &["pi0", "sigma0", "pi1", "nu1", "pi2", "sigma2", "nu3"])
        }
        "classify-g2" => {
            fields(
                v,
                &["fiber", "family", "f", "class", "expected_class", "lambda", "scalar_deviation", "cor35_consistent"],
            ) + &points(v, Some("cor35_residuals"))
        }
        "classify-spin7" => {
            fields(v, &["fiber", "f", "class", "lambda", "scalar_deviation"]) + &points(v, None)
        }
        "ricci" => fields(v, &["frame", "mu", "fitted_mu", "scalar", "deviation", "einstein"]),
        "crosscheck" => {
            let rows: Vec<Vec<String>> = v["points"]
                .as_array()
                .map(|ps| {
                    ps.iter()
                        .map(|p| {
                            vec![
                                num(&p["t"]),
                                num(&p["deviation"]),
                                num(&p["scalar_closed"]),
                                num(&p["scalar_generic"]),
                            ]
                        })
                        .collect()
                })
                .unwrap_or_default();
            fields(v, &["fiber", "family", "max_deviation"])
                + &table(&["t", "deviation per component", "Scal closed", "Scal generic"], &rows)
        }
        "verify-tables" => {
            let mut out = String::new();
            for t in v.as_array().into_iter().flatten() {
                out += &format!("Table {}\n", num(&t["table"]));
                let mut rows = Vec::new();
                for r in t["rows"].as_array().into_iter().flatten() {
                    let status = num(&r["status"]);
                    let configs = r["configs"].as_array().cloned().unwrap_or_default();
                    if configs.is_empty() {
                        rows.push(vec![num(&r["class"]), status.clone(), String::new(), String::new(), String::new(), String::new(), String::new(), num(&r["note"])]);
                    }
                    for c in configs {
                        rows.push(vec![
                            num(&r["class"]),
                            status.clone(),
                            format!("{} {}", num(&c["fiber"]), num(&c["family"])),
                            num(&c["mu"]),
                            num(&c["f"]),
                            num(&c["lambda"]),
                            format!("{} [{}]", num(&c["observed_class"]), num(&c["observed_torsion"])),
                            num(&c["scalar_deviation"]),
                        ]);
                    }
                }
                out += &table(
                    &["class", "status", "configuration", "μ", "f", "λ", "observed", "|Scal−nλ| / note"],
                    &rows,
                );
            }
            out
        }
        "identities" => {
            let rows: Vec<Vec<String>> = v["results"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|r| {
                    vec![
                        num(&r["name"]),
                        num(&r["statement"]),
                        num(&r["samples"]),
                        num(&r["exact_failures"]),
                        num(&r["max_numeric_residual"]),
                        if r["pass"] == Value::Bool(true) { "pass" } else { "FAIL" }.into(),
                    ]
                })
                .collect();
            format!("seed {}\n", num(&v["seed"]))
                + &table(&["identity", "statement", "samples", "exact fails", "numeric", ""], &rows)
        }
        _ => format!("{v}\n"),
    }
}
