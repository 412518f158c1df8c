use std::io::{self, Write};

use anyhow::{bail, Result};
use serde_json::Value;

use cfree::cumulants::VariableSpec;
use cfree::jacobi::JacobiParams;
use cfree::verify::{run_check, CheckRow, TheoremCheckSpec, VerificationReport, PARAMETERS};
use cfree::Rational;

use crate::commands::{print_csv, print_json};
use crate::input::{from_value, law_source, padded, read_json, resolve_order, LawSource};
use crate::VerifyArgs;

// Headroom for checks that read cumulants or Jacobi levels past the order.
const INPUT_SLACK: usize = 8;

fn rational_value(name: &str, v: Value) -> Result<Rational> {
    match v {
        Value::String(s) => Ok(s.parse()?),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or_default())),
        other => bail!("parameter `{name}` must be a rational string such as \"3/4\", got {other}"),
    }
}

/// Fills `spec` from a JSON object of parameters and inputs.
fn apply_params_file(spec: &mut TheoremCheckSpec, file: Value, order_flag: &mut Option<usize>) -> Result<()> {
    let Value::Object(map) = file else {
        bail!("the parameter file must hold a JSON object");
    };
    for (key, value) in map {
        match key.as_str() {
            k if PARAMETERS.contains(&k) => {
                spec.params.insert(key.clone(), rational_value(&key, value)?);
            }
            "theorem" => {
                let t: cfree::verify::Theorem = from_value(value, "theorem")?;
                if t != spec.theorem {
                    bail!("the parameter file is for {t}, not {}", spec.theorem);
                }
            }
            "law" => spec.law = Some(from_value(value, "law")?),
            "variable" => spec.variable = Some(from_value(value, "variable")?),
            "jacobi" => spec.jacobi = Some(from_value(value, "jacobi")?),
            "perturbation" => spec.perturbation = Some(from_value(value, "perturbation")?),
            "order" | "max_n" => {
                if order_flag.is_none() {
                    *order_flag = Some(from_value(value, "order")?);
                }
            }
            other => bail!("unknown key `{other}` in the parameter file"),
        }
    }
    Ok(())
}

fn build_spec(args: &VerifyArgs) -> Result<TheoremCheckSpec> {
    let mut order_flag = args.order;
    let file = args.params.as_deref().map(read_json).transpose()?;
    let theorem = match (args.theorem, file.as_ref().and_then(|f| f.get("theorem"))) {
        (Some(t), _) => t,
        (None, Some(v)) => from_value(v.clone(), "theorem")?,
        (None, None) => bail!("no theorem given: pass --theorem or set `theorem` in the parameter file"),
    };
    let mut spec = TheoremCheckSpec::new(theorem, 0);
    if let Some(file) = file {
        apply_params_file(&mut spec, file, &mut order_flag)?;
    }
    let order = resolve_order(order_flag)?;
    spec.max_n = order;
    let flags = [
        ("a", &args.a),
        ("b", &args.b),
        ("alpha", &args.alpha),
        ("a_tilde", &args.a_tilde),
        ("b_tilde", &args.b_tilde),
        ("t", &args.t),
        ("gamma", &args.gamma),
        ("k", &args.k),
    ];
    for (name, value) in flags {
        if let Some(v) = value {
            spec.params.insert(name.to_string(), v.clone());
        }
    }
    let input_order = order + INPUT_SLACK;
    if let Some(law) = &args.law {
        match law_source(law, input_order)? {
            LawSource::Pair(l) => spec.law = Some(l.to_file()),
            LawSource::Cumulants(v) => spec.variable = Some(v),
            LawSource::Measure(j) => spec.jacobi = Some(j),
        }
    }
    if let Some(path) = &args.variable_file {
        spec.variable = Some(from_value::<VariableSpec>(read_json(path)?, "cumulant file")?);
    }
    if let (Some(a), Some(b)) = (&args.jacobi_alpha, &args.jacobi_beta) {
        spec.jacobi = Some(JacobiParams::new(a.0.clone(), b.0.clone())?);
    }
    if let Some(v) = &spec.variable {
        let needed = v.order().max(input_order);
        spec.variable = Some(padded(v, needed));
    }
    if let Some(p) = &args.perturb {
        spec.perturbation = Some(p.clone());
    }
    Ok(spec)
}

fn csv_rows(report: &VerificationReport) -> Vec<Vec<String>> {
    let row = |r: &CheckRow, suffix: &str| {
        vec![
            format!("{}:{}{suffix}", report.theorem, r.identity),
            r.n.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.pass.to_string(),
        ]
    };
    let mut rows: Vec<Vec<String>> = report.rows.iter().map(|r| row(r, "")).collect();
    if let Some(c) = &report.control {
        rows.extend(c.rows.iter().map(|r| row(r, ":perturbed")));
    }
    rows
}

fn print_text(report: &VerificationReport) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{} at order {}", report.theorem, report.max_n)?;
    for (k, v) in &report.params {
        writeln!(out, "  {k} = {v}")?;
    }
    let width = report.rows.iter().map(|r| r.identity.len()).max().unwrap_or(0);
    for r in &report.rows {
        let mark = if r.pass { "ok  " } else { "FAIL" };
        writeln!(out, "{mark} {:width$} n={:<3} {} = {}", r.identity, r.n, r.lhs, r.rhs)?;
    }
    let verdict = match report.verdict {
        cfree::verify::Verdict::Pass => "pass",
        cfree::verify::Verdict::Fail => "fail",
    };
    let failed = report.failures().count();
    writeln!(out, "verdict: {verdict} ({} rows, {failed} failed)", report.rows.len())?;
    if let Some(c) = &report.control {
        match &c.first_failure {
            Some(f) => writeln!(
                out,
                "control {}: control-ok, first failure {} at n={}",
                c.perturbation, f.identity, f.n
            )?,
            None => writeln!(out, "control {}: control-missed", c.perturbation)?,
        }
    }
    Ok(())
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    let spec = build_spec(args)?;
    let report = run_check(&spec)?;
    if args.format.json {
        print_json(&report)?;
    } else if args.format.csv {
        print_csv(&["theorem", "n", "lhs", "rhs", "pass"], csv_rows(&report))?;
    } else {
        print_text(&report)?;
    }
    Ok(report.success())
}
