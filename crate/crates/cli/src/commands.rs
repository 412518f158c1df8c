use std::io::{self, Write};

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use cfree::cumulants::{moments_to_free_cumulants, moments_to_twostate_cumulants, phi_moments, psi_moments};
use cfree::jacobi::{jacobi_from_moments, moments_from_jacobi, JacobiParams};
use cfree::laws::{cfree_convolve, cfree_power, free_convolve, two_state_normal, TwoStateLaw};
use cfree::ncpart::{count_nc, enumerate_nc, DEFAULT_MAX_N};
use cfree::{BlockKind, Rational};

use crate::input::{from_value, law_source, load_law, load_measure, padded, read_json, resolve_order, LawSource};
use crate::{ConvolveArgs, ConvolveOp, CumulantsArgs, Format, JacobiArgs, MomentsArgs, NcArgs};

pub fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes `header` and `rows` as CSV to stdout.
pub fn print_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn nc(args: &NcArgs) -> Result<bool> {
    if args.count_only {
        let count = count_nc(args.n, DEFAULT_MAX_N)?;
        if args.json {
            print_json(&json!({ "n": args.n, "count": count }))?;
        } else {
            println!("{count}");
        }
        return Ok(true);
    }
    let parts = enumerate_nc(args.n)?;
    if args.json {
        print_json(&parts)?;
        return Ok(true);
    }
    let mut out = io::stdout().lock();
    for p in &parts {
        let labels: Vec<&str> = p
            .labels()
            .iter()
            .map(|k| match k {
                BlockKind::Outer => "outer",
                BlockKind::Inner => "inner",
            })
            .collect();
        writeln!(out, "{}\t{}", p.partition(), labels.join(","))?;
    }
    Ok(true)
}

fn moment_rows(phi: &[Rational], psi: &[Rational]) -> Vec<Vec<String>> {
    phi.iter()
        .zip(psi)
        .enumerate()
        .map(|(n, (x, y))| vec![n.to_string(), x.to_string(), y.to_string()])
        .collect()
}

fn print_table(header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", header.join("\t"))?;
    for row in rows {
        writeln!(out, "{}", row.join("\t"))?;
    }
    Ok(())
}

fn emit_moments(phi: &[Rational], psi: &[Rational], format: Format) -> Result<()> {
    if format.json {
        print_json(&json!({ "phi": phi, "psi": psi }))
    } else if format.csv {
        print_csv(&["n", "phi", "psi"], moment_rows(phi, psi))
    } else {
        print_table(&["n", "phi", "psi"], &moment_rows(phi, psi))
    }
}

pub fn moments(args: &MomentsArgs) -> Result<bool> {
    let order = resolve_order(args.order)?;
    let (phi, psi) = match (&args.law.law, &args.law.a, &args.law.b) {
        (Some(spec), _, _) => match law_source(spec, order)? {
            LawSource::Pair(l) => (l.phi_moments().to_vec(), l.psi_moments().to_vec()),
            LawSource::Cumulants(v) => {
                let v = padded(&v, order);
                (phi_moments(&v, order)?, psi_moments(&v, order)?)
            }
            LawSource::Measure(j) => {
                let m = moments_from_jacobi(&j, order)?;
                (m.clone(), m)
            }
        },
        (None, Some(a), Some(b)) => {
            let l = two_state_normal(a.clone(), b.clone(), order)?;
            (l.phi_moments().to_vec(), l.psi_moments().to_vec())
        }
        _ => bail!("give --law, or --a and --b"),
    };
    emit_moments(&phi[..=order], &psi[..=order], args.format)?;
    Ok(true)
}

#[derive(Deserialize)]
struct MomentsFile {
    phi: Option<Vec<Rational>>,
    psi: Vec<Rational>,
}

pub fn cumulants(args: &CumulantsArgs) -> Result<bool> {
    let (phi, psi) = match &args.moments_file {
        Some(path) => {
            let f: MomentsFile = from_value(read_json(path)?, "moments file")?;
            (f.phi, f.psi)
        }
        None => (
            args.phi.as_ref().map(|l| l.0.clone()),
            args.psi.as_ref().ok_or_else(|| anyhow!("give --psi, or --moments-file"))?.0.clone(),
        ),
    };
    let (free, two_state) = match &phi {
        Some(phi) => {
            let (big_r, r) = moments_to_twostate_cumulants(phi, &psi)?;
            (r, Some(big_r))
        }
        None => (moments_to_free_cumulants(&psi)?, None),
    };
    let rows: Vec<Vec<String>> = free
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![(i + 1).to_string(), r.to_string()];
            if let Some(big) = &two_state {
                row.push(big[i].to_string());
            }
            row
        })
        .collect();
    let header: &[&str] = if two_state.is_some() { &["k", "r", "R"] } else { &["k", "r"] };
    if args.format.json {
        match &two_state {
            Some(big) => print_json(&json!({ "r": free, "R": big }))?,
            None => print_json(&json!({ "r": free }))?,
        }
    } else if args.format.csv {
        print_csv(header, rows)?;
    } else {
        print_table(header, &rows)?;
    }
    Ok(true)
}

pub fn jacobi(args: &JacobiArgs) -> Result<bool> {
    if let Some(m) = &args.moments {
        let fit = jacobi_from_moments(&m.0)?;
        let p = &fit.params;
        if args.format.json {
            print_json(&json!({
                "alpha": p.alphas(),
                "beta": p.betas(),
                "terminated": p.terminated(),
                "negative_pivot": fit.negative_pivot,
            }))?;
        } else {
            let rows = jacobi_rows(p);
            if args.format.csv {
                print_csv(&["n", "alpha", "beta"], rows)?;
            } else {
                print_table(&["n", "alpha", "beta"], &rows)?;
                if let Some(i) = fit.negative_pivot {
                    eprintln!("warning: negative Hankel pivot at level {i}; not the moments of a measure");
                }
            }
        }
        return Ok(true);
    }
    let params = match (&args.alpha, &args.beta, &args.jacobi_file) {
        (Some(a), Some(b), _) => JacobiParams::new(a.0.clone(), b.0.clone())?,
        (_, _, Some(path)) => from_value(read_json(path)?, "Jacobi file")?,
        _ => bail!("give --moments, --alpha with --beta, or --jacobi-file"),
    };
    let order = resolve_order(args.order)?;
    let m = moments_from_jacobi(&params, order)?;
    if args.format.json {
        print_json(&json!({ "moments": m }))?;
    } else {
        let rows: Vec<Vec<String>> = m.iter().enumerate().map(|(n, x)| vec![n.to_string(), x.to_string()]).collect();
        if args.format.csv {
            print_csv(&["n", "moment"], rows)?;
        } else {
            print_table(&["n", "moment"], &rows)?;
        }
    }
    Ok(true)
}

fn jacobi_rows(p: &JacobiParams) -> Vec<Vec<String>> {
    (0..p.levels())
        .map(|i| vec![i.to_string(), p.alpha(i).to_string(), p.beta(i).to_string()])
        .collect()
}

pub fn convolve(args: &ConvolveArgs) -> Result<bool> {
    let order = resolve_order(args.order)?;
    let right = || args.right.as_deref().ok_or_else(|| anyhow!("--op {:?} needs --right", args.op));
    match args.op {
        ConvolveOp::Free => {
            let j = free_convolve(&load_measure(&args.left, order)?, &load_measure(right()?, order)?, order)?;
            if args.moments {
                let m = moments_from_jacobi(&j, order)?;
                print_json(&json!({ "measure": j, "moments": m }))?;
            } else {
                print_json(&j)?;
            }
        }
        ConvolveOp::Cfree | ConvolveOp::Power => {
            let left = load_law(&args.left, order)?;
            let law = if args.op == ConvolveOp::Cfree {
                if args.t.is_some() {
                    bail!("--t applies to --op power only");
                }
                cfree_convolve(&left, &load_law(right()?, order)?)?
            } else {
                if args.right.is_some() {
                    bail!("--op power takes a single law");
                }
                let t = args.t.as_ref().ok_or_else(|| anyhow!("--op power needs --t"))?;
                cfree_power(&left, t)?
            };
            emit_law(&law, args.moments)?;
        }
    }
    Ok(true)
}

fn emit_law(law: &TwoStateLaw, with_moments: bool) -> Result<()> {
    if with_moments {
        print_json(&json!({
            "law": law.to_file(),
            "phi": law.phi_moments(),
            "psi": law.psi_moments(),
        }))
    } else {
        print_json(&law.to_file())
    }
}
