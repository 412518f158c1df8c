use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;

use cfree::cumulants::VariableSpec;
use cfree::jacobi::JacobiParams;
use cfree::laws::{catalog_law, two_state_normal, LawFile, TwoStateLaw, CATALOG};
use cfree::rational::{parse_list, Rational};

pub const DEFAULT_ORDER: usize = 12;
pub const MAX_ORDER: usize = 64;
pub const ORDER_ENV: &str = "CFREE_ORDER";

/// A comma-separated list of rationals on the command line.
#[derive(Clone, Debug)]
pub struct RatList(pub Vec<Rational>);

pub fn rat_list(s: &str) -> Result<RatList, String> {
    parse_list(s).map(RatList).map_err(|e| e.to_string())
}

/// `--order`, else the environment default, else [`DEFAULT_ORDER`].
pub fn resolve_order(flag: Option<usize>) -> Result<usize> {
    let order = match flag {
        Some(n) => n,
        None => match std::env::var(ORDER_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| anyhow!("{ORDER_ENV} must be a non-negative integer, got `{s}`"))?,
            Err(_) => DEFAULT_ORDER,
        },
    };
    if order > MAX_ORDER {
        bail!("order {order} exceeds the limit {MAX_ORDER}");
    }
    Ok(order)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

pub fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("invalid {what}"))
}

/// What a law argument resolved to.
pub enum LawSource {
    Pair(TwoStateLaw),
    Cumulants(VariableSpec),
    Measure(JacobiParams),
}

fn has_keys(v: &Value, keys: &[&str]) -> bool {
    keys.iter().any(|k| v.get(k).is_some())
}

/// Resolves a catalog name, `normal:a,b`, or a JSON file holding a law pair
/// (`mu`, `nu`), a cumulant spec (`r`, `R`) or Jacobi data (`alpha`, `beta`).
pub fn law_source(spec: &str, order: usize) -> Result<LawSource> {
    if CATALOG.iter().any(|e| e.0 == spec) {
        return Ok(LawSource::Pair(catalog_law(spec, order)?));
    }
    if let Some(ab) = spec.strip_prefix("normal:") {
        let v = parse_list(ab)?;
        let [a, b] = <[Rational; 2]>::try_from(v)
            .map_err(|_| anyhow!("`{spec}`: expected normal:a,b"))?;
        return Ok(LawSource::Pair(two_state_normal(a, b, order)?));
    }
    let path = Path::new(spec);
    if !path.exists() {
        let names: Vec<&str> = CATALOG.iter().map(|e| e.0).collect();
        bail!(
            "`{spec}` is neither a file nor a known law (known: {}, normal:a,b)",
            names.join(", ")
        );
    }
    let v = read_json(path)?;
    if has_keys(&v, &["mu", "nu"]) {
        let file: LawFile = from_value(v, "law file")?;
        Ok(LawSource::Pair(TwoStateLaw::from_file(file, order)?))
    } else if has_keys(&v, &["r", "R"]) {
        Ok(LawSource::Cumulants(from_value(v, "cumulant file")?))
    } else if has_keys(&v, &["alpha", "beta"]) {
        Ok(LawSource::Measure(from_value(v, "Jacobi file")?))
    } else {
        bail!("{spec}: expected keys mu/nu, r/R or alpha/beta")
    }
}

/// A law pair; cumulant specs are turned into laws.
pub fn load_law(spec: &str, order: usize) -> Result<TwoStateLaw> {
    match law_source(spec, order)? {
        LawSource::Pair(l) => Ok(l),
        LawSource::Cumulants(v) => Ok(TwoStateLaw::from_cumulants(None, &padded(&v, order))?),
        LawSource::Measure(_) => bail!("`{spec}` holds a single measure, but a law pair is needed"),
    }
}

/// A single measure; for a law pair this is ν, the law under ψ.
pub fn load_measure(spec: &str, order: usize) -> Result<JacobiParams> {
    match law_source(spec, order)? {
        LawSource::Measure(j) => Ok(j),
        LawSource::Pair(l) => Ok(l.nu().clone()),
        LawSource::Cumulants(v) => Ok(TwoStateLaw::from_cumulants(None, &padded(&v, order))?.nu().clone()),
    }
}

/// Cumulants `1..=order`, missing ones read as zero.
pub fn padded(v: &VariableSpec, order: usize) -> VariableSpec {
    VariableSpec::new(
        v.name.clone(),
        (1..=order).map(|k| v.r(k)).collect(),
        (1..=order).map(|k| v.big_r(k)).collect(),
    )
}
