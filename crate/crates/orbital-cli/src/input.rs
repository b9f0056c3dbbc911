//! Parsers for the command-line argument formats.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use orbital_core::bruteforce::SplitGamma;
use orbital_core::endoscopy::FiniteOrderTorusPoint;
use orbital_core::fan::{Fan, TorusDivisor};
use orbital_core::field::Rational;
use orbital_core::rootdata::{Levi, RootDatum, RootDatumSpec};
use orbital_core::springer::ValuationProfile;
use serde_json::Value;

/// Reads a root datum from a JSON file with `rank`, `simple_roots`,
/// `simple_coroots` and an optional `frobenius` matrix.
pub fn read_group(path: &Path) -> Result<RootDatum> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: RootDatumSpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(RootDatum::new(&spec)?)
}

/// `T`, `G`, or a comma-separated list of 1-based simple root indices.
pub fn parse_levi(datum: &RootDatum, text: &str) -> Result<Levi> {
    match text.trim() {
        "T" | "t" => Ok(Levi::torus()),
        "G" | "g" => Ok(datum.group_levi()),
        list => {
            let indices = list
                .split(',')
                .map(|x| {
                    let i: usize = x.trim().parse().with_context(|| format!("bad simple root index {x:?}"))?;
                    i.checked_sub(1).ok_or_else(|| anyhow!("simple root indices start at 1"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(datum.standard_levi(&indices)?)
        }
    }
}

/// A single integer (constant profile) or one value per positive root.
pub fn parse_profile(datum: &RootDatum, text: &str) -> Result<ValuationProfile> {
    let values = text
        .split(',')
        .map(|x| x.trim().parse::<u32>().with_context(|| format!("bad valuation {x:?}")))
        .collect::<Result<Vec<_>>>()?;
    match values.as_slice() {
        [c] => Ok(ValuationProfile::constant(datum, *c)),
        _ => Ok(ValuationProfile::new(datum, values)?),
    }
}

fn read_json_arg(text: &str) -> Result<Value> {
    let body = match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => text.to_string(),
    };
    serde_json::from_str(&body).with_context(|| format!("parsing JSON {body:?}"))
}

fn divisor_from_value(fan: &Fan, value: &Value) -> Result<TorusDivisor> {
    match value {
        Value::Object(map) => {
            let mut labels = BTreeMap::new();
            for (k, v) in map {
                let n = v.as_i64().ok_or_else(|| anyhow!("coefficient of {k:?} is not an integer"))?;
                labels.insert(k.clone(), n);
            }
            Ok(fan.divisor_from_labels(&labels)?)
        }
        Value::Array(items) => {
            let values = items
                .iter()
                .map(|v| v.as_i64().ok_or_else(|| anyhow!("divisor coefficients must be integers")))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != fan.num_rays() {
                bail!("{} coefficients for {} rays", values.len(), fan.num_rays());
            }
            Ok(TorusDivisor::from_integers(&values))
        }
        _ => bail!("a divisor is a JSON object keyed by ray labels or an array in ray order"),
    }
}

/// A divisor as inline JSON or `@file`: an object keyed by ray labels
/// (missing rays count as zero) or an array in ray order.
pub fn parse_divisor(fan: &Fan, text: &str) -> Result<TorusDivisor> {
    divisor_from_value(fan, &read_json_arg(text)?)
}

/// A JSON array of divisors, inline or `@file`.
pub fn parse_divisor_family(fan: &Fan, text: &str) -> Result<Vec<TorusDivisor>> {
    match read_json_arg(text)? {
        Value::Array(items) if items.iter().all(|v| !v.is_number()) => items.iter().map(|v| divisor_from_value(fan, v)).collect(),
        _ => bail!("a divisor family is a JSON array of divisors"),
    }
}

/// Comma-separated rationals, the values of `s` on the coordinate cocharacters.
pub fn parse_torus_point(datum: &RootDatum, text: &str) -> Result<FiniteOrderTorusPoint> {
    let values = text
        .split(',')
        .map(|x| x.trim().parse::<Rational>().map_err(|e| anyhow!("bad rational {x:?}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != datum.rank() {
        bail!("s needs {} values, got {}", datum.rank(), values.len());
    }
    Ok(FiniteOrderTorusPoint::new(values))
}

/// Per SL(2) factor, `d` or `d:c` for the eigenvalues `±c ε^d`.
pub fn parse_gamma(text: &str) -> Result<SplitGamma> {
    let factors = text
        .split(',')
        .map(|item| {
            let mut parts = item.trim().splitn(2, ':');
            let d: u32 = parts.next().unwrap_or("").parse().with_context(|| format!("bad valuation in {item:?}"))?;
            let c: i64 = match parts.next() {
                Some(c) => c.parse().with_context(|| format!("bad unit in {item:?}"))?,
                None => 1,
            };
            Ok((d, c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplitGamma { factors })
}
