//! Family lookup by name with JSON parameters.

use serde::Deserialize;
use serde_json::Value;

use super::{ClosedFormMetric, ConicalModel, FlatHarmonic, HarmonicKind, Liouville, LogFamily, PoincareDerived};
use crate::error::{Error, Result};

pub fn family_names() -> &'static [&'static str] {
    &["log", "liouville-zn", "poincare", "flat-harmonic", "conical-model"]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LogParams {
    #[serde(rename = "A", default = "one")]
    a: f64,
    #[serde(rename = "B", default = "minus_one")]
    b: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiouvilleParams {
    #[serde(default = "two")]
    n: f64,
    #[serde(rename = "K", default = "minus_one")]
    k: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConicalParams {
    #[serde(default)]
    beta: f64,
    #[serde(rename = "C", default = "one")]
    c: f64,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn minus_one() -> f64 {
    -1.0
}

fn parse<T: for<'de> Deserialize<'de>>(name: &str, params: &Value) -> Result<T> {
    let p = if params.is_null() { Value::Object(Default::default()) } else { params.clone() };
    serde_json::from_value(p).map_err(|e| Error::Invalid(format!("parameters for {name}: {e}")))
}

/// Build a registered family from its name and JSON parameters.
///
/// Missing parameters take defaults: log (A = 1, B = −1), liouville-zn
/// (n = 2, K = −1), flat-harmonic (affine h = −1 − x), conical-model
/// (β = 0, C = 1).
pub fn family_by_name(name: &str, params: &Value) -> Result<Box<dyn ClosedFormMetric>> {
    Ok(match name {
        "log" => {
            let p: LogParams = parse(name, params)?;
            Box::new(LogFamily::new(p.a, p.b)?)
        }
        "liouville-zn" | "liouville" => {
            let p: LiouvilleParams = parse(name, params)?;
            Box::new(Liouville::power(p.n, p.k)?)
        }
        "poincare" => {
            let _: serde_json::Map<String, Value> = parse(name, params)?;
            Box::new(PoincareDerived::new())
        }
        "flat-harmonic" => {
            let kind = match params {
                Value::Null => HarmonicKind::Affine { c0: -1.0, cx: -1.0, cy: 0.0 },
                Value::Object(m) if m.is_empty() => HarmonicKind::Affine { c0: -1.0, cx: -1.0, cy: 0.0 },
                _ => parse(name, params)?,
            };
            Box::new(FlatHarmonic::new(kind)?)
        }
        "conical-model" => {
            let p: ConicalParams = parse(name, params)?;
            Box::new(ConicalModel::new(p.beta, p.c)?)
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown family '{other}' (known: {})",
                family_names().join(", ")
            )))
        }
    })
}
