//! Conjugacy classes in SL(2,ℝ) and the classes allowed at a singularity.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mat2::Mat2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonodromyTag {
    Trivial,
    MinusIdentity,
    ParabolicPlus,
    ParabolicMinus,
    Elliptic,
    /// |trace| > 2: never the monodromy of a singularity of the kind studied here.
    Hyperbolic,
}

impl MonodromyTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MonodromyTag::Trivial => "trivial",
            MonodromyTag::MinusIdentity => "minus-identity",
            MonodromyTag::ParabolicPlus => "parabolic-plus",
            MonodromyTag::ParabolicMinus => "parabolic-minus",
            MonodromyTag::Elliptic => "elliptic",
            MonodromyTag::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyClass {
    pub tag: MonodromyTag,
    pub trace: f64,
    /// β₀ ∈ (0, 1) with cos πβ₀ = trace/2 (elliptic only).
    pub beta_mod2: Option<f64>,
    /// β mod 2 up to sign: {β₀, 2 − β₀} (elliptic only).
    pub beta_candidates: Vec<f64>,
}

pub fn classify(m: &Mat2, tol: f64) -> Result<MonodromyClass> {
    let det = m.det();
    if !((det - 1.0).abs() <= tol) {
        return Err(Error::Invalid(format!(
            "not in SL(2,ℝ): det = {det} (tolerance {tol:e})"
        )));
    }
    let t = m.trace();
    let (tag, beta) = if t.abs() < 2.0 - tol {
        (MonodromyTag::Elliptic, Some((0.5 * t).acos() / PI))
    } else if (t - 2.0).abs() <= tol {
        let tag = if m.dist(&Mat2::IDENTITY) <= tol {
            MonodromyTag::Trivial
        } else {
            MonodromyTag::ParabolicPlus
        };
        (tag, None)
    } else if (t + 2.0).abs() <= tol {
        let tag = if m.dist(&Mat2::IDENTITY.scale(-1.0)) <= tol {
            MonodromyTag::MinusIdentity
        } else {
            MonodromyTag::ParabolicMinus
        };
        (tag, None)
    } else {
        (MonodromyTag::Hyperbolic, None)
    };
    Ok(MonodromyClass {
        tag,
        trace: t,
        beta_mod2: beta,
        beta_candidates: beta.map_or(vec![], |b| vec![b, 2.0 - b]),
    })
}

/// Classes allowed for a singularity with exponent β (β := N + 1 for log type).
#[derive(Clone, Debug, Serialize)]
pub struct PredictedClass {
    pub beta: f64,
    pub tags: Vec<MonodromyTag>,
    /// 2cos πβ for non-integer β.
    pub trace: Option<f64>,
}

const INTEGER_TOL: f64 = 1e-9;

fn nearest_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= INTEGER_TOL).then_some(r as i64)
}

pub fn predicted_class(beta: f64, _is_log_type: bool) -> PredictedClass {
    // the log case enters only through the convention β = N + 1, an integer
    let tags = match nearest_integer(beta) {
        None => vec![MonodromyTag::Elliptic],
        Some(k) if k.rem_euclid(2) == 0 => vec![MonodromyTag::Trivial, MonodromyTag::ParabolicPlus],
        Some(_) => vec![MonodromyTag::MinusIdentity, MonodromyTag::ParabolicMinus],
    };
    let trace = (tags[0] == MonodromyTag::Elliptic).then(|| 2.0 * (PI * beta).cos());
    PredictedClass { beta, tags, trace }
}

impl PredictedClass {
    /// Whether a computed class is allowed (elliptic traces compared to `tol`).
    pub fn admits(&self, c: &MonodromyClass, tol: f64) -> bool {
        self.tags.contains(&c.tag) && self.trace.map_or(true, |t| (t - c.trace).abs() <= tol)
    }
}

/// Whether β ∈ ½ℤ ∪ ⅓ℤ (within 10⁻⁹).
pub fn sp2z_check(beta: f64) -> bool {
    nearest_integer(2.0 * beta).is_some() || nearest_integer(3.0 * beta).is_some()
}
