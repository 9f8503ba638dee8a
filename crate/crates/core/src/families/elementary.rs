//! Log family, the Poincaré-derived metric, metrics from negative harmonic
//! functions and the pure conical model.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use super::{ClosedFormMetric, FamilyInfo, Singularity};
use crate::error::{Error, Result};
use crate::field::Covector;
use crate::mat2::Mat2;
use crate::sk::SkStructure;

fn radial_grad(z: Complex64, d_dr: f64) -> Covector {
    let r = z.norm();
    [d_dr * z.re / r, d_dr * z.im / r]
}

/// h = A log r + B, u = −log(−h), a = 0; g = −(A log|z| + B)|dz|² on the unit disc.
#[derive(Clone, Debug)]
pub struct LogFamily {
    pub a: f64,
    pub b: f64,
    info: FamilyInfo,
}

impl LogFamily {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite() && b < 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("log family needs A ≥ 0, B < 0 (got A = {a}, B = {b})")));
        }
        let (singularity, cubic_order) = if a > 0.0 {
            (Singularity::LogType { n: -1, c: a }, Some(-1))
        } else {
            (Singularity::Power { beta: 0.0, c: -b }, None)
        };
        let info = FamilyInfo {
            family: "log".into(),
            params: json!({ "A": a, "B": b }),
            a: 0.0,
            model_only: false,
            singularity: Some(singularity),
            cubic_order,
            holonomy: Some(Mat2::new(1.0, -2.0 * a * PI / b, 0.0, 1.0)),
            domain: (1e-3, 0.9),
            max_radius: if a > 0.0 { (-b / a).exp() } else { f64::INFINITY },
        };
        Ok(Self { a, b, info })
    }
}

impl SkStructure for LogFamily {
    fn h(&self, z: Complex64) -> f64 {
        self.a * z.norm().ln() + self.b
    }
    fn grad_h(&self, z: Complex64) -> Covector {
        let r2 = z.norm_sqr();
        [self.a * z.re / r2, self.a * z.im / r2]
    }
    fn u(&self, z: Complex64) -> f64 {
        -(-self.h(z)).ln()
    }
    fn grad_u(&self, z: Complex64) -> Covector {
        let h = self.h(z);
        let [hx, hy] = self.grad_h(z);
        [-hx / h, -hy / h]
    }
}

impl ClosedFormMetric for LogFamily {
    fn info(&self) -> &FamilyInfo {
        &self.info
    }
    fn w(&self, z: Complex64) -> f64 {
        -self.h(z)
    }
    fn sk(&self) -> Option<&dyn SkStructure> {
        Some(self)
    }
}

/// g = −|z| log|z| |dz|² from the Poincaré metric of the punctured disc:
/// h = x, u = −log(−r log r), a = 0.
#[derive(Clone, Debug)]
pub struct PoincareDerived {
    info: FamilyInfo,
}

impl PoincareDerived {
    pub fn new() -> Self {
        Self {
            info: FamilyInfo {
                family: "poincare".into(),
                params: json!({}),
                a: 0.0,
                model_only: false,
                singularity: Some(Singularity::LogType { n: 0, c: 1.0 }),
                cubic_order: Some(0),
                holonomy: None,
                domain: (1e-3, 0.5),
                max_radius: 1.0,
            },
        }
    }
}

impl Default for PoincareDerived {
    fn default() -> Self {
        Self::new()
    }
}

impl SkStructure for PoincareDerived {
    fn h(&self, z: Complex64) -> f64 {
        z.re
    }
    fn grad_h(&self, _z: Complex64) -> Covector {
        [1.0, 0.0]
    }
    fn u(&self, z: Complex64) -> f64 {
        let r = z.norm();
        -(-r * r.ln()).ln()
    }
    fn grad_u(&self, z: Complex64) -> Covector {
        let r = z.norm();
        radial_grad(z, -1.0 / r - 1.0 / (r * r.ln()))
    }
}

impl ClosedFormMetric for PoincareDerived {
    fn info(&self) -> &FamilyInfo {
        &self.info
    }
    fn w(&self, z: Complex64) -> f64 {
        let r = z.norm();
        -r * r.ln()
    }
    fn sk(&self) -> Option<&dyn SkStructure> {
        Some(self)
    }
}

/// Negative harmonic functions available to [`FlatHarmonic`].
#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HarmonicKind {
    /// h = −c
    Constant { c: f64 },
    /// h = c0 + cx·x + cy·y
    Affine { c0: f64, cx: f64, cy: f64 },
    /// h = −c e^x cos y
    ExpCos { c: f64 },
    /// h = A log r + B
    LogRadial {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
    },
}

impl HarmonicKind {
    fn eval(&self, z: Complex64) -> (f64, Covector) {
        match *self {
            HarmonicKind::Constant { c } => (-c, [0.0, 0.0]),
            HarmonicKind::Affine { c0, cx, cy } => (c0 + cx * z.re + cy * z.im, [cx, cy]),
            HarmonicKind::ExpCos { c } => {
                let e = z.re.exp();
                let (s, co) = z.im.sin_cos();
                (-c * e * co, [-c * e * co, c * e * s])
            }
            HarmonicKind::LogRadial { a, b } => {
                let r2 = z.norm_sqr();
                (0.5 * a * r2.ln() + b, [a * z.re / r2, a * z.im / r2])
            }
        }
    }

    /// Radius of the largest disc around 0 on which h < 0.
    fn max_radius(&self) -> f64 {
        match *self {
            HarmonicKind::Constant { .. } => f64::INFINITY,
            HarmonicKind::Affine { c0, cx, cy } => {
                let g = cx.hypot(cy);
                if g == 0.0 { f64::INFINITY } else { (-c0 / g).max(0.0) }
            }
            HarmonicKind::ExpCos { .. } => std::f64::consts::FRAC_PI_2,
            HarmonicKind::LogRadial { a, b } => {
                if a > 0.0 { (-b / a).exp() } else { f64::INFINITY }
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            HarmonicKind::Constant { .. } => "constant",
            HarmonicKind::Affine { .. } => "affine",
            HarmonicKind::ExpCos { .. } => "exp-cos",
            HarmonicKind::LogRadial { .. } => "log-radial",
        }
    }
}

/// The metric g = −h|dz|² of a negative harmonic h: triple (h, −log(−h), 0)
/// and connection (1/h)[[0, 0], [∗dh, dh]].
#[derive(Clone, Debug)]
pub struct FlatHarmonic {
    pub kind: HarmonicKind,
    info: FamilyInfo,
}

impl FlatHarmonic {
    pub fn new(kind: HarmonicKind) -> Result<Self> {
        let domain = (1e-3, 0.5);
        let (singularity, cubic_order, holonomy) = match kind {
            HarmonicKind::Constant { c } => {
                if !(c > 0.0) {
                    return Err(Error::Domain(format!("constant h = −c needs c > 0 (got {c})")));
                }
                (Singularity::Power { beta: 0.0, c }, None, Mat2::IDENTITY)
            }
            HarmonicKind::Affine { c0, cx, cy } => {
                let n = if cx == 0.0 && cy == 0.0 { None } else { Some(0) };
                (Singularity::Power { beta: 0.0, c: -c0 }, n, Mat2::IDENTITY)
            }
            HarmonicKind::ExpCos { c } => {
                if !(c > 0.0) {
                    return Err(Error::Domain(format!("h = −c e^x cos y needs c > 0 (got {c})")));
                }
                (Singularity::Power { beta: 0.0, c }, Some(0), Mat2::IDENTITY)
            }
            HarmonicKind::LogRadial { a, b } => {
                let lf = super::LogFamily::new(a, b)?;
                let i = lf.info;
                (i.singularity.expect("set"), i.cubic_order, i.holonomy.expect("set"))
            }
        };
        let params = match kind {
            HarmonicKind::Constant { c } | HarmonicKind::ExpCos { c } => json!({ "kind": kind.name(), "c": c }),
            HarmonicKind::Affine { c0, cx, cy } => json!({ "kind": "affine", "c0": c0, "cx": cx, "cy": cy }),
            HarmonicKind::LogRadial { a, b } => json!({ "kind": "log-radial", "A": a, "B": b }),
        };
        let me = Self {
            kind,
            info: FamilyInfo {
                family: "flat-harmonic".into(),
                params,
                a: 0.0,
                model_only: false,
                singularity: Some(singularity),
                cubic_order,
                holonomy: Some(holonomy),
                domain,
                max_radius: kind.max_radius(),
            },
        };
        super::check_positive_on(&me, domain.0, domain.1)
            .map_err(|_| Error::Domain(format!("h = {} is not negative on the default domain", kind.name())))?;
        Ok(me)
    }
}

impl SkStructure for FlatHarmonic {
    fn h(&self, z: Complex64) -> f64 {
        self.kind.eval(z).0
    }
    fn grad_h(&self, z: Complex64) -> Covector {
        self.kind.eval(z).1
    }
    fn u(&self, z: Complex64) -> f64 {
        -(-self.h(z)).ln()
    }
    fn grad_u(&self, z: Complex64) -> Covector {
        let (h, [hx, hy]) = self.kind.eval(z);
        [-hx / h, -hy / h]
    }
}

impl ClosedFormMetric for FlatHarmonic {
    fn info(&self) -> &FamilyInfo {
        &self.info
    }
    fn w(&self, z: Complex64) -> f64 {
        -self.h(z)
    }
    fn sk(&self) -> Option<&dyn SkStructure> {
        Some(self)
    }
}

/// w = C|z|^β; a fit target, not special Kähler by itself.
#[derive(Clone, Debug)]
pub struct ConicalModel {
    pub beta: f64,
    pub c: f64,
    info: FamilyInfo,
}

impl ConicalModel {
    pub fn new(beta: f64, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && beta.is_finite()) {
            return Err(Error::Domain(format!("conical model needs C > 0 (got C = {c}, β = {beta})")));
        }
        Ok(Self {
            beta,
            c,
            info: FamilyInfo {
                family: "conical-model".into(),
                params: json!({ "beta": beta, "C": c }),
                a: 0.0,
                model_only: true,
                singularity: Some(Singularity::Power { beta, c }),
                cubic_order: None,
                holonomy: None,
                domain: (1e-3, 0.9),
                max_radius: f64::INFINITY,
            },
        })
    }
}

impl ClosedFormMetric for ConicalModel {
    fn info(&self) -> &FamilyInfo {
        &self.info
    }
    fn w(&self, z: Complex64) -> f64 {
        self.c * z.norm().powf(self.beta)
    }
    fn potential(&self, z: Complex64) -> f64 {
        -self.c.ln() - self.beta * z.norm().ln()
    }
}
