//! Special Kähler metrics from constant negative curvature.
//!
//! For a meromorphic f and curvature κ < 0, `w̃ = 4|f′|²/(1 + κ|f|²)²` has
//! constant curvature κ. With u = ½ log w̃ and h = √(−κ)·x the triple
//! (h, u, 0) solves Δu = |dh|² e^{2u}, so `w = 1/√w̃ = |1 + κ|f|²| / (2|f′|)`
//! is special Kähler with constant Ξ₀ = −i√(−κ)/4.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{check_positive_on, ClosedFormMetric, FamilyInfo, Singularity};
use crate::error::{Error, Result};
use crate::field::Covector;
use crate::sk::SkStructure;

/// A meromorphic function with its first two derivatives.
pub trait Meromorphic: Send + Sync {
    fn value(&self, z: Complex64) -> Complex64;
    fn d1(&self, z: Complex64) -> Complex64;
    fn d2(&self, z: Complex64) -> Complex64;
    fn describe(&self) -> Value;
    /// Exponent β of w at the origin and its constant, if f is of power type there.
    fn power_at_origin(&self, _kappa: f64) -> Option<(f64, f64)> {
        None
    }
    /// Radius of the largest disc on which 1 + κ|f|² > 0 (∞ if unknown).
    fn max_radius(&self, _kappa: f64) -> f64 {
        f64::INFINITY
    }
}

/// f(z) = s·zⁿ (principal branch for non-integer n; all metric quantities are radial).
#[derive(Clone, Copy, Debug)]
pub struct PowerMap {
    pub n: f64,
    pub scale: f64,
}

impl Meromorphic for PowerMap {
    fn value(&self, z: Complex64) -> Complex64 {
        self.scale * z.powf(self.n)
    }
    fn d1(&self, z: Complex64) -> Complex64 {
        self.scale * self.n * z.powf(self.n - 1.0)
    }
    fn d2(&self, z: Complex64) -> Complex64 {
        self.scale * self.n * (self.n - 1.0) * z.powf(self.n - 2.0)
    }
    fn describe(&self) -> Value {
        json!({ "f": "power", "n": self.n, "scale": self.scale })
    }
    fn power_at_origin(&self, _kappa: f64) -> Option<(f64, f64)> {
        Some((1.0 - self.n, 1.0 / (2.0 * self.scale.abs() * self.n.abs())))
    }
    fn max_radius(&self, kappa: f64) -> f64 {
        // |s| rⁿ < 1/√(−κ)
        (1.0 / (self.scale.abs() * (-kappa).sqrt())).powf(1.0 / self.n)
    }
}

/// f(z) = (az + b)/(cz + d), ad − bc ≠ 0.
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }
}

impl Meromorphic for Mobius {
    fn value(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
    fn d1(&self, z: Complex64) -> Complex64 {
        self.det() / (self.c * z + self.d).powi(2)
    }
    fn d2(&self, z: Complex64) -> Complex64 {
        -2.0 * self.c * self.det() / (self.c * z + self.d).powi(3)
    }
    fn describe(&self) -> Value {
        let p = |w: Complex64| json!([w.re, w.im]);
        json!({ "f": "mobius", "a": p(self.a), "b": p(self.b), "c": p(self.c), "d": p(self.d) })
    }
    fn power_at_origin(&self, kappa: f64) -> Option<(f64, f64)> {
        // regular at 0 when f is: β = 0, C = w(0)
        let z = Complex64::new(0.0, 0.0);
        if self.d.norm() == 0.0 {
            return None;
        }
        let (f, f1) = (self.value(z), self.d1(z));
        Some((0.0, (1.0 + kappa * f.norm_sqr()).abs() / (2.0 * f1.norm())))
    }
}

/// ∇log|g| for holomorphic g with g′/g = q: (Re q, −Im q).
fn grad_log_abs(q: Complex64) -> Covector {
    [q.re, -q.im]
}

pub struct Liouville {
    f: Box<dyn Meromorphic>,
    /// curvature of the auxiliary metric, κ < 0
    pub kappa: f64,
    info: FamilyInfo,
}

impl Liouville {
    pub fn new(f: Box<dyn Meromorphic>, kappa: f64, domain: (f64, f64)) -> Result<Self> {
        if !(kappa < 0.0 && kappa.is_finite()) {
            return Err(Error::Domain(format!("curvature must be negative (got {kappa})")));
        }
        let singularity = f
            .power_at_origin(kappa)
            .map(|(beta, c)| Singularity::Power { beta, c });
        let info = FamilyInfo {
            family: "liouville-zn".into(),
            params: json!({ "f": f.describe(), "K": kappa }),
            a: 0.0,
            model_only: false,
            singularity,
            cubic_order: Some(0),
            holonomy: None,
            domain,
            max_radius: f.max_radius(kappa),
        };
        let me = Self { f, kappa, info };
        me.check_domain(domain.0, domain.1)?;
        Ok(me)
    }

    /// f(z) = zⁿ with curvature κ.
    pub fn power(n: f64, kappa: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Domain(format!("power map needs n > 0 (got {n})")));
        }
        Self::new(Box::new(PowerMap { n, scale: 1.0 }), kappa, (1e-3, 0.8))
    }

    fn check_domain(&self, r_in: f64, r_out: f64) -> Result<()> {
        for a in 0..=16 {
            let r = r_in * (r_out / r_in).powf(a as f64 / 16.0);
            for b in 0..32 {
                let z = Complex64::from_polar(r, std::f64::consts::TAU * b as f64 / 32.0);
                if self.f.d1(z).norm() == 0.0 || !self.f.d1(z).norm().is_finite() {
                    return Err(Error::Domain(format!("f′ vanishes or blows up at {z}")));
                }
                if !(self.factor(z) > 0.0) {
                    return Err(Error::Domain(format!(
                        "1 + κ|f|² is not positive at {z}; shrink the domain"
                    )));
                }
            }
        }
        check_positive_on(self, r_in, r_out)
    }

    fn factor(&self, z: Complex64) -> f64 {
        1.0 + self.kappa * self.f.value(z).norm_sqr()
    }

    /// Constant-curvature density w̃ = 4|f′|²/(1 + κ|f|²)².
    pub fn aux_density(&self, z: Complex64) -> f64 {
        4.0 * self.f.d1(z).norm_sqr() / self.factor(z).powi(2)
    }

    pub fn function(&self) -> &dyn Meromorphic {
        self.f.as_ref()
    }

    fn c(&self) -> f64 {
        (-self.kappa).sqrt()
    }
}

impl SkStructure for Liouville {
    fn h(&self, z: Complex64) -> f64 {
        self.c() * z.re
    }
    fn grad_h(&self, _z: Complex64) -> Covector {
        [self.c(), 0.0]
    }
    fn u(&self, z: Complex64) -> f64 {
        0.5 * self.aux_density(z).ln()
    }
    fn grad_u(&self, z: Complex64) -> Covector {
        // u = log 2 + log|f′| − log(1 + κ|f|²)
        let (f, f1, f2) = (self.f.value(z), self.f.d1(z), self.f.d2(z));
        let g1 = grad_log_abs(f2 / f1);
        let p = f1 * f.conj();
        let grad_abs2 = [2.0 * p.re, -2.0 * p.im];
        let k = self.kappa / self.factor(z);
        [g1[0] - k * grad_abs2[0], g1[1] - k * grad_abs2[1]]
    }
}

impl ClosedFormMetric for Liouville {
    fn info(&self) -> &FamilyInfo {
        &self.info
    }
    fn w(&self, z: Complex64) -> f64 {
        self.factor(z).abs() / (2.0 * self.f.d1(z).norm())
    }
    fn sk(&self) -> Option<&dyn SkStructure> {
        Some(self)
    }
}
