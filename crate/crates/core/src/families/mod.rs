//! Closed-form special Kähler structures, evaluable at arbitrary points.
//!
//! These are the oracles for everything else: each family carries its
//! metric, its harmonic data (when it is special Kähler) and what is known
//! about its singularity at the origin.

mod elementary;
mod liouville;
mod registry;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::LogPolarGrid;
use crate::mat2::Mat2;
use crate::sk::{SkStructure, SkTriple};

pub use elementary::{ConicalModel, FlatHarmonic, HarmonicKind, LogFamily, PoincareDerived};
pub use liouville::{Liouville, Meromorphic, Mobius, PowerMap};
pub use registry::{family_by_name, family_names};

/// Leading behaviour of w at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Singularity {
    /// w = |z|^β (C + o(1))
    Power { beta: f64, c: f64 },
    /// w = −|z|^{N+1} log|z| (C + o(1))
    LogType { n: i32, c: f64 },
}

impl Singularity {
    /// β, with β := N + 1 in the log case.
    pub fn beta(&self) -> f64 {
        match *self {
            Singularity::Power { beta, .. } => beta,
            Singularity::LogType { n, .. } => (n + 1) as f64,
        }
    }

    pub fn is_log_type(&self) -> bool {
        matches!(self, Singularity::LogType { .. })
    }
}

/// Metadata attached to a family instance.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub family: String,
    pub params: Value,
    pub a: f64,
    /// Pure model metric, not special Kähler by itself.
    pub model_only: bool,
    pub singularity: Option<Singularity>,
    /// Order N of Ξ₀ at the origin (None when Ξ₀ ≡ 0 or unknown).
    pub cubic_order: Option<i32>,
    /// Closed-form monodromy in the reported convention, when known.
    pub holonomy: Option<Mat2>,
    /// Default annulus r_in ≤ |z| ≤ r_out.
    pub domain: (f64, f64),
    /// The structure is defined on 0 < |z| < max_radius.
    pub max_radius: f64,
}

impl FamilyInfo {
    /// `{"family", "params", "a"}`
    pub fn metadata_json(&self) -> Value {
        json!({ "family": self.family, "params": self.params, "a": self.a })
    }
}

/// A metric g = w|dz|² known in closed form.
pub trait ClosedFormMetric: Send + Sync {
    fn info(&self) -> &FamilyInfo;

    fn w(&self, z: Complex64) -> f64;

    /// u = −log w.
    fn potential(&self, z: Complex64) -> f64 {
        -self.w(z).ln()
    }

    /// The harmonic data, if the metric is special Kähler.
    fn sk(&self) -> Option<&dyn SkStructure> {
        None
    }

    /// Sample the triple on a grid (exact differentials).
    fn triple(&self, grid: LogPolarGrid) -> Result<SkTriple> {
        let sk = self.sk().ok_or_else(|| {
            Error::Invalid(format!("{} is a model metric without harmonic data", self.info().family))
        })?;
        SkTriple::from_structure(sk, grid)
    }

    /// Ξ₀ in closed form.
    fn xi0(&self, z: Complex64) -> Option<Complex64> {
        self.sk().map(|s| s.cubic_xi0(z))
    }

    /// Connection matrix ω∇(v) at z.
    fn connection(&self, z: Complex64, v: [f64; 2]) -> Option<Mat2> {
        self.sk()
            .map(|s| crate::sk::connection_matrix(s.omega11(z), s.omega22(z), v))
    }
}

/// Spot-check w > 0 (and finite) on a polar sample of r_in ≤ |z| ≤ r_out.
pub fn check_positive_on(m: &dyn ClosedFormMetric, r_in: f64, r_out: f64) -> Result<()> {
    if !(r_in > 0.0 && r_in < r_out) {
        return Err(Error::Domain(format!("bad annulus [{r_in}, {r_out}]")));
    }
    for a in 0..=16 {
        let r = r_in * (r_out / r_in).powf(a as f64 / 16.0);
        for b in 0..32 {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * b as f64 / 32.0);
            let w = m.w(z);
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Domain(format!(
                    "{}: metric density {w} at z = {z} is not positive",
                    m.info().family
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
