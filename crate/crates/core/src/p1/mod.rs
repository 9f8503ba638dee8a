//! Global checks on the projective line.
//!
//! - [`cone_budget`]: the Gauss–Bonnet constraint Σβⱼ ≥ −4 on cone exponents;
//! - [`gauss_bonnet_bounded`]: ∫K dA + ∮k_g ds = 0 on an annulus;
//! - [`p1_family_construct`]: special Kähler metrics on ℙ¹ with prescribed cone
//!   points, obtained from the curvature −1 metric e^{2u}|dz|² with those cone
//!   points as w = e^{−u}.

mod construct;
mod mobius;

pub use construct::{
    comparison_points, family_perturb, normalized_difference, p1_family_construct, ChartCheck, Patch,
    PatchInfo, PatchRole, P1Family, P1Options, P1Summary, PunctureCheck, SchwarzReport,
};
pub use mobius::MobiusMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{LogPolarGrid, ScalarField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConePosition {
    Finite { re: f64, im: f64 },
    Infinity,
}

/// A cone point of order `order`, i.e. w ~ |z − zⱼ|^β with β = 2·order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeDatum {
    pub position: ConePosition,
    pub order: f64,
}

impl ConeDatum {
    pub fn finite(z: Complex64, order: f64) -> Self {
        Self {
            position: ConePosition::Finite { re: z.re, im: z.im },
            order,
        }
    }

    pub fn infinity(order: f64) -> Self {
        Self {
            position: ConePosition::Infinity,
            order,
        }
    }

    pub fn beta(&self) -> f64 {
        2.0 * self.order
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeBudget {
    pub beta_sum: f64,
    /// Σβⱼ ≥ −4.
    pub satisfied: bool,
    /// Every order exceeds −1, so the constraint applies.
    pub hypothesis_holds: bool,
    pub notes: Vec<String>,
}

/// Sum of cone exponents against the bound −2χ(ℙ¹) = −4.
pub fn cone_budget(cones: &[ConeDatum]) -> ConeBudget {
    let beta_sum: f64 = cones.iter().map(ConeDatum::beta).sum();
    let mut notes = Vec::new();
    for (k, c) in cones.iter().enumerate() {
        if c.order <= -1.0 {
            notes.push(format!("cone {k} has order {} ≤ −1; the bound is not implied", c.order));
        }
        if c.order == -3.0 {
            notes.push(format!(
                "cone {k} has order −3, as at infinity for metrics built from curvature −1; the bound does not apply"
            ));
        }
    }
    ConeBudget {
        beta_sum,
        satisfied: beta_sum >= -4.0,
        hypothesis_holds: cones.iter().all(|c| c.order > -1.0),
        notes,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnet {
    /// ∫K dA + ∮k_g ds.
    pub lhs: f64,
    /// 2πχ(annulus).
    pub rhs: f64,
    pub curvature_integral: f64,
    pub outer_boundary: f64,
    pub inner_boundary: f64,
}

/// Gauss–Bonnet on the annulus of `grid` for g = w|dz|².
///
/// K dA = −½(∂ρρ + ∂θθ)log w dρ dθ; the θ part integrates to zero over each
/// circle, and the ρ part uses fourth-order differences with Simpson weights.
/// On |z| = r the geodesic curvature gives k_g ds = (1 + ½∂ρ log w) dθ, with
/// the inner circle oriented clockwise.
pub fn gauss_bonnet_bounded(w: &dyn Fn(Complex64) -> f64, grid: LogPolarGrid) -> Result<GaussBonnet> {
    let n = grid.n_rho();
    if n < 7 {
        return Err(Error::Dimension(format!("need at least 7 radial nodes, got {n}")));
    }
    let wf = ScalarField::from_fn(grid, w)?;
    if let Some(bad) = wf.values().iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::Domain(format!("metric density must be positive, found {bad}")));
    }
    let (hr, ht) = (grid.d_rho(), grid.d_theta());
    // angular means of log w on each circle
    let f: Vec<f64> = (0..n).map(|i| wf.row(i).iter().map(|v| v.ln()).sum::<f64>() * ht).collect();
    let f_rr: Vec<f64> = (0..n).map(|i| second_derivative(&f, i) / (hr * hr)).collect();
    let curvature_integral = -0.5 * simpson(&f_rr, hr);
    let df_out = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * hr);
    let df_in = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * hr);
    let circle = std::f64::consts::TAU;
    let outer_boundary = circle + 0.5 * df_out;
    let inner_boundary = -(circle + 0.5 * df_in);
    Ok(GaussBonnet {
        lhs: curvature_integral + outer_boundary + inner_boundary,
        rhs: 0.0,
        curvature_integral,
        outer_boundary,
        inner_boundary,
    })
}

/// h²·f″ at node i, fourth order (one-sided near the ends).
fn second_derivative(f: &[f64], i: usize) -> f64 {
    let n = f.len();
    let one_sided = |g: &dyn Fn(usize) -> f64, k: usize| match k {
        0 => (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) / 12.0,
        _ => (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) / 12.0,
    };
    if i < 2 {
        one_sided(&|k| f[k], i)
    } else if i >= n - 2 {
        one_sided(&|k| f[n - 1 - k], n - 1 - i)
    } else {
        (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) / 12.0
    }
}

/// Composite Simpson rule, closed with the 3/8 rule on an odd number of intervals.
fn simpson(v: &[f64], h: f64) -> f64 {
    let m = v.len() - 1;
    let (even, tail) = if m % 2 == 0 { (m, 0) } else { (m - 3, 3) };
    let mut s = 0.0;
    for k in (0..even).step_by(2) {
        s += h / 3.0 * (v[k] + 4.0 * v[k + 1] + v[k + 2]);
    }
    if tail == 3 {
        let k = even;
        s += 3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]);
    }
    s
}

#[cfg(test)]
mod tests;
