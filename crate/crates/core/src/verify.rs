//! The invariant suite for a closed-form family: structural residuals under
//! refinement, curvature sign, monodromy, singularity type and Gauss–Bonnet.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{check_bound, cubic_order, fit_singularity, log_spaced_radii, FitKind};
use crate::error::Result;
use crate::families::{check_positive_on, ClosedFormMetric, Singularity};
use crate::field::{LogPolarGrid, Loop, ScalarField};
use crate::holonomy::{classify, parallel_transport, predicted_class, ClosedFormConnection};
use crate::p1::gauss_bonnet_bounded;
use crate::refinement::RefinementStudy;
use crate::sk::{
    connection_from_triple, cubic_form, eta_residual_fields, flatness_residual_field, gaussian_curvature,
    holomorphy_residual_field, SkTriple,
};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyOptions {
    /// Angular nodes of the coarsest grid of each refinement study.
    pub base_n: usize,
    pub levels: usize,
    pub min_order: f64,
    /// Residuals below this count as converged.
    pub floor: f64,
    pub curvature_floor: f64,
    pub holonomy_rtol: f64,
    pub holonomy_tol: f64,
    pub fit_tol: f64,
    /// Grid size of the Gauss–Bonnet check.
    pub gauss_bonnet_n: usize,
    pub gauss_bonnet_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            base_n: 32,
            levels: 3,
            min_order: 1.9,
            floor: 1e-9,
            curvature_floor: -1e-6,
            holonomy_rtol: 1e-10,
            holonomy_tol: 1e-6,
            fit_tol: 1e-3,
            gauss_bonnet_n: 256,
            gauss_bonnet_tol: 1e-2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Invariant {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub family: Value,
    pub passed: bool,
    pub invariants: Vec<Invariant>,
}

/// Geometric sub-window of the family domain, away from both circles.
pub fn window(domain: (f64, f64)) -> (f64, f64) {
    let (a, b) = (domain.0.ln(), domain.1.ln());
    ((a + 0.2 * (b - a)).exp(), (a + 0.8 * (b - a)).exp())
}

/// Radius of the monodromy loop: 1 when the structure extends past it.
pub fn holonomy_radius(m: &dyn ClosedFormMetric) -> f64 {
    let info = m.info();
    if info.max_radius > 1.0 {
        1.0
    } else {
        info.domain.1.min(0.5 * info.max_radius)
    }
}

fn study(
    name: &'static str,
    base: LogPolarGrid,
    opts: &VerifyOptions,
    measure: impl FnMut(LogPolarGrid) -> Result<f64>,
) -> Result<Invariant> {
    let s = RefinementStudy::run(base, opts.levels, measure)?;
    Ok(Invariant {
        name,
        passed: s.converges(opts.min_order, opts.floor),
        value: s.finest_error(),
        tolerance: opts.min_order,
        detail: json!({ "grids": s.grids, "errors": s.errors, "orders": s.orders }),
    })
}

fn residual_studies(m: &dyn ClosedFormMetric, opts: &VerifyOptions) -> Result<Vec<Invariant>> {
    let dom = m.info().domain;
    let (lo, hi) = window(dom);
    let base = LogPolarGrid::annulus(dom.0, dom.1, opts.base_n + 1, opts.base_n)?;
    let triple = |g: LogPolarGrid| -> Result<SkTriple> { m.triple(g) };
    Ok(vec![
        study("harmonicity", base, opts, |g| Ok(triple(g)?.harmonicity_residual_field().max_abs_within(lo, hi)))?,
        study("kazdan-warner", base, opts, |g| Ok(triple(g)?.kw_residual_field().max_abs_within(lo, hi)))?,
        study("flatness", base, opts, |g| {
            Ok(flatness_residual_field(&connection_from_triple(&triple(g)?)).max_abs_within(lo, hi))
        })?,
        study("eta-system", base, opts, |g| {
            let (a, b) = eta_residual_fields(&triple(g)?);
            Ok(a.max_abs_within(lo, hi).max(b.max_abs_within(lo, hi)))
        })?,
        study("holomorphy", base, opts, |g| {
            Ok(holomorphy_residual_field(&cubic_form(&triple(g)?)?).max_abs_within(lo, hi))
        })?,
    ])
}

fn curvature(m: &dyn ClosedFormMetric, opts: &VerifyOptions) -> Result<Invariant> {
    let dom = m.info().domain;
    let n = opts.base_n << (opts.levels - 1);
    let g = LogPolarGrid::annulus(dom.0, dom.1, n + 1, n)?;
    let k = gaussian_curvature(&ScalarField::from_fn(g, |z| m.w(z))?)?;
    let min = k.min_interior();
    Ok(Invariant {
        name: "curvature-nonnegative",
        passed: min >= opts.curvature_floor,
        value: min,
        tolerance: opts.curvature_floor,
        detail: json!({ "grid": [g.n_rho(), g.n_theta()] }),
    })
}

fn monodromy(m: &dyn ClosedFormMetric, opts: &VerifyOptions) -> Result<Vec<Invariant>> {
    let info = m.info();
    let r = holonomy_radius(m);
    let conn = ClosedFormConnection::of_family(m)?;
    let hol = parallel_transport(&conn, &Loop::circle(Complex64::new(0.0, 0.0), r)?, opts.holonomy_rtol)?;
    let mut out = Vec::new();
    if let Some(expected) = info.holonomy {
        let d = hol.matrix.dist(&expected);
        out.push(Invariant {
            name: "holonomy-matrix",
            passed: d <= opts.holonomy_tol,
            value: d,
            tolerance: opts.holonomy_tol,
            detail: json!({ "radius": r, "matrix": hol.matrix, "expected": expected }),
        });
    }
    if let Some(s) = info.singularity {
        let class = classify(&hol.matrix, 1e-6)?;
        let pred = predicted_class(s.beta(), s.is_log_type());
        out.push(Invariant {
            name: "monodromy-class",
            passed: pred.admits(&class, 1e-6),
            value: class.trace,
            tolerance: 1e-6,
            detail: json!({ "class": class, "predicted": pred }),
        });
    }
    Ok(out)
}

fn singularity(m: &dyn ClosedFormMetric, opts: &VerifyOptions) -> Result<Vec<Invariant>> {
    let info = m.info();
    let Some(expected) = info.singularity else { return Ok(vec![]) };
    // three decades inward from the sampled annulus
    let r0 = info.domain.0;
    let radii = log_spaced_radii(r0 * 1e-3, r0, 10);
    let w = |z: Complex64| m.w(z);
    let fit = fit_singularity(&w, &radii)?;
    let (passed, value) = match expected {
        Singularity::Power { beta, .. } => {
            let d = (fit.beta - beta).abs();
            (fit.kind == FitKind::Power && d <= opts.fit_tol, d)
        }
        Singularity::LogType { n, .. } => (fit.kind == FitKind::LogType && fit.n == Some(n), fit.fit_residual),
    };
    let mut out = vec![Invariant {
        name: "singularity-fit",
        passed,
        value,
        tolerance: opts.fit_tol,
        detail: json!({ "fit": fit, "expected": expected }),
    }];
    if let Some(n) = info.cubic_order {
        if m.sk().is_some() {
            let (a, b) = window(info.domain);
            let co = cubic_order(&|z| m.xi0(z).unwrap_or_default(), (a * b).sqrt())?;
            out.push(Invariant {
                name: "cubic-order",
                passed: co.order == n,
                value: co.unrounded,
                tolerance: 0.1,
                detail: json!({ "order": co.order, "expected": n }),
            });
        }
        out.push(Invariant {
            name: "singularity-bound",
            passed: check_bound(&fit, n),
            value: fit.beta,
            tolerance: (n + 1) as f64,
            detail: json!({ "cubic_order": n }),
        });
    }
    Ok(out)
}

fn gauss_bonnet(m: &dyn ClosedFormMetric, opts: &VerifyOptions) -> Result<Invariant> {
    let dom = m.info().domain;
    let n = opts.gauss_bonnet_n;
    let g = LogPolarGrid::annulus(dom.0, dom.1, n + 1, n)?;
    let gb = gauss_bonnet_bounded(&|z| m.w(z), g)?;
    Ok(Invariant {
        name: "gauss-bonnet",
        passed: gb.lhs.abs() <= opts.gauss_bonnet_tol,
        value: gb.lhs,
        tolerance: opts.gauss_bonnet_tol,
        detail: serde_json::to_value(&gb)?,
    })
}

/// Run every applicable invariant on the family's default domain.
pub fn verify_family(m: &dyn ClosedFormMetric, opts: VerifyOptions) -> Result<VerifyReport> {
    let info = m.info();
    let dom = info.domain;
    let positive = check_positive_on(m, dom.0, dom.1);
    let mut inv = vec![Invariant {
        name: "positivity",
        passed: positive.is_ok(),
        value: f64::NAN,
        tolerance: 0.0,
        detail: json!(positive.err().map(|e| e.to_string())),
    }];
    if m.sk().is_some() {
        inv.extend(residual_studies(m, &opts)?);
        inv.push(curvature(m, &opts)?);
        inv.extend(monodromy(m, &opts)?);
    }
    inv.extend(singularity(m, &opts)?);
    inv.push(gauss_bonnet(m, &opts)?);
    Ok(VerifyReport {
        schema: crate::SCHEMA,
        family: info.metadata_json(),
        passed: inv.iter().all(|i| i.passed),
        invariants: inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{family_by_name, family_names};

    #[test]
    fn every_registered_family_passes() {
        for name in family_names() {
            let f = family_by_name(name, &Value::Null).unwrap();
            let r = verify_family(f.as_ref(), VerifyOptions::default()).unwrap();
            for i in &r.invariants {
                eprintln!("{name:>14} {:<22} {:<5} {:.3e}", i.name, i.passed, i.value);
            }
            assert!(r.passed, "{name}: {}", serde_json::to_string_pretty(&r).unwrap());
        }
    }
}
