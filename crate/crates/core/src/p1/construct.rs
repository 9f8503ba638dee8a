//! Curvature −1 metrics e^{2u}|dz|² on ℙ¹ with cone points, by alternating
//! Schwarz iteration over log-polar patches.
//!
//! Each finite puncture zⱼ gets a patch centred on it whose inner circle
//! carries the cone condition for u ~ −αⱼ log|z − zⱼ|. Infinity gets a patch in
//! the chart ζ = 1/z, where u_ζ = u + 2 log|z| is smooth. Regular patches are
//! added until every outer circle lies well inside some other patch. A sweep
//! re-solves each patch with outer data interpolated from the deepest other
//! patch; sweeps stop when the outer data no longer change.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::mobius::MobiusMap;
use super::ConeDatum;
use crate::asymptotics::{fit_singularity, log_spaced_radii, SingularityFit};
use crate::error::{Error, Result};
use crate::field::{LogPolarGrid, Loop, ScalarField};
use crate::holonomy::{parallel_transport, InterpolatedConnection};
use crate::kw::{solve_kw_with, KwProblem, SolveOptions};
use crate::sk::{
    connection_from_triple, cubic_form, eta_residual_fields, flatness_residual_field,
    holomorphy_residual_field, SkTriple,
};

/// A point is interior to a patch when it lies within this fraction of the radius.
const DEPTH: f64 = 0.9;
const MAX_PATCHES: usize = 48;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct P1Options {
    /// Angular nodes per patch; the ρ spacing matches the θ spacing.
    pub n_theta: usize,
    /// Excised disc radius over patch radius at finite punctures.
    pub puncture_hole: f64,
    /// Same for regular patches and the patch at infinity.
    pub regular_hole: f64,
    /// Patch radius over the distance to the nearest puncture.
    pub radius_fraction: f64,
    /// Stop when the outer data change by less than this in a sweep.
    pub schwarz_tol: f64,
    pub max_sweeps: usize,
    /// Newton tolerance per patch solve (log-polar residual).
    pub newton_tol: f64,
}

impl Default for P1Options {
    fn default() -> Self {
        Self {
            n_theta: 64,
            puncture_hole: 1e-10,
            regular_hole: 1e-6,
            radius_fraction: 0.75,
            schwarz_tol: 1e-9,
            max_sweeps: 300,
            newton_tol: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum PatchRole {
    Puncture(usize),
    Infinity,
    Regular,
}

/// A disc in the z chart, or in the ζ = 1/z chart, with a small hole at its centre.
#[derive(Clone, Debug)]
pub struct Patch {
    pub role: PatchRole,
    pub zeta_chart: bool,
    /// Centre in chart coordinates.
    pub center: Complex64,
    /// Cone parameter of the inner condition (1 at regular points).
    pub gamma: f64,
    /// u in chart coordinates (u_ζ = u + 2 log|z| in the ζ chart).
    pub u: ScalarField,
}

impl Patch {
    pub fn grid(&self) -> &LogPolarGrid {
        self.u.grid()
    }

    pub fn radius(&self) -> f64 {
        self.grid().r_max()
    }

    pub fn hole(&self) -> f64 {
        self.grid().r_min()
    }

    /// Local coordinate of the finite point z.
    pub fn local(&self, z: Complex64) -> Option<Complex64> {
        if self.zeta_chart {
            (z.norm() > 0.0).then(|| z.inv() - self.center)
        } else {
            Some(z - self.center)
        }
    }

    /// The finite point with local coordinate `l`.
    pub fn global(&self, l: Complex64) -> Complex64 {
        if self.zeta_chart {
            (self.center + l).inv()
        } else {
            self.center + l
        }
    }

    /// log(R/|l|) when z is inside the interior part of the patch.
    fn depth(&self, z: Complex64) -> Option<f64> {
        let l = self.local(z)?.norm();
        (l <= DEPTH * self.radius() && l >= 2.0 * self.hole()).then(|| (self.radius() / l).ln())
    }

    /// u in the z chart at z, if z lies in the annulus.
    pub fn u_at(&self, z: Complex64) -> Option<f64> {
        let v = self.u.interpolate(self.local(z)?)?;
        Some(if self.zeta_chart { v - 2.0 * z.norm().ln() } else { v })
    }

    fn outer_points(&self) -> Vec<Complex64> {
        let g = self.grid();
        (0..g.n_theta()).map(|j| self.global(g.point(g.n_rho() - 1, j))).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchwarzReport {
    pub sweeps: usize,
    pub converged: bool,
    /// Largest change of outer data in each sweep.
    pub change_history: Vec<f64>,
    pub newton_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct P1Family {
    pub positions: Vec<Complex64>,
    pub alphas: Vec<f64>,
    /// Finite cones of order αⱼ/2 followed by the cone of order −3 at infinity.
    pub punctures: Vec<ConeDatum>,
    pub moduli_dim: i64,
    pub options: P1Options,
    pub patches: Vec<Patch>,
    pub report: SchwarzReport,
}

fn validate(positions: &[Complex64], alphas: &[f64], opts: &P1Options) -> Result<()> {
    let k = positions.len();
    if k < 3 {
        return Err(Error::Domain(format!("need at least 3 punctures, got {k}")));
    }
    if alphas.len() != k {
        return Err(Error::Dimension(format!("{k} punctures but {} orders", alphas.len())));
    }
    if positions.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) || alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain("punctures and orders must be finite".into()));
    }
    for a in 0..k {
        for b in 0..a {
            if (positions[a] - positions[b]).norm() < 1e-6 {
                return Err(Error::Domain(format!("punctures {b} and {a} coincide")));
            }
        }
    }
    if let Some(a) = alphas.iter().find(|&&a| a >= 1.0) {
        return Err(Error::Domain(format!("each α must be below 1, got {a}")));
    }
    let sum: f64 = alphas.iter().sum();
    if sum <= 2.0 {
        return Err(Error::Domain(format!("Σα = {sum} must exceed 2")));
    }
    if opts.n_theta < 8
        || !(opts.puncture_hole > 0.0 && opts.puncture_hole < 1e-2)
        || !(opts.regular_hole > 0.0 && opts.regular_hole < 1e-2)
        || !(opts.radius_fraction > 0.0 && opts.radius_fraction < 1.0)
        || !(opts.schwarz_tol > 0.0 && opts.newton_tol > 0.0)
    {
        return Err(Error::Invalid("invalid construction options".into()));
    }
    Ok(())
}

struct Builder<'a> {
    positions: &'a [Complex64],
    alphas: &'a [f64],
    opts: &'a P1Options,
}

impl Builder<'_> {
    /// u₀ = log 2 − Σαⱼ log|z − zⱼ| + (Σα/2 − 1) log(1 + |z|²), which has the
    /// right cone terms and u₀ ~ −2 log|z| at infinity.
    fn initial_u(&self, z: Complex64) -> f64 {
        let s: f64 = self.alphas.iter().sum();
        let cones: f64 = self
            .positions
            .iter()
            .zip(self.alphas)
            .map(|(p, a)| a * (z - p).norm().ln())
            .sum();
        2f64.ln() - cones + (0.5 * s - 1.0) * (1.0 + z.norm_sqr()).ln()
    }

    /// Puncture images in a chart.
    fn chart_punctures(&self, zeta: bool) -> Vec<Complex64> {
        self.positions
            .iter()
            .filter(|p| !zeta || p.norm() > 0.0)
            .map(|p| if zeta { p.inv() } else { *p })
            .collect()
    }

    fn distance_to_punctures(&self, c: Complex64, zeta: bool, skip: Option<usize>) -> f64 {
        self.chart_punctures(zeta)
            .iter()
            .enumerate()
            .filter(|(k, _)| zeta || Some(*k) != skip)
            .map(|(_, p)| (c - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    fn patch(&self, role: PatchRole, zeta_chart: bool, center: Complex64, radius: f64, hole: f64, gamma: f64) -> Result<Patch> {
        let m = self.opts.n_theta;
        let span = (radius / hole).ln();
        let n_rho = ((span / (2.0 * PI / m as f64)).ceil() as usize + 1).max(8);
        let grid = LogPolarGrid::annulus(hole * radius, radius, n_rho, m)?;
        let mut p = Patch {
            role,
            zeta_chart,
            center,
            gamma,
            u: ScalarField::constant(grid, 0.0),
        };
        let vals = grid
            .nodes()
            .map(|(i, j)| {
                let z = p.global(grid.point(i, j));
                let u = self.initial_u(z);
                if zeta_chart { u + 2.0 * z.norm().ln() } else { u }
            })
            .collect();
        p.u = ScalarField::new(grid, vals)?;
        Ok(p)
    }

    fn patches(&self) -> Result<Vec<Patch>> {
        let f = self.opts.radius_fraction;
        let mut out = Vec::new();
        for (k, (&p, &a)) in self.positions.iter().zip(self.alphas).enumerate() {
            let r = f * self.distance_to_punctures(p, false, Some(k));
            out.push(self.patch(PatchRole::Puncture(k), false, p, r, self.opts.puncture_hole, 1.0 - a)?);
        }
        let d = self.distance_to_punctures(Complex64::new(0.0, 0.0), true, None);
        let r_inf = if d.is_finite() { f * d } else { 1.0 };
        out.push(self.patch(PatchRole::Infinity, true, Complex64::new(0.0, 0.0), r_inf, self.opts.regular_hole, 1.0)?);
        // add regular patches until every outer circle is covered
        'scan: loop {
            for a in 0..out.len() {
                for x in out[a].outer_points() {
                    let covered = out.iter().enumerate().any(|(b, q)| b != a && q.depth(x).is_some());
                    if covered {
                        continue;
                    }
                    if out.len() >= MAX_PATCHES {
                        return Err(Error::Construction(format!(
                            "more than {MAX_PATCHES} patches needed to cover the sphere"
                        )));
                    }
                    out.push(self.regular_patch(x)?);
                    continue 'scan;
                }
            }
            break;
        }
        Ok(out)
    }

    /// A regular patch containing x, centred off x so that x is away from its hole.
    fn regular_patch(&self, x: Complex64) -> Result<Patch> {
        let zeta = x.norm() > 1.0;
        let c0 = if zeta { x.inv() } else { x };
        let nearest = self
            .chart_punctures(zeta)
            .into_iter()
            .min_by(|p, q| (c0 - p).norm().total_cmp(&(c0 - q).norm()))
            .ok_or_else(|| Error::Construction("no punctures".into()))?;
        let d = (c0 - nearest).norm();
        let dir = if d > 0.0 { (c0 - nearest) / d } else { Complex64::new(1.0, 0.0) };
        let c = c0 + 0.25 * self.opts.radius_fraction * d * dir;
        let r = self.opts.radius_fraction * self.distance_to_punctures(c, zeta, None);
        self.patch(PatchRole::Regular, zeta, c, r, self.opts.regular_hole, 1.0)
    }
}

/// For each outer node of each patch: the donor patch and the point.
fn donors(patches: &[Patch]) -> Result<Vec<Vec<(usize, Complex64)>>> {
    patches
        .iter()
        .enumerate()
        .map(|(a, p)| {
            p.outer_points()
                .into_iter()
                .map(|x| {
                    patches
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| *b != a)
                        .filter_map(|(b, q)| q.depth(x).map(|d| (b, d)))
                        .max_by(|s, t| s.1.total_cmp(&t.1))
                        .map(|(b, _)| (b, x))
                        .ok_or_else(|| Error::Construction(format!("outer circle of patch {a} not covered")))
                })
                .collect()
        })
        .collect()
}

fn schwarz(patches: &mut [Patch], opts: &P1Options) -> Result<SchwarzReport> {
    let links = donors(patches)?;
    let newton = SolveOptions {
        tol: opts.newton_tol,
        ..Default::default()
    };
    let mut report = SchwarzReport {
        sweeps: 0,
        converged: false,
        change_history: vec![],
        newton_iterations: 0,
    };
    while report.sweeps < opts.max_sweeps {
        let mut change: f64 = 0.0;
        for a in 0..patches.len() {
            let p = &patches[a];
            let g = *p.grid();
            let last = g.n_rho() - 1;
            let outer = links[a]
                .iter()
                .map(|&(b, x)| {
                    let u = patches[b].u_at(x).ok_or_else(|| Error::Construction("donor lookup failed".into()))?;
                    Ok(if p.zeta_chart { u + 2.0 * x.norm().ln() } else { u })
                })
                .collect::<Result<Vec<f64>>>()?;
            for (j, v) in outer.iter().enumerate() {
                change = change.max((v - p.u.at(last, j)).abs());
            }
            let q = ScalarField::constant(g, 1.0);
            let prob = KwProblem::new(q, vec![0.0; g.n_theta()], outer)?
                .with_cone_inner(p.gamma)?
                .with_initial(p.u.clone())?;
            let (u, rep) = solve_kw_with(&prob, newton)?;
            if !rep.converged {
                return Err(Error::Construction(format!(
                    "patch {a} solve stalled at residual {:.3e} after {} Newton steps (sweep {})",
                    rep.final_residual, rep.iterations, report.sweeps
                )));
            }
            report.newton_iterations += rep.iterations;
            patches[a].u = u;
        }
        report.sweeps += 1;
        report.change_history.push(change);
        if change < opts.schwarz_tol {
            report.converged = true;
            break;
        }
    }
    Ok(report)
}

/// Solve for the curvature −1 metric with cone exponents −αⱼ at `positions`.
pub fn p1_family_construct(positions: &[Complex64], alphas: &[f64], opts: P1Options) -> Result<P1Family> {
    validate(positions, alphas, &opts)?;
    let b = Builder {
        positions,
        alphas,
        opts: &opts,
    };
    let mut patches = b.patches()?;
    let report = schwarz(&mut patches, &opts)?;
    if !report.converged {
        return Err(Error::Construction(format!(
            "Schwarz iteration did not converge in {} sweeps (last change {:.3e})",
            report.sweeps,
            report.change_history.last().copied().unwrap_or(f64::NAN)
        )));
    }
    let k = positions.len();
    let mut punctures: Vec<ConeDatum> = positions
        .iter()
        .zip(alphas)
        .map(|(&z, &a)| ConeDatum::finite(z, 0.5 * a))
        .collect();
    punctures.push(ConeDatum::infinity(-3.0));
    Ok(P1Family {
        positions: positions.to_vec(),
        alphas: alphas.to_vec(),
        punctures,
        moduli_dim: 3 * k as i64 - 6,
        options: opts,
        patches,
        report,
    })
}

/// Re-solve with puncture `index` moved by `displacement`.
pub fn family_perturb(fam: &P1Family, index: usize, displacement: Complex64) -> Result<P1Family> {
    if index >= fam.positions.len() {
        return Err(Error::Invalid(format!("puncture index {index} out of range")));
    }
    let mut pos = fam.positions.clone();
    pos[index] += displacement;
    p1_family_construct(&pos, &fam.alphas, fam.options)
}

#[derive(Clone, Debug, Serialize)]
pub struct PunctureCheck {
    pub index: usize,
    pub position: [f64; 2],
    pub alpha: f64,
    pub fit: SingularityFit,
    /// Fitted β/2.
    pub fitted_order: f64,
    pub holonomy_trace: f64,
    pub expected_trace: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartCheck {
    pub patch: usize,
    pub role: PatchRole,
    pub zeta_chart: bool,
    pub kw: f64,
    pub flatness: f64,
    pub eta: f64,
    pub holomorphy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchInfo {
    pub role: PatchRole,
    pub zeta_chart: bool,
    pub center: [f64; 2],
    pub radius: f64,
    pub hole: f64,
    pub n_rho: usize,
    pub n_theta: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Summary {
    pub schema: &'static str,
    pub punctures: Vec<ConeDatum>,
    pub moduli_dim: i64,
    pub patches: Vec<PatchInfo>,
    pub schwarz: SchwarzReport,
    pub puncture_checks: Vec<PunctureCheck>,
    pub infinity_fit: SingularityFit,
    pub infinity_order: f64,
    pub overlap_residual: f64,
    pub chart_overlap_residual: f64,
    pub chart_checks: Vec<ChartCheck>,
}

impl P1Family {
    fn deepest(&self, z: Complex64) -> Option<&Patch> {
        self.patches
            .iter()
            .filter(|p| p.local(z).is_some_and(|l| p.grid().contains(l)))
            .max_by(|p, q| {
                let d = |p: &Patch| (p.radius() / p.local(z).unwrap().norm()).ln();
                d(p).total_cmp(&d(q))
            })
    }

    /// u at a finite point away from the punctures.
    pub fn u(&self, z: Complex64) -> Option<f64> {
        self.deepest(z)?.u_at(z)
    }

    /// Density e^{2u} of the curvature −1 metric.
    pub fn w_aux(&self, z: Complex64) -> Option<f64> {
        self.u(z).map(|u| (2.0 * u).exp())
    }

    /// Density e^{−u} of the special Kähler metric.
    pub fn w_sk(&self, z: Complex64) -> Option<f64> {
        self.u(z).map(|u| (-u).exp())
    }

    fn puncture_patch(&self, j: usize) -> Result<&Patch> {
        self.patches
            .iter()
            .find(|p| p.role == PatchRole::Puncture(j))
            .ok_or_else(|| Error::Invalid(format!("no puncture {j}")))
    }

    fn infinity_patch(&self) -> &Patch {
        self.patches.iter().find(|p| p.role == PatchRole::Infinity).expect("patch at infinity")
    }

    fn fit_radii(p: &Patch) -> Vec<f64> {
        log_spaced_radii(10.0 * p.hole(), 1e3 * p.hole(), 9)
    }

    /// Singularity fit of w = e^{−u} at puncture j.
    pub fn fit_puncture(&self, j: usize) -> Result<SingularityFit> {
        let p = self.puncture_patch(j)?;
        let w = |l: Complex64| p.u.interpolate(l).map_or(f64::NAN, |u| (-u).exp());
        fit_singularity(&w, &Self::fit_radii(p))
    }

    /// Fit of the special Kähler density in the ζ chart, e^{−u_ζ}|ζ|^{−6}.
    pub fn fit_infinity(&self) -> Result<SingularityFit> {
        let p = self.infinity_patch();
        let w = |l: Complex64| p.u.interpolate(l).map_or(f64::NAN, |u| (-u).exp() * l.norm().powi(-6));
        fit_singularity(&w, &Self::fit_radii(p))
    }

    /// Special Kähler data on a patch: h = Re z, u sampled, a = 0.
    fn triple(&self, p: &Patch) -> Result<SkTriple> {
        let g = *p.grid();
        let h = ScalarField::from_fn(g, |l| (p.center + l).re)?;
        if p.zeta_chart {
            return Err(Error::Invalid("h = Re z is not defined on the ζ chart".into()));
        }
        SkTriple::new(h, p.u.clone(), 0.0)
    }

    /// Monodromy around puncture j on the circle of radius R/10.
    pub fn puncture_holonomy(&self, j: usize, rtol: f64) -> Result<crate::holonomy::MonodromyMatrix> {
        let p = self.puncture_patch(j)?;
        let conn = connection_from_triple(&self.triple(p)?);
        let lp = Loop::circle(Complex64::new(0.0, 0.0), 0.1 * p.radius())?;
        parallel_transport(&InterpolatedConnection(&conn), &lp, rtol)
    }

    pub fn puncture_check(&self, j: usize) -> Result<PunctureCheck> {
        let fit = self.fit_puncture(j)?;
        let hol = self.puncture_holonomy(j, 1e-8)?;
        let z = self.positions[j];
        Ok(PunctureCheck {
            index: j,
            position: [z.re, z.im],
            alpha: self.alphas[j],
            fitted_order: 0.5 * fit.beta,
            fit,
            holonomy_trace: hol.trace,
            expected_trace: 2.0 * (PI * self.alphas[j]).cos(),
        })
    }

    /// Structural residuals of the z-chart patches on the window between 10× the
    /// hole and half the radius.
    pub fn chart_checks(&self) -> Result<Vec<ChartCheck>> {
        let mut out = Vec::new();
        for (k, p) in self.patches.iter().enumerate() {
            if p.zeta_chart {
                continue;
            }
            let (lo, hi) = (10.0 * p.hole(), 0.5 * p.radius());
            let t = self.triple(p)?;
            let conn = connection_from_triple(&t);
            let (e1, e2) = eta_residual_fields(&t);
            let cf = cubic_form(&t)?;
            out.push(ChartCheck {
                patch: k,
                role: p.role,
                zeta_chart: false,
                kw: t.kw_residual_field().max_abs_within(lo, hi),
                flatness: flatness_residual_field(&conn).max_abs_within(lo, hi),
                eta: e1.max_abs_within(lo, hi).max(e2.max_abs_within(lo, hi)),
                holomorphy: holomorphy_residual_field(&cf).max_abs_within(lo, hi),
            });
        }
        Ok(out)
    }

    /// Largest disagreement of u between overlapping patches, over all pairs and
    /// over pairs of different charts.
    pub fn overlap_residuals(&self) -> (f64, f64) {
        let (mut all, mut charts) = (0.0f64, 0.0f64);
        for (a, p) in self.patches.iter().enumerate() {
            let g = p.grid();
            for (i, j) in g.nodes() {
                let l = g.point(i, j);
                if l.norm() > DEPTH * p.radius() || l.norm() < 2.0 * p.hole() {
                    continue;
                }
                let z = p.global(l);
                for (b, q) in self.patches.iter().enumerate() {
                    if b == a || q.depth(z).is_none() {
                        continue;
                    }
                    let (Some(u1), Some(u2)) = (p.u_at(z), q.u_at(z)) else { continue };
                    let d = (u1 - u2).abs();
                    all = all.max(d);
                    if p.zeta_chart != q.zeta_chart {
                        charts = charts.max(d);
                    }
                }
            }
        }
        (all, charts)
    }

    /// The map sending the first three punctures to (0, 1, −1).
    pub fn normalization(&self) -> Result<MobiusMap> {
        MobiusMap::normalizing(self.positions[0], self.positions[1], self.positions[2])
    }

    /// e^{2u} of the pulled-back metric in the normalized coordinate.
    pub fn normalized_w_aux(&self, s: Complex64) -> Result<Option<f64>> {
        let inv = self.normalization()?.inverse();
        let Some(z) = inv.apply(s) else { return Ok(None) };
        Ok(self.w_aux(z).map(|w| w * inv.derivative(s).norm_sqr()))
    }

    pub fn summary(&self) -> Result<P1Summary> {
        let puncture_checks = (0..self.positions.len())
            .map(|j| self.puncture_check(j))
            .collect::<Result<Vec<_>>>()?;
        let infinity_fit = self.fit_infinity()?;
        let (overlap_residual, chart_overlap_residual) = self.overlap_residuals();
        Ok(P1Summary {
            schema: crate::SCHEMA,
            punctures: self.punctures.clone(),
            moduli_dim: self.moduli_dim,
            patches: self
                .patches
                .iter()
                .map(|p| PatchInfo {
                    role: p.role,
                    zeta_chart: p.zeta_chart,
                    center: [p.center.re, p.center.im],
                    radius: p.radius(),
                    hole: p.hole(),
                    n_rho: p.grid().n_rho(),
                    n_theta: p.grid().n_theta(),
                })
                .collect(),
            schwarz: self.report.clone(),
            puncture_checks,
            infinity_order: 0.5 * infinity_fit.beta,
            infinity_fit,
            overlap_residual,
            chart_overlap_residual,
            chart_checks: self.chart_checks()?,
        })
    }
}

/// Sample points in the normalized coordinate used to compare families.
pub fn comparison_points() -> Vec<Complex64> {
    [(0.5, 0.5), (-0.5, 0.6), (0.3, -0.4), (0.0, 1.2), (-1.5, -0.8), (2.0, 0.3), (0.5, -1.5)]
        .iter()
        .map(|&(x, y)| Complex64::new(x, y))
        .collect()
}

/// Largest relative difference of the normalized metrics of two families over
/// the points where both are defined.
pub fn normalized_difference(a: &P1Family, b: &P1Family, points: &[Complex64]) -> Result<f64> {
    let mut m: f64 = 0.0;
    let mut used = 0;
    for &s in points {
        if let (Some(wa), Some(wb)) = (a.normalized_w_aux(s)?, b.normalized_w_aux(s)?) {
            m = m.max((wa - wb).abs() / wa.max(wb));
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Invalid("no comparison point lies in both families".into()));
    }
    Ok(m)
}
