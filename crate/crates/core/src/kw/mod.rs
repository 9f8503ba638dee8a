//! Damped Newton solver for the Kazdan–Warner equation `Δu = q e^{2u}`.
//!
//! The equation is solved in the conformal coordinates of the log-polar grid,
//! `F(u) = (∂ρρ + ∂θθ)u − r²q e^{2u} = 0`, which is r² times the flat form.
//! The Newton matrix `−F′(u) = −(∂ρρ + ∂θθ) + 2r²q e^{2u}` is symmetric
//! positive definite, so every step is one preconditioned CG solve.
//!
//! The outer circle always carries Dirichlet data. The inner circle carries
//! either Dirichlet data or the cone-model condition
//! `∂ρu = −1 + √(γ² + r²q e^{2u})`, which every radial solution
//! `u ~ (γ − 1) log r` of the constant-q equation satisfies exactly.

mod linear;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{laplacian, LogPolarGrid, ScalarField};

/// Condition imposed on the inner boundary circle.
#[derive(Clone, Debug, PartialEq)]
pub enum InnerBoundary {
    Dirichlet(Vec<f64>),
    /// Nonlinear Robin condition of a cone with u ~ (γ − 1) log r.
    ConeModel { gamma: f64 },
}

#[derive(Clone, Debug)]
pub struct KwProblem {
    pub q: ScalarField,
    pub inner: InnerBoundary,
    /// Dirichlet values on the outer circle, one per θ node.
    pub outer: Vec<f64>,
    pub initial: Option<ScalarField>,
}

fn check_row(grid: &LogPolarGrid, v: &[f64], what: &str) -> Result<()> {
    if v.len() != grid.n_theta() {
        return Err(Error::Dimension(format!(
            "{what} boundary has {} values, grid has {} angles",
            v.len(),
            grid.n_theta()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("{what} boundary data not finite")));
    }
    Ok(())
}

impl KwProblem {
    /// Dirichlet problem; `q` must be nonnegative.
    pub fn new(q: ScalarField, inner: Vec<f64>, outer: Vec<f64>) -> Result<Self> {
        if let Some(bad) = q.values().iter().find(|&&v| v < 0.0) {
            return Err(Error::Domain(format!("source q must be nonnegative, found {bad}")));
        }
        check_row(q.grid(), &inner, "inner")?;
        check_row(q.grid(), &outer, "outer")?;
        Ok(Self {
            q,
            inner: InnerBoundary::Dirichlet(inner),
            outer,
            initial: None,
        })
    }

    /// Dirichlet problem whose boundary values are taken from `u`.
    pub fn with_boundary_from(q: ScalarField, u: impl Fn(num_complex::Complex64) -> f64) -> Result<Self> {
        let g = *q.grid();
        let row = |i: usize| (0..g.n_theta()).map(|j| u(g.point(i, j))).collect::<Vec<_>>();
        let (inner, outer) = (row(0), row(g.n_rho() - 1));
        Self::new(q, inner, outer)
    }

    /// Replace the inner Dirichlet data by the cone-model condition.
    pub fn with_cone_inner(mut self, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain(format!("cone parameter must be positive (got {gamma})")));
        }
        self.inner = InnerBoundary::ConeModel { gamma };
        Ok(self)
    }

    pub fn with_initial(mut self, u0: ScalarField) -> Result<Self> {
        if u0.grid() != self.q.grid() {
            return Err(Error::Dimension("initial guess on a different grid".into()));
        }
        self.initial = Some(u0);
        Ok(self)
    }

    pub fn grid(&self) -> &LogPolarGrid {
        self.q.grid()
    }

    /// Linear interpolation in ρ of the boundary data (for a cone inner
    /// condition: the outer data continued with slope γ − 1).
    pub fn default_initial(&self) -> ScalarField {
        let g = *self.grid();
        let n = g.n_rho() - 1;
        let vals = g
            .nodes()
            .map(|(i, j)| {
                let t = i as f64 / n as f64;
                match &self.inner {
                    InnerBoundary::Dirichlet(v) => (1.0 - t) * v[j] + t * self.outer[j],
                    InnerBoundary::ConeModel { gamma } => {
                        self.outer[j] + (gamma - 1.0) * (g.rho(i) - g.rho_max())
                    }
                }
            })
            .collect();
        ScalarField::from_raw(g, vals)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Target for max |F(u)| on the unknown nodes (log-polar form).
    pub tol: f64,
    pub max_iter: usize,
    /// Relative tolerance of each linear solve.
    pub linear_rtol: f64,
    pub min_step: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            linear_rtol: 1e-12,
            min_step: 2f64.powi(-20),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    /// Accepted Newton steps.
    pub iterations: usize,
    /// max |r²(Δu − q e^{2u})| over unknown nodes at exit.
    pub final_residual: f64,
    /// Step length accepted at each iteration.
    pub damping: Vec<f64>,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    pub linear_iterations: Vec<usize>,
    /// max |Δu − q e^{2u}| over interior nodes (no r² weight).
    pub kw_residual: f64,
}

struct Newton {
    g: LogPolarGrid,
    robin: Option<f64>,
    first: usize,
    r2q: Vec<f64>,
}

impl Newton {
    fn new(p: &KwProblem) -> Self {
        let g = *p.grid();
        let robin = match p.inner {
            InnerBoundary::ConeModel { gamma } => Some(gamma),
            InnerBoundary::Dirichlet(_) => None,
        };
        let r2q = g
            .nodes()
            .map(|(i, j)| g.radius(i).powi(2) * p.q.at(i, j))
            .collect();
        Self {
            g,
            robin,
            first: if robin.is_some() { 0 } else { 1 },
            r2q,
        }
    }

    fn unknowns(&self) -> std::ops::Range<usize> {
        let n = self.g.n_theta();
        self.first * n..(self.g.n_rho() - 1) * n
    }

    fn cone_slope(gamma: f64, s: f64) -> (f64, f64) {
        // s = r²q e^{2u}; returns (g, dg/du)
        let root = (gamma * gamma + s).sqrt();
        (root - 1.0, s / root)
    }

    /// F on unknown nodes (Robin row scaled by ½).
    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let g = &self.g;
        let n = g.n_theta();
        let (ir2, it2) = (1.0 / g.d_rho().powi(2), 1.0 / g.d_theta().powi(2));
        self.unknowns()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let jl = g.wrap(j as isize - 1);
                let jr = g.wrap(j as isize + 1);
                let uc = u[k];
                let tt = (u[i * n + jl] - 2.0 * uc + u[i * n + jr]) * it2;
                let s = self.r2q[k] * (2.0 * uc).exp();
                if i == 0 {
                    let gamma = self.robin.expect("Robin row only with cone model");
                    let (gs, _) = Self::cone_slope(gamma, s);
                    let rr = (2.0 * u[k + n] - 2.0 * uc - 2.0 * g.d_rho() * gs) * ir2;
                    0.5 * (rr + tt - s)
                } else {
                    let rr = (u[k + n] - 2.0 * uc + u[k - n]) * ir2;
                    rr + tt - s
                }
            })
            .collect()
    }

    fn jacobian_diag(&self, u: &[f64]) -> Vec<f64> {
        let n = self.g.n_theta();
        self.unknowns()
            .map(|k| {
                let s = self.r2q[k] * (2.0 * u[k]).exp();
                if k < n {
                    let (_, dg) = Self::cone_slope(self.robin.expect("Robin row"), s);
                    dg / self.g.d_rho() + s
                } else {
                    2.0 * s
                }
            })
            .collect()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solve with default options apart from `tol` and `max_iter`.
pub fn solve_kw(p: &KwProblem, tol: f64, max_iter: usize) -> Result<(ScalarField, SolveReport)> {
    solve_kw_with(
        p,
        SolveOptions {
            tol,
            max_iter,
            ..Default::default()
        },
    )
}

pub fn solve_kw_with(p: &KwProblem, opts: SolveOptions) -> Result<(ScalarField, SolveReport)> {
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive (got {})", opts.tol)));
    }
    let nw = Newton::new(p);
    let g = nw.g;
    let n = g.n_theta();
    let mut u = p.initial.clone().unwrap_or_else(|| p.default_initial()).into_values();
    let last = (g.n_rho() - 1) * n;
    u[last..].copy_from_slice(&p.outer);
    if let InnerBoundary::Dirichlet(v) = &p.inner {
        u[..n].copy_from_slice(v);
    }
    let range = nw.unknowns();
    let mut f = nw.residual(&u);
    let mut norm = max_abs(&f);
    let mut report = SolveReport {
        iterations: 0,
        final_residual: norm,
        damping: vec![],
        converged: false,
        residual_history: vec![norm],
        linear_iterations: vec![],
        kw_residual: f64::NAN,
    };
    while norm > opts.tol && report.iterations < opts.max_iter {
        let op = linear::ShiftedLaplacian::new(&g, nw.robin.is_some(), nw.jacobian_diag(&u));
        let (delta, lin_it) = linear::solve(&op, &f, opts.linear_rtol)?;
        report.linear_iterations.push(lin_it);
        let mut lambda = 1.0;
        let accepted = loop {
            let mut trial = u.clone();
            for (t, d) in trial[range.clone()].iter_mut().zip(&delta) {
                *t += lambda * d;
            }
            let ft = nw.residual(&trial);
            let nt = max_abs(&ft);
            if nt.is_finite() && nt < norm {
                u = trial;
                f = ft;
                norm = nt;
                break true;
            }
            lambda *= 0.5;
            if lambda < opts.min_step {
                break false;
            }
        };
        if !accepted {
            break;
        }
        report.iterations += 1;
        report.damping.push(lambda);
        report.residual_history.push(norm);
    }
    report.final_residual = norm;
    report.converged = norm <= opts.tol;
    let u = ScalarField::new(g, u)?;
    report.kw_residual = kw_residual(&u, &p.q)?;
    Ok((u, report))
}

/// max over interior nodes of |Δu − q e^{2u}|.
pub fn kw_residual(u: &ScalarField, q: &ScalarField) -> Result<f64> {
    if u.grid() != q.grid() {
        return Err(Error::Dimension("u and q on different grids".into()));
    }
    let lap = laplacian(u);
    let g = *u.grid();
    Ok(g.interior_nodes()
        .map(|(i, j)| (lap.at(i, j) - q.at(i, j) * (2.0 * u.at(i, j)).exp()).abs())
        .fold(0.0, f64::max))
}

/// h = Aρ + h₀ with h₀ discrete-harmonic and h matching the boundary data.
pub fn solve_harmonic(grid: LogPolarGrid, inner: &[f64], outer: &[f64], log_coefficient: f64) -> Result<ScalarField> {
    check_row(&grid, inner, "inner")?;
    check_row(&grid, outer, "outer")?;
    if !log_coefficient.is_finite() {
        return Err(Error::Domain("log coefficient must be finite".into()));
    }
    let n = grid.n_theta();
    let (ir2, it2) = (1.0 / grid.d_rho().powi(2), 1.0 / grid.d_theta().powi(2));
    let (r0, r1) = (grid.rho_min(), grid.rho_max());
    let a = log_coefficient;
    // h₀ boundary values, linear-in-ρ interpolation as a lift
    let lift: Vec<f64> = grid
        .nodes()
        .map(|(i, j)| {
            let t = i as f64 / (grid.n_rho() - 1) as f64;
            (1.0 - t) * (inner[j] - a * r0) + t * (outer[j] - a * r1)
        })
        .collect();
    // the lift is affine in ρ, so only its θ part has a nonzero Laplacian
    let rhs: Vec<f64> = (n..(grid.n_rho() - 1) * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let l = |jj: usize| lift[i * n + jj];
            let tt = (l(grid.wrap(j as isize - 1)) - 2.0 * l(j) + l(grid.wrap(j as isize + 1))) * it2;
            let rr = (lift[k + n] - 2.0 * lift[k] + lift[k - n]) * ir2;
            rr + tt
        })
        .collect();
    let op = linear::ShiftedLaplacian::new(&grid, false, vec![0.0; rhs.len()]);
    let (corr, _) = linear::solve(&op, &rhs, 1e-13)?;
    let mut h = lift;
    for (k, c) in corr.iter().enumerate() {
        h[n + k] += c;
    }
    for (i, j) in grid.nodes() {
        h[grid.index(i, j)] += a * grid.rho(i);
    }
    ScalarField::new(grid, h)
}
