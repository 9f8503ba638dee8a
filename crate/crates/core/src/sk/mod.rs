//! The special Kähler data model.
//!
//! Harmonic data `(h, u, a)` on a punctured domain determine the metric
//! `g = e^{−u}|dz|²` and the connection 1-form
//!
//! ```text
//!        ⎛ ω11   −∗ω11 ⎞
//!  ω∇ =  ⎝ ∗ω22    ω22 ⎠ ,   2ω11 = e^u σ − du,   2ω22 = −e^u σ − du,
//! ```
//!
//! with σ = dh + aφ (+ 2ψ for an extra harmonic 1-form ψ) and
//! φ = (y dx − x dy)/(x² + y²). The same σ is the Kazdan–Warner source:
//! `Δu = |σ|² e^{2u}`. With this normalisation the η-system for
//! η = e^{−u}ω11 is algebraically equivalent to the Kazdan–Warner equation,
//! and the log family reproduces its known monodromy.
//!
//! Residuals on log-polar grids are reported in the conformal coordinates
//! (ρ, θ): scalar equations are multiplied by r², 2-forms are taken as
//! coefficients of dρ∧dθ. This keeps them uniform down to small radii.

mod prepotential;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    codifferential_log_polar, exterior_derivative_log_polar, gradient, hodge_star, laplacian, laplacian_log_polar, polar_components, wirtinger_dzbar,
    ComplexField, Covector, LogPolarGrid, OneFormField, ScalarField,
};
use crate::mat2::Mat2;

pub use prepotential::{prepotential_consistency, PrepotentialCheck, PrepotentialSign};

/// The generator φ = (y dx − x dy)/(x² + y²) of H¹ of the punctured plane.
pub fn phi(z: Complex64) -> Covector {
    let r2 = z.norm_sqr();
    [z.im / r2, -z.re / r2]
}

/// Harmonic data available in closed form, evaluable at any point.
pub trait SkStructure: Send + Sync {
    fn h(&self, z: Complex64) -> f64;
    fn grad_h(&self, z: Complex64) -> Covector;
    fn u(&self, z: Complex64) -> f64;
    fn grad_u(&self, z: Complex64) -> Covector;

    /// Coefficient of φ.
    fn a(&self) -> f64 {
        0.0
    }

    /// Additional harmonic 1-form (harmonic representative), zero by default.
    fn psi(&self, _z: Complex64) -> Covector {
        [0.0, 0.0]
    }

    /// σ = dh + aφ + 2ψ.
    fn source(&self, z: Complex64) -> Covector {
        let dh = self.grad_h(z);
        let p = phi(z);
        let s = self.psi(z);
        let a = self.a();
        [dh[0] + a * p[0] + 2.0 * s[0], dh[1] + a * p[1] + 2.0 * s[1]]
    }

    fn omega11(&self, z: Complex64) -> Covector {
        let e = self.u(z).exp();
        let s = self.source(z);
        let du = self.grad_u(z);
        [0.5 * (e * s[0] - du[0]), 0.5 * (e * s[1] - du[1])]
    }

    fn omega22(&self, z: Complex64) -> Covector {
        let e = self.u(z).exp();
        let s = self.source(z);
        let du = self.grad_u(z);
        [-0.5 * (e * s[0] + du[0]), -0.5 * (e * s[1] + du[1])]
    }

    /// Ξ₀ = ½(a/(2z) − i ∂h/∂z).
    fn cubic_xi0(&self, z: Complex64) -> Complex64 {
        let [hx, hy] = self.grad_h(z);
        let dh_dz = Complex64::new(0.5 * hx, -0.5 * hy);
        0.5 * (self.a() / (2.0 * z) - Complex64::i() * dh_dz)
    }
}

/// Connection matrix ω∇ applied to a tangent vector v.
pub fn connection_matrix(w11: Covector, w22: Covector, v: [f64; 2]) -> Mat2 {
    let star = |w: Covector| [-w[1], w[0]];
    let ev = |w: Covector| w[0] * v[0] + w[1] * v[1];
    Mat2::new(ev(w11), -ev(star(w11)), ev(star(w22)), ev(w22))
}

/// Harmonic data sampled on a log-polar grid.
#[derive(Clone, Debug)]
pub struct SkTriple {
    pub h: ScalarField,
    pub u: ScalarField,
    pub dh: OneFormField,
    pub du: OneFormField,
    pub a: f64,
    pub psi: Option<OneFormField>,
}

impl SkTriple {
    /// Triple from samples of h and u; differentials by finite differences.
    pub fn new(h: ScalarField, u: ScalarField, a: f64) -> Result<Self> {
        let (dh, du) = (gradient(&h), gradient(&u));
        Self::from_parts(h, u, dh, du, a)
    }

    pub fn from_parts(
        h: ScalarField,
        u: ScalarField,
        dh: OneFormField,
        du: OneFormField,
        a: f64,
    ) -> Result<Self> {
        let g = h.grid();
        if u.grid() != g || dh.grid() != g || du.grid() != g {
            return Err(Error::Dimension("triple components on different grids".into()));
        }
        if !a.is_finite() {
            return Err(Error::Domain("a must be finite".into()));
        }
        Ok(Self {
            h,
            u,
            dh,
            du,
            a,
            psi: None,
        })
    }

    /// Sample a closed-form structure, with exact differentials.
    pub fn from_structure(s: &dyn SkStructure, grid: LogPolarGrid) -> Result<Self> {
        let mut t = Self::from_parts(
            ScalarField::from_fn(grid, |z| s.h(z))?,
            ScalarField::from_fn(grid, |z| s.u(z))?,
            OneFormField::from_fn(grid, |z| s.grad_h(z))?,
            OneFormField::from_fn(grid, |z| s.grad_u(z))?,
            s.a(),
        )?;
        let psi = OneFormField::from_fn(grid, |z| s.psi(z))?;
        if psi.components().iter().any(|c| c[0] != 0.0 || c[1] != 0.0) {
            t.psi = Some(psi);
        }
        Ok(t)
    }

    pub fn with_psi(mut self, psi: OneFormField) -> Result<Self> {
        if psi.grid() != self.grid() {
            return Err(Error::Dimension("psi on a different grid".into()));
        }
        self.psi = Some(psi);
        Ok(self)
    }

    pub fn grid(&self) -> &LogPolarGrid {
        self.h.grid()
    }

    /// σ = dh + aφ + 2ψ.
    pub fn source(&self) -> OneFormField {
        let a = self.a;
        let g = *self.grid();
        let comps = g
            .nodes()
            .map(|(i, j)| {
                let dh = self.dh.at(i, j);
                let p = phi(g.point(i, j));
                let s = self.psi.as_ref().map_or([0.0, 0.0], |f| f.at(i, j));
                [dh[0] + a * p[0] + 2.0 * s[0], dh[1] + a * p[1] + 2.0 * s[1]]
            })
            .collect();
        OneFormField::from_raw(g, comps)
    }

    /// r²Δh at every node (boundary rows zero).
    pub fn harmonicity_residual_field(&self) -> ScalarField {
        let mut v = laplacian_log_polar(&self.h).into_values();
        zero_boundary_rows(self.grid(), &mut v);
        ScalarField::from_raw(*self.grid(), v)
    }

    /// max over interior nodes of |r²Δh|.
    pub fn harmonicity_residual(&self) -> f64 {
        self.harmonicity_residual_field().max_abs_interior()
    }

    /// r²(Δu − |σ|²e^{2u}) at every node (boundary rows zero).
    pub fn kw_residual_field(&self) -> ScalarField {
        let g = *self.grid();
        let lap = laplacian_log_polar(&self.u);
        let sigma = self.source();
        let v = g
            .nodes()
            .map(|(i, j)| {
                if !g.is_interior_row(i) {
                    return 0.0;
                }
                let [sx, sy] = sigma.at(i, j);
                let r2 = g.radius(i).powi(2);
                lap.at(i, j) - r2 * (sx * sx + sy * sy) * (2.0 * self.u.at(i, j)).exp()
            })
            .collect();
        ScalarField::from_raw(g, v)
    }

    /// max over interior nodes of |r²(Δu − |σ|²e^{2u})|.
    pub fn kw_residual(&self) -> f64 {
        self.kw_residual_field().max_abs_interior()
    }

    /// Both invariants below `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let (hr, kr) = (self.harmonicity_residual(), self.kw_residual());
        if hr > tol || kr > tol {
            return Err(Error::Domain(format!(
                "triple invalid: harmonicity residual {hr:.3e}, KW residual {kr:.3e} (tol {tol:.1e})"
            )));
        }
        Ok(())
    }
}

/// The two generating 1-forms of ω∇.
#[derive(Clone, Debug)]
pub struct ConnectionForm {
    pub omega11: OneFormField,
    pub omega22: OneFormField,
}

impl ConnectionForm {
    pub fn new(omega11: OneFormField, omega22: OneFormField) -> Result<Self> {
        if omega11.grid() != omega22.grid() {
            return Err(Error::Dimension("connection forms on different grids".into()));
        }
        Ok(Self { omega11, omega22 })
    }

    pub fn grid(&self) -> &LogPolarGrid {
        self.omega11.grid()
    }

    /// max |ω11 + ω22 + du| over all nodes.
    pub fn trace_defect(&self, du: &OneFormField) -> f64 {
        self.omega11
            .components()
            .iter()
            .zip(self.omega22.components())
            .zip(du.components())
            .map(|((a, b), d)| (a[0] + b[0] + d[0]).abs().max((a[1] + b[1] + d[1]).abs()))
            .fold(0.0, f64::max)
    }

    /// Connection matrix at node (i, j) applied to v.
    pub fn matrix_at(&self, i: usize, j: usize, v: [f64; 2]) -> Mat2 {
        connection_matrix(self.omega11.at(i, j), self.omega22.at(i, j), v)
    }
}

pub fn connection_from_triple(t: &SkTriple) -> ConnectionForm {
    let g = *t.grid();
    let sigma = t.source();
    let (w11, w22) = g
        .nodes()
        .map(|(i, j)| {
            let e = t.u.at(i, j).exp();
            let s = sigma.at(i, j);
            let du = t.du.at(i, j);
            (
                [0.5 * (e * s[0] - du[0]), 0.5 * (e * s[1] - du[1])],
                [-0.5 * (e * s[0] + du[0]), -0.5 * (e * s[1] + du[1])],
            )
        })
        .unzip();
    ConnectionForm {
        omega11: OneFormField::from_raw(g, w11),
        omega22: OneFormField::from_raw(g, w22),
    }
}

/// Sample a closed-form connection directly (no differencing).
pub fn connection_from_structure(s: &dyn SkStructure, grid: LogPolarGrid) -> Result<ConnectionForm> {
    ConnectionForm::new(
        OneFormField::from_fn(grid, |z| s.omega11(z))?,
        OneFormField::from_fn(grid, |z| s.omega22(z))?,
    )
}

fn zero_boundary_rows(g: &LogPolarGrid, v: &mut [f64]) {
    let n = g.n_theta();
    let last = g.n_rho() - 1;
    v[..n].fill(0.0);
    v[last * n..].fill(0.0);
}

/// max over interior nodes of the entries of dω∇ + ω∇∧ω∇, as dρ∧dθ coefficients.
pub fn flatness_residual(c: &ConnectionForm) -> f64 {
    flatness_residual_field(c).max_abs_interior()
}

/// Pointwise largest entry of dω∇ + ω∇∧ω∇ (dρ∧dθ coefficients, boundary rows zero).
pub fn flatness_residual_field(c: &ConnectionForm) -> ScalarField {
    let g = *c.grid();
    let neg = |w: &OneFormField| w.combine(-1.0, w, 0.0).expect("same grid");
    // matrix pattern [[ω11, −∗ω11], [∗ω22, ω22]]
    let entries = [
        [c.omega11.clone(), neg(&hodge_star(&c.omega11))],
        [hodge_star(&c.omega22), c.omega22.clone()],
    ];
    let polar: Vec<Vec<(ScalarField, ScalarField)>> = entries
        .iter()
        .map(|row| row.iter().map(polar_components).collect())
        .collect();
    let d: Vec<Vec<ScalarField>> = entries
        .iter()
        .map(|row| row.iter().map(exterior_derivative_log_polar).collect())
        .collect();
    let mut out = vec![0.0; g.len()];
    for (i, j) in g.interior_nodes() {
        let mut worst = 0.0_f64;
        for a in 0..2 {
            for b in 0..2 {
                let mut v = d[a][b].at(i, j);
                for k in 0..2 {
                    let (ar, at) = (&polar[a][k].0, &polar[a][k].1);
                    let (br, bt) = (&polar[k][b].0, &polar[k][b].1);
                    v += ar.at(i, j) * bt.at(i, j) - at.at(i, j) * br.at(i, j);
                }
                worst = worst.max(v.abs());
            }
        }
        out[g.index(i, j)] = worst;
    }
    ScalarField::from_raw(g, out)
}

/// Residuals of the η-system for η = e^{−u}ω11:
///
/// ```text
/// ∗d∗η = 2∗(∗η∧du) − 2e^u|η|²,     Δu = |2η + e^{−u}du|² e^{2u},
/// ```
///
/// both multiplied by r². Returns the max over interior nodes of each.
pub fn eta_residual(t: &SkTriple) -> (f64, f64) {
    let (a, b) = eta_residual_fields(t);
    (a.max_abs_interior(), b.max_abs_interior())
}

/// Pointwise residuals of the two η-system equations (boundary rows zero).
pub fn eta_residual_fields(t: &SkTriple) -> (ScalarField, ScalarField) {
    let g = *t.grid();
    let c = connection_from_triple(t);
    let emu = t.u.map(|u| (-u).exp()).expect("finite");
    let eta = c.omega11.scaled_by(&emu).expect("same grid");
    let div = codifferential_log_polar(&eta);
    let lap_u = laplacian_log_polar(&t.u);
    let mut r1 = vec![0.0; g.len()];
    let mut r2 = vec![0.0; g.len()];
    for (i, j) in g.interior_nodes() {
        let rr = g.radius(i).powi(2);
        let e = t.u.at(i, j).exp();
        let n = eta.at(i, j);
        let du = t.du.at(i, j);
        // r²·2∗(∗η∧du) = −2 r² η·du, r²|η|² as usual
        let eta_du = n[0] * du[0] + n[1] * du[1];
        let eta2 = n[0] * n[0] + n[1] * n[1];
        let res1 = div.at(i, j) + 2.0 * rr * eta_du + 2.0 * e * rr * eta2;
        let m = [2.0 * n[0] + du[0] / e, 2.0 * n[1] + du[1] / e];
        let res2 = lap_u.at(i, j) - rr * (m[0] * m[0] + m[1] * m[1]) * e * e;
        r1[g.index(i, j)] = res1;
        r2[g.index(i, j)] = res2;
    }
    (ScalarField::from_raw(g, r1), ScalarField::from_raw(g, r2))
}

/// The holomorphic cubic form Ξ = Ξ₀ dz³.
#[derive(Clone, Debug)]
pub struct CubicForm {
    pub xi0: ComplexField,
    /// Order N at the origin, filled in by the asymptotics module.
    pub order_at_origin: Option<i32>,
}

/// Ξ₀ = ½(a/(2z) − i ∂h/∂z) from the sampled triple.
pub fn cubic_form(t: &SkTriple) -> Result<CubicForm> {
    if t.psi.is_some() {
        return Err(Error::Invalid(
            "cubic form is defined for punctured-disc data (h, u, a) without psi".into(),
        ));
    }
    let g = *t.grid();
    let vals = g
        .nodes()
        .map(|(i, j)| {
            let [hx, hy] = t.dh.at(i, j);
            let dh_dz = Complex64::new(0.5 * hx, -0.5 * hy);
            0.5 * (t.a / (2.0 * g.point(i, j)) - Complex64::i() * dh_dz)
        })
        .collect();
    Ok(CubicForm {
        xi0: ComplexField::new(g, vals)?,
        order_at_origin: None,
    })
}

/// max |r·∂Ξ₀/∂z̄| over interior nodes, relative to max |Ξ₀| (absolute if Ξ₀ ≡ 0).
pub fn holomorphy_residual(cf: &CubicForm) -> f64 {
    holomorphy_residual_field(cf).max_abs_interior()
}

/// Pointwise |r·∂Ξ₀/∂z̄| / max|Ξ₀| (boundary rows zero).
pub fn holomorphy_residual_field(cf: &CubicForm) -> ScalarField {
    let g = *cf.xi0.grid();
    let dzb = wirtinger_dzbar(&cf.xi0);
    let scale = cf.xi0.max_abs_interior();
    let scale = if scale > 1e-300 { scale } else { 1.0 };
    let mut v: Vec<f64> = g
        .nodes()
        .map(|(i, j)| g.radius(i) * dzb.at(i, j).norm() / scale)
        .collect();
    zero_boundary_rows(&g, &mut v);
    ScalarField::from_raw(g, v)
}

/// w = e^{−u}.
pub fn metric_density(t: &SkTriple) -> ScalarField {
    t.u.map(|u| (-u).exp()).expect("exp of finite samples")
}

/// Gaussian curvature K = −Δ(log w)/(2w) of g = w|dz|².
pub fn gaussian_curvature(w: &ScalarField) -> Result<ScalarField> {
    if let Some(bad) = w.values().iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::Domain(format!("metric density must be positive, found {bad}")));
    }
    let lw = w.map(f64::ln)?;
    let lap = laplacian(&lw);
    lap.zip_with(w, |l, w| -l / (2.0 * w))
}
