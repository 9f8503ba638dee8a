use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use super::fields::{ComplexField, Covector, OneFormField, ScalarField};
use super::grid::LogPolarGrid;

trait Sample: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl Sample for f64 {}
impl Sample for Complex64 {}

/// ∂/∂ρ at node (i, j); centred inside, one-sided second order on boundary rows.
fn drho_at<T: Sample>(v: &[T], g: &LogPolarGrid, i: usize, j: usize) -> T {
    let h = g.d_rho();
    let at = |k: usize| v[g.index(k, j)];
    let n = g.n_rho();
    if i == 0 {
        (at(1) * 4.0 - at(0) * 3.0 - at(2)) * (0.5 / h)
    } else if i == n - 1 {
        (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) * (0.5 / h)
    } else {
        (at(i + 1) - at(i - 1)) * (0.5 / h)
    }
}

fn dtheta_at<T: Sample>(v: &[T], g: &LogPolarGrid, i: usize, j: usize) -> T {
    let h = g.d_theta();
    let jp = g.wrap(j as isize + 1);
    let jm = g.wrap(j as isize - 1);
    (v[g.index(i, jp)] - v[g.index(i, jm)]) * (0.5 / h)
}

/// ∂²/∂ρ² + ∂²/∂θ² at node (i, j).
fn lap_rt_at(v: &[f64], g: &LogPolarGrid, i: usize, j: usize) -> f64 {
    let hr2 = g.d_rho() * g.d_rho();
    let ht2 = g.d_theta() * g.d_theta();
    let at = |k: usize, l: usize| v[g.index(k, l)];
    let n = g.n_rho();
    let f_rr = if i == 0 {
        (2.0 * at(0, j) - 5.0 * at(1, j) + 4.0 * at(2, j) - at(3, j)) / hr2
    } else if i == n - 1 {
        (2.0 * at(n - 1, j) - 5.0 * at(n - 2, j) + 4.0 * at(n - 3, j) - at(n - 4, j)) / hr2
    } else {
        (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / hr2
    };
    let jp = g.wrap(j as isize + 1);
    let jm = g.wrap(j as isize - 1);
    let f_tt = (at(i, jp) - 2.0 * at(i, j) + at(i, jm)) / ht2;
    f_rr + f_tt
}

pub fn d_rho(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let v = f.values();
    ScalarField::from_raw(g, g.nodes().map(|(i, j)| drho_at(v, &g, i, j)).collect())
}

pub fn d_theta(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let v = f.values();
    ScalarField::from_raw(g, g.nodes().map(|(i, j)| dtheta_at(v, &g, i, j)).collect())
}

/// Flat Laplacian Δ = ∂²ₓₓ + ∂²ᵧᵧ = e^{−2ρ}(∂²ρρ + ∂²θθ), second order.
///
/// Interior rows use the centred five-point stencil; the two boundary rows use
/// a one-sided second-order ρ stencil and should not be trusted for residuals.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let v = f.values();
    ScalarField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| lap_rt_at(v, &g, i, j) * (-2.0 * g.rho(i)).exp())
            .collect(),
    )
}

/// r²·Δf, i.e. the Laplacian in the conformal coordinates (ρ, θ).
pub fn laplacian_log_polar(f: &ScalarField) -> ScalarField {
    let g = *f.grid();
    let v = f.values();
    ScalarField::from_raw(g, g.nodes().map(|(i, j)| lap_rt_at(v, &g, i, j)).collect())
}

/// Cartesian components of a covector given its (ρ, θ) components at node (i, j).
#[inline]
pub(crate) fn polar_to_cartesian(g: &LogPolarGrid, i: usize, j: usize, c_rho: f64, c_theta: f64) -> Covector {
    let r = g.radius(i);
    let (s, c) = g.theta(j).sin_cos();
    [(c_rho * c - c_theta * s) / r, (c_rho * s + c_theta * c) / r]
}

#[inline]
pub(crate) fn cartesian_to_polar(g: &LogPolarGrid, i: usize, j: usize, a: Covector) -> (f64, f64) {
    let r = g.radius(i);
    let (s, c) = g.theta(j).sin_cos();
    (r * (a[0] * c + a[1] * s), r * (-a[0] * s + a[1] * c))
}

/// df as a Cartesian 1-form.
pub fn gradient(f: &ScalarField) -> OneFormField {
    let g = *f.grid();
    let v = f.values();
    OneFormField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| polar_to_cartesian(&g, i, j, drho_at(v, &g, i, j), dtheta_at(v, &g, i, j)))
            .collect(),
    )
}

/// Components (α_ρ, α_θ) of α = α_ρ dρ + α_θ dθ.
pub fn polar_components(w: &OneFormField) -> (ScalarField, ScalarField) {
    let g = *w.grid();
    let (rho, theta): (Vec<f64>, Vec<f64>) = g
        .nodes()
        .map(|(i, j)| cartesian_to_polar(&g, i, j, w.at(i, j)))
        .unzip();
    (ScalarField::from_raw(g, rho), ScalarField::from_raw(g, theta))
}

/// (a_x dx + a_y dy) ↦ (−a_y dx + a_x dy).
pub fn hodge_star(w: &OneFormField) -> OneFormField {
    OneFormField::from_raw(
        *w.grid(),
        w.components().iter().map(|&[x, y]| [-y, x]).collect(),
    )
}

/// Coefficient of dρ∧dθ in dα (equals r² times the dx∧dy coefficient).
pub(crate) fn exterior_derivative_log_polar(w: &OneFormField) -> ScalarField {
    let g = *w.grid();
    let (a_rho, a_theta) = polar_components(w);
    let (ar, at) = (a_rho.values(), a_theta.values());
    ScalarField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| drho_at(at, &g, i, j) - dtheta_at(ar, &g, i, j))
            .collect(),
    )
}

/// Coefficient c of dα = c dx∧dy.
pub fn exterior_derivative(w: &OneFormField) -> ScalarField {
    let g = *w.grid();
    let d = exterior_derivative_log_polar(w);
    ScalarField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| d.at(i, j) * (-2.0 * g.rho(i)).exp())
            .collect(),
    )
}

/// r²·(∗d∗α) = ∂ρα_ρ + ∂θα_θ.
pub(crate) fn codifferential_log_polar(w: &OneFormField) -> ScalarField {
    let g = *w.grid();
    let (a_rho, a_theta) = polar_components(w);
    let (ar, at) = (a_rho.values(), a_theta.values());
    ScalarField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| drho_at(ar, &g, i, j) + dtheta_at(at, &g, i, j))
            .collect(),
    )
}

/// ∗d∗α, the flat divergence ∂ₓa_x + ∂ᵧa_y.
pub fn codifferential(w: &OneFormField) -> ScalarField {
    let g = *w.grid();
    let d = codifferential_log_polar(w);
    ScalarField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| d.at(i, j) * (-2.0 * g.rho(i)).exp())
            .collect(),
    )
}

fn wirtinger(f: &ComplexField, sign: f64) -> ComplexField {
    let g = *f.grid();
    let v = f.values();
    let i_unit = Complex64::new(0.0, sign);
    ComplexField::from_raw(
        g,
        g.nodes()
            .map(|(i, j)| {
                let fr = drho_at(v, &g, i, j);
                let ft = dtheta_at(v, &g, i, j);
                // ∂/∂z = ½ e^{−ρ} e^{−iθ}(∂ρ − i∂θ), ∂/∂z̄ = ½ e^{−ρ} e^{iθ}(∂ρ + i∂θ)
                let pref = Complex64::from_polar(0.5 * (-g.rho(i)).exp(), sign * g.theta(j));
                pref * (fr + i_unit * ft)
            })
            .collect(),
    )
}

/// ∂f/∂z = ½(∂ₓ − i∂ᵧ)f.
pub fn wirtinger_dz(f: &ComplexField) -> ComplexField {
    wirtinger(f, -1.0)
}

/// ∂f/∂z̄ = ½(∂ₓ + i∂ᵧ)f.
pub fn wirtinger_dzbar(f: &ComplexField) -> ComplexField {
    wirtinger(f, 1.0)
}
