use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::fields::{Covector, OneFormField};
use crate::error::{Error, Result};

/// A circle traversed once; `orientation` is +1 (counterclockwise) or −1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    pub center: Complex64,
    pub radius: f64,
    pub orientation: i8,
    /// Number of quadrature nodes (or initial integrator steps).
    pub n_steps: usize,
}

impl Loop {
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(center, radius, 1, 256)
    }

    pub fn new(center: Complex64, radius: f64, orientation: i8, n_steps: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("loop radius {radius} must be positive")));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::Invalid(format!("orientation {orientation} not ±1")));
        }
        Ok(Self {
            center,
            radius,
            orientation,
            n_steps: n_steps.max(8),
        })
    }

    /// γ(t) for t ∈ [0, 2π].
    pub fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, self.orientation as f64 * t)
    }

    /// γ′(t) as a Cartesian vector.
    pub fn velocity(&self, t: f64) -> [f64; 2] {
        let s = self.orientation as f64;
        let (sn, cs) = (s * t).sin_cos();
        [-s * self.radius * sn, s * self.radius * cs]
    }
}

/// ∮_γ ω for a 1-form given in closed form.
///
/// The trapezoid rule on a circle is spectrally accurate for smooth periodic
/// integrands.
pub fn contour_integral_fn(form: impl Fn(Complex64) -> Covector, lp: &Loop) -> f64 {
    let n = lp.n_steps;
    let dt = TAU / n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            let a = form(lp.point(t));
            let v = lp.velocity(t);
            a[0] * v[0] + a[1] * v[1]
        })
        .sum::<f64>()
        * dt
}

/// ∮_γ ω for a sampled 1-form, bilinearly interpolated onto the loop.
pub fn contour_integral(form: &OneFormField, lp: &Loop) -> Result<f64> {
    let n = lp.n_steps;
    let dt = TAU / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let t = k as f64 * dt;
        let a = form.interpolate(lp.point(t)).ok_or_else(|| {
            Error::Domain(format!("loop leaves the annulus at t = {t:.4}"))
        })?;
        let v = lp.velocity(t);
        sum += a[0] * v[0] + a[1] * v[1];
    }
    Ok(sum * dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{gradient, LogPolarGrid, ScalarField};
    use std::f64::consts::PI;

    fn phi(z: Complex64) -> Covector {
        let r2 = z.norm_sqr();
        [z.im / r2, -z.re / r2]
    }

    #[test]
    fn phi_around_unit_circle() {
        let lp = Loop::circle(Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert!((contour_integral_fn(phi, &lp) + 2.0 * PI).abs() < 1e-12);
        let cw = Loop::new(Complex64::new(0.0, 0.0), 0.3, -1, 64).unwrap();
        assert!((contour_integral_fn(phi, &cw) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn exact_forms_integrate_to_zero() {
        let lp = Loop::circle(Complex64::new(0.0, 0.0), 0.7).unwrap();
        // d log r
        let dlog = |z: Complex64| {
            let r2 = z.norm_sqr();
            [z.re / r2, z.im / r2]
        };
        assert!(contour_integral_fn(dlog, &lp).abs() < 1e-12);
        let g = LogPolarGrid::annulus(0.1, 1.0, 65, 64).unwrap();
        let h = ScalarField::from_fn(g, |z| (z * z).re + 3.0 * z.im).unwrap();
        let v = contour_integral(&gradient(&h), &lp).unwrap();
        assert!(v.abs() < 1e-10, "{v}");
    }

    #[test]
    fn loop_outside_sampled_domain_is_an_error() {
        let g = LogPolarGrid::annulus(0.1, 1.0, 8, 8).unwrap();
        let w = OneFormField::zero(g);
        let lp = Loop::circle(Complex64::new(0.5, 0.0), 0.6).unwrap();
        assert!(matches!(contour_integral(&w, &lp), Err(Error::Domain(_))));
    }
}
