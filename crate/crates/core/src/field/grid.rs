use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Uniform grid in (ρ, θ) with ρ = log r; periodic in θ.
///
/// Node (i, j) sits at ρᵢ = ρ_min + i·Δρ (i = 0 … n_rho−1, both ends included)
/// and θⱼ = j·Δθ with Δθ = 2π / n_theta.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogPolarGrid {
    rho_min: f64,
    rho_max: f64,
    n_rho: usize,
    n_theta: usize,
}

/// Position of a point relative to the grid cells, for bilinear interpolation.
#[derive(Clone, Copy, Debug)]
pub struct GridLocation {
    pub i: usize,
    pub fi: f64,
    pub j: usize,
    pub fj: f64,
}

impl LogPolarGrid {
    pub fn new(rho_min: f64, rho_max: f64, n_rho: usize, n_theta: usize) -> Result<Self> {
        if !(rho_min.is_finite() && rho_max.is_finite()) || rho_min >= rho_max {
            return Err(Error::Dimension(format!(
                "need rho_min < rho_max, got [{rho_min}, {rho_max}]"
            )));
        }
        if n_rho < 4 {
            return Err(Error::Dimension(format!("n_rho = {n_rho} < 4")));
        }
        if n_theta < 8 || n_theta % 2 != 0 {
            return Err(Error::Dimension(format!(
                "n_theta = {n_theta} must be even and at least 8"
            )));
        }
        Ok(Self {
            rho_min,
            rho_max,
            n_rho,
            n_theta,
        })
    }

    /// Grid on the annulus r_min ≤ |z| ≤ r_max.
    pub fn annulus(r_min: f64, r_max: f64, n_rho: usize, n_theta: usize) -> Result<Self> {
        if !(r_min > 0.0) {
            return Err(Error::Dimension(format!("r_min = {r_min} must be positive")));
        }
        Self::new(r_min.ln(), r_max.ln(), n_rho, n_theta)
    }

    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }
    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }
    pub fn n_rho(&self) -> usize {
        self.n_rho
    }
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }
    pub fn r_min(&self) -> f64 {
        self.rho_min.exp()
    }
    pub fn r_max(&self) -> f64 {
        self.rho_max.exp()
    }
    pub fn len(&self) -> usize {
        self.n_rho * self.n_theta
    }
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn d_rho(&self) -> f64 {
        (self.rho_max - self.rho_min) / (self.n_rho - 1) as f64
    }
    pub fn d_theta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    /// Largest of the two spacings; the "h" of refinement studies.
    pub fn spacing(&self) -> f64 {
        self.d_rho().max(self.d_theta())
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.rho_min + i as f64 * self.d_rho()
    }
    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.d_theta()
    }
    pub fn radius(&self, i: usize) -> f64 {
        self.rho(i).exp()
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radius(i), self.theta(j))
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    /// θ-index with periodic wrap (index n_theta ≡ 0).
    #[inline]
    pub fn wrap(&self, j: isize) -> usize {
        j.rem_euclid(self.n_theta as isize) as usize
    }

    pub fn is_interior_row(&self, i: usize) -> bool {
        i > 0 && i + 1 < self.n_rho
    }

    /// Iterator over all (i, j) in storage order (ρ outer, θ inner).
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_rho).flat_map(move |i| (0..self.n_theta).map(move |j| (i, j)))
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.n_rho - 1).flat_map(move |i| (0..self.n_theta).map(move |j| (i, j)))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        r > 0.0 && {
            let rho = r.ln();
            rho >= self.rho_min - 1e-12 && rho <= self.rho_max + 1e-12
        }
    }

    /// Locate `z` for bilinear interpolation in (ρ, θ); `None` outside the annulus.
    pub fn locate(&self, z: Complex64) -> Option<GridLocation> {
        if !self.contains(z) {
            return None;
        }
        let rho = z.norm().ln().clamp(self.rho_min, self.rho_max);
        let s = (rho - self.rho_min) / self.d_rho();
        let i = (s.floor() as usize).min(self.n_rho - 2);
        let fi = s - i as f64;
        let t = z.arg().rem_euclid(TAU) / self.d_theta();
        let j = (t.floor() as usize) % self.n_theta;
        let fj = t - t.floor();
        Some(GridLocation { i, fi, j, fj })
    }

    /// Refined copy with both counts multiplied by `factor` (same annulus).
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n_rho: (self.n_rho - 1) * factor + 1,
            n_theta: self.n_theta * factor,
            ..*self
        }
    }
}
