use num_complex::Complex64;

use super::grid::{GridLocation, LogPolarGrid};
use crate::error::{Error, Result};

/// Components (a_x, a_y) of a 1-form a_x dx + a_y dy.
pub type Covector = [f64; 2];

fn check_finite<'a>(what: &str, mut vals: impl Iterator<Item = &'a f64>) -> Result<()> {
    if vals.all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} has non-finite samples")))
    }
}

pub(crate) fn same_grid(a: &LogPolarGrid, b: &LogPolarGrid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Dimension("fields live on different grids".into()))
    }
}

fn lerp<T>(loc: &GridLocation, grid: &LogPolarGrid, at: impl Fn(usize) -> T) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let j1 = (loc.j + 1) % grid.n_theta();
    let (i0, i1) = (loc.i, loc.i + 1);
    at(grid.index(i0, loc.j)) * ((1.0 - loc.fi) * (1.0 - loc.fj))
        + at(grid.index(i0, j1)) * ((1.0 - loc.fi) * loc.fj)
        + at(grid.index(i1, loc.j)) * (loc.fi * (1.0 - loc.fj))
        + at(grid.index(i1, j1)) * (loc.fi * loc.fj)
}

/// Real samples at every node of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: LogPolarGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: LogPolarGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        check_finite("scalar field", values.iter())?;
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: LogPolarGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: LogPolarGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Sample `f` at the Cartesian position of every node.
    pub fn from_fn(grid: LogPolarGrid, f: impl Fn(Complex64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|(i, j)| f(grid.point(i, j))).collect();
        Self::new(grid, values)
    }

    /// Sample `f(ρ, θ)`.
    pub fn from_polar_fn(grid: LogPolarGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = grid
            .nodes()
            .map(|(i, j)| f(grid.rho(i), grid.theta(j)))
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &LogPolarGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }

    /// Max |value| over interior rows.
    pub fn max_abs_interior(&self) -> f64 {
        self.grid
            .interior_nodes()
            .map(|(i, j)| self.at(i, j).abs())
            .fold(0.0, f64::max)
    }

    /// max |value| over interior nodes with r_lo ≤ r ≤ r_hi.
    pub fn max_abs_within(&self, r_lo: f64, r_hi: f64) -> f64 {
        self.grid
            .interior_nodes()
            .filter(|&(i, _)| (r_lo..=r_hi).contains(&self.grid.radius(i)))
            .map(|(i, j)| self.at(i, j).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_interior(&self) -> f64 {
        self.grid
            .interior_nodes()
            .map(|(i, j)| self.at(i, j))
            .fold(f64::INFINITY, f64::min)
    }

    /// Values on boundary row `i` (0 or n_rho − 1).
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.n_theta();
        &self.values[i * n..(i + 1) * n]
    }

    /// Bilinear interpolation in (ρ, θ).
    pub fn interpolate(&self, z: Complex64) -> Option<f64> {
        let loc = self.grid.locate(z)?;
        Some(lerp(&loc, &self.grid, |k| self.values[k]))
    }

    pub fn as_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// Complex samples at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    grid: LogPolarGrid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: LogPolarGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Domain("complex field has non-finite samples".into()));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: LogPolarGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn from_fn(grid: LogPolarGrid, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().map(|(i, j)| f(grid.point(i, j))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &LogPolarGrid {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn max_abs_interior(&self) -> f64 {
        self.grid
            .interior_nodes()
            .map(|(i, j)| self.at(i, j).norm())
            .fold(0.0, f64::max)
    }

    pub fn interpolate(&self, z: Complex64) -> Option<Complex64> {
        let loc = self.grid.locate(z)?;
        Some(lerp(&loc, &self.grid, |k| self.values[k]))
    }
}

/// A 1-form a_x dx + a_y dy sampled at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormField {
    grid: LogPolarGrid,
    components: Vec<Covector>,
}

impl OneFormField {
    pub fn new(grid: LogPolarGrid, components: Vec<Covector>) -> Result<Self> {
        if components.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "{} covectors for {} nodes",
                components.len(),
                grid.len()
            )));
        }
        check_finite("one-form", components.iter().flatten())?;
        Ok(Self { grid, components })
    }

    pub(crate) fn from_raw(grid: LogPolarGrid, components: Vec<Covector>) -> Self {
        debug_assert_eq!(components.len(), grid.len());
        Self { grid, components }
    }

    pub fn zero(grid: LogPolarGrid) -> Self {
        Self {
            grid,
            components: vec![[0.0; 2]; grid.len()],
        }
    }

    pub fn from_fn(grid: LogPolarGrid, f: impl Fn(Complex64) -> Covector) -> Result<Self> {
        let components = grid.nodes().map(|(i, j)| f(grid.point(i, j))).collect();
        Self::new(grid, components)
    }

    pub fn grid(&self) -> &LogPolarGrid {
        &self.grid
    }
    pub fn components(&self) -> &[Covector] {
        &self.components
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Covector {
        self.components[self.grid.index(i, j)]
    }

    pub fn map(&self, f: impl Fn(Complex64, Covector) -> Covector) -> Result<Self> {
        let components = self
            .grid
            .nodes()
            .map(|(i, j)| f(self.grid.point(i, j), self.at(i, j)))
            .collect();
        Self::new(self.grid, components)
    }

    /// Pointwise `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(p, q)| [a * p[0] + b * q[0], a * p[1] + b * q[1]])
            .collect();
        Self::new(self.grid, components)
    }

    /// Pointwise multiplication by a scalar field.
    pub fn scaled_by(&self, s: &ScalarField) -> Result<Self> {
        same_grid(&self.grid, s.grid())?;
        let components = self
            .components
            .iter()
            .zip(s.values())
            .map(|(p, &k)| [k * p[0], k * p[1]])
            .collect();
        Self::new(self.grid, components)
    }

    /// Max pointwise Euclidean norm over interior rows.
    pub fn max_norm_interior(&self) -> f64 {
        self.grid
            .interior_nodes()
            .map(|(i, j)| {
                let [x, y] = self.at(i, j);
                x.hypot(y)
            })
            .fold(0.0, f64::max)
    }

    pub fn interpolate(&self, z: Complex64) -> Option<Covector> {
        let loc = self.grid.locate(z)?;
        let x = lerp(&loc, &self.grid, |k| self.components[k][0]);
        let y = lerp(&loc, &self.grid, |k| self.components[k][1]);
        Some([x, y])
    }
}
