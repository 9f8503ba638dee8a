use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// z ↦ (az + b)/(cz + d).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.det().norm() < 1e-14 * (a.norm() + b.norm()).max(c.norm() + d.norm()).powi(2) {
            return Err(Error::Domain("degenerate Möbius map".into()));
        }
        Ok(m)
    }

    /// The map sending (z₁, z₂, z₃) to (0, 1, −1).
    pub fn normalizing(z1: Complex64, z2: Complex64, z3: Complex64) -> Result<Self> {
        let (p, q) = (z2 - z3, z2 - z1);
        // cross-ratio map sending (z₁, z₂, z₃) to (0, 1, ∞), then s ↦ s/(2 − s)
        let s = Self::new(p, -z1 * p, q, -z3 * q)?;
        let one = Complex64::new(1.0, 0.0);
        let m = Self::new(one, 0.0 * one, -one, 2.0 * one)?;
        Ok(m.compose(&s))
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `None` at the pole.
    pub fn apply(&self, z: Complex64) -> Option<Complex64> {
        let den = self.c * z + self.d;
        (den.norm() > 1e-300).then(|| (self.a * z + self.b) / den)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.det() / (self.c * z + self.d).powi(2)
    }

    /// self ∘ other.
    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}
