//! Consistency between a holomorphic prepotential F and the harmonic h.
//!
//! The identity relating them is `Im F″ = ±2h`; which sign a given pair
//! satisfies is reported rather than assumed.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrepotentialSign {
    /// Im F″ = +2h
    Plus,
    /// Im F″ = −2h
    Minus,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrepotentialCheck {
    pub residual_plus: f64,
    pub residual_minus: f64,
    pub matched: PrepotentialSign,
    /// min(residual_plus, residual_minus)
    pub residual: f64,
    pub samples: usize,
}

/// Angular margin kept away from the branch cut on the negative real axis.
const CUT_MARGIN: f64 = 0.1;

fn second_derivative(f: &dyn Fn(Complex64) -> Complex64, z: Complex64) -> Complex64 {
    // F is holomorphic, so F″ = ∂²F/∂x²; five-point stencil.
    let d = 1e-3 * z.norm();
    let fd = |k: f64| f(z + Complex64::new(k * d, 0.0));
    (-fd(2.0) + 16.0 * fd(1.0) - 30.0 * fd(0.0) + 16.0 * fd(-1.0) - fd(-2.0)) / (12.0 * d * d)
}

/// max |Im F″ ∓ 2h| over a polar sample set of the annulus r_min ≤ |z| ≤ r_max.
pub fn prepotential_consistency(
    h: impl Fn(Complex64) -> f64,
    f: impl Fn(Complex64) -> Complex64,
    r_min: f64,
    r_max: f64,
) -> Result<PrepotentialCheck> {
    if !(r_min > 0.0 && r_min < r_max) {
        return Err(Error::Domain(format!("bad sample annulus [{r_min}, {r_max}]")));
    }
    let (n_r, n_t) = (9, 48);
    let mut rp = 0.0_f64;
    let mut rm = 0.0_f64;
    let mut samples = 0;
    for a in 0..n_r {
        let r = r_min * (r_max / r_min).powf(a as f64 / (n_r - 1) as f64);
        for b in 0..n_t {
            let t = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (b as f64 + 0.5) / n_t as f64;
            if t.abs() > std::f64::consts::PI - CUT_MARGIN {
                continue;
            }
            let z = Complex64::from_polar(r, t);
            let im = second_derivative(&f, z).im;
            let hz = h(z);
            if !(im.is_finite() && hz.is_finite()) {
                continue;
            }
            rp = rp.max((im - 2.0 * hz).abs());
            rm = rm.max((im + 2.0 * hz).abs());
            samples += 1;
        }
    }
    if samples == 0 {
        return Err(Error::Domain("no admissible sample points".into()));
    }
    let matched = if rp <= rm {
        PrepotentialSign::Plus
    } else {
        PrepotentialSign::Minus
    };
    Ok(PrepotentialCheck {
        residual_plus: rp,
        residual_minus: rm,
        matched,
        residual: rp.min(rm),
        samples,
    })
}
