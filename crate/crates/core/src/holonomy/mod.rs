//! Parallel transport around loops and the SL(2,ℝ) class of the monodromy.
//!
//! Transport solves `M′(t) = −ω∇(γ′(t))·M(t)`, `M(0) = I`, in the frame
//! (∂x, ∂y), starting at `center + radius` and running once around the
//! circle. The matrix reported is `S·M(2π)·S` with S the swap of the two
//! frame vectors; in this convention the log family gives exactly
//! `[[1, −2Aπ/B], [0, 1]]` on the unit circle. The unswapped matrix is kept
//! in [`MonodromyMatrix::raw`].

mod classify;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::ClosedFormMetric;
use crate::field::Loop;
use crate::mat2::Mat2;
use crate::sk::{connection_matrix, ConnectionForm, SkStructure};

pub use classify::{classify, predicted_class, sp2z_check, MonodromyClass, MonodromyTag, PredictedClass};

/// Something that can evaluate ω∇(v) at a point.
pub trait ConnectionEval: Sync {
    /// None outside the domain.
    fn matrix(&self, z: Complex64, v: [f64; 2]) -> Option<Mat2>;

    /// Whether tr ω∇ is exactly −du of a single-valued u, so det M ≡ 1.
    fn unimodular(&self) -> bool {
        true
    }
}

/// Closed-form evaluation from harmonic data on the punctured disc |z| < r_max.
pub struct ClosedFormConnection<'a> {
    pub sk: &'a dyn SkStructure,
    pub r_max: f64,
}

impl<'a> ClosedFormConnection<'a> {
    pub fn new(sk: &'a dyn SkStructure) -> Self {
        Self { sk, r_max: f64::INFINITY }
    }

    pub fn bounded(sk: &'a dyn SkStructure, r_max: f64) -> Self {
        Self { sk, r_max }
    }

    /// The connection of a family, limited to the family's maximal disc.
    pub fn of_family(f: &'a dyn ClosedFormMetric) -> Result<Self> {
        let sk = f.sk().ok_or_else(|| {
            Error::Invalid(format!("{} has no connection (model metric)", f.info().family))
        })?;
        Ok(Self::bounded(sk, f.info().max_radius))
    }
}

impl ConnectionEval for ClosedFormConnection<'_> {
    fn matrix(&self, z: Complex64, v: [f64; 2]) -> Option<Mat2> {
        let r = z.norm();
        if !(r > 0.0 && r < self.r_max) {
            return None;
        }
        let (a, b) = (self.sk.omega11(z), self.sk.omega22(z));
        let m = connection_matrix(a, b, v);
        m.is_finite().then_some(m)
    }
}

/// The trivial connection.
pub struct ZeroConnection;

impl ConnectionEval for ZeroConnection {
    fn matrix(&self, _z: Complex64, _v: [f64; 2]) -> Option<Mat2> {
        Some(Mat2::ZERO)
    }
}

/// Bilinear interpolation of a sampled connection form.
///
/// Interpolation breaks the exact trace identity, so transported matrices
/// drift from det 1 at the level of the grid error; they are rescaled by
/// √det (the scalar factor exp(−½∮tr ω) commutes with everything) and the
/// raw determinant is reported.
pub struct InterpolatedConnection<'a>(pub &'a ConnectionForm);

impl ConnectionEval for InterpolatedConnection<'_> {
    fn matrix(&self, z: Complex64, v: [f64; 2]) -> Option<Mat2> {
        let a = self.0.omega11.interpolate(z)?;
        let b = self.0.omega22.interpolate(z)?;
        Some(connection_matrix(a, b, v))
    }

    fn unimodular(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MonodromyMatrix {
    /// S·M·S, the convention matched to the closed-form log-family matrix.
    pub matrix: Mat2,
    /// M(2π) in the frame (∂x, ∂y), after any determinant normalisation.
    pub raw: Mat2,
    pub det: f64,
    pub trace: f64,
    /// det of the integrated matrix before normalisation.
    pub det_raw: f64,
    pub steps: usize,
}

impl MonodromyMatrix {
    pub fn from_raw(raw: Mat2, det_raw: f64, steps: usize) -> Self {
        let matrix = Mat2::SWAP * raw * Mat2::SWAP;
        Self {
            matrix,
            raw,
            det: matrix.det(),
            trace: matrix.trace(),
            det_raw,
            steps,
        }
    }
}

fn rhs(conn: &dyn ConnectionEval, lp: &Loop, t: f64, m: &Mat2) -> Result<Mat2> {
    let z = lp.point(t);
    let w = conn
        .matrix(z, lp.velocity(t))
        .ok_or_else(|| Error::Domain(format!("loop leaves the connection's domain at z = {z}")))?;
    Ok((w * *m).scale(-1.0))
}

fn rk4(conn: &dyn ConnectionEval, lp: &Loop, t: f64, h: f64, m: &Mat2) -> Result<Mat2> {
    let k1 = rhs(conn, lp, t, m)?;
    let k2 = rhs(conn, lp, t + 0.5 * h, &(*m + k1.scale(0.5 * h)))?;
    let k3 = rhs(conn, lp, t + 0.5 * h, &(*m + k2.scale(0.5 * h)))?;
    let k4 = rhs(conn, lp, t + h, &(*m + k3.scale(h)))?;
    Ok(*m + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0))
}

/// Transport once around `lp`.
pub fn parallel_transport(conn: &dyn ConnectionEval, lp: &Loop, rtol: f64) -> Result<MonodromyMatrix> {
    parallel_transport_turns(conn, lp, 1, rtol)
}

/// Transport `turns` times around `lp`.
pub fn parallel_transport_turns(
    conn: &dyn ConnectionEval,
    lp: &Loop,
    turns: usize,
    rtol: f64,
) -> Result<MonodromyMatrix> {
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::Invalid(format!("rtol must lie in (0, 1), got {rtol}")));
    }
    let period = std::f64::consts::TAU;
    let t_end = period * turns as f64;
    let mut h = period / lp.n_steps as f64;
    let h_min = 1e-12 * period;
    let mut t = 0.0;
    let mut m = Mat2::IDENTITY;
    let mut steps = 0;
    while t < t_end {
        h = h.min(t_end - t);
        let full = rk4(conn, lp, t, h, &m)?;
        let half = rk4(conn, lp, t, 0.5 * h, &m)?;
        let two = rk4(conn, lp, t + 0.5 * h, 0.5 * h, &half)?;
        let err = (two - full).max_abs() / 15.0;
        let tol = rtol * (h / period) * m.max_abs().max(1.0);
        if err <= tol || h <= h_min {
            if err > tol {
                return Err(Error::Integration(format!(
                    "step size underflow at t = {t:.6} (error {err:.2e} > {tol:.2e})"
                )));
            }
            m = two + (two - full).scale(1.0 / 15.0);
            t += h;
            steps += 1;
        }
        let fac = if err == 0.0 { 2.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0) };
        h = (h * fac).max(h_min);
        if !m.is_finite() {
            return Err(Error::Integration("transport blew up".into()));
        }
    }
    let det_raw = m.det();
    if conn.unimodular() {
        let drift = (det_raw - 1.0).abs();
        let allowed = (10.0 * rtol).max(1e-12) * m.max_abs().max(1.0).powi(2);
        if drift > allowed {
            return Err(Error::Accuracy(format!(
                "det drift {drift:.2e} exceeds {allowed:.2e}"
            )));
        }
    } else if det_raw > 0.0 {
        m = m.scale(1.0 / det_raw.sqrt());
    } else {
        return Err(Error::Accuracy(format!("transported matrix has det {det_raw:.3e} ≤ 0")));
    }
    Ok(MonodromyMatrix::from_raw(m, det_raw, steps))
}

/// Conjugacy invariants of the monodromy at several radii.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusCheck {
    pub radii: Vec<f64>,
    pub traces: Vec<f64>,
    pub tags: Vec<MonodromyTag>,
    pub trace_spread: f64,
    pub consistent: bool,
}

/// Monodromy is a conjugacy class, independent of the loop; compare traces
/// and classes of loops at the given radii.
pub fn radius_check(
    conn: &dyn ConnectionEval,
    center: Complex64,
    radii: &[f64],
    rtol: f64,
    tol: f64,
) -> Result<RadiusCheck> {
    let mut traces = vec![];
    let mut tags = vec![];
    for &r in radii {
        let m = parallel_transport(conn, &Loop::circle(center, r)?, rtol)?;
        traces.push(m.trace);
        tags.push(classify(&m.matrix, tol.max(1e-9))?.tag);
    }
    let lo = traces.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = traces.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let consistent = spread <= tol && tags.windows(2).all(|w| w[0] == w[1]);
    Ok(RadiusCheck {
        radii: radii.to_vec(),
        traces,
        tags,
        trace_spread: spread,
        consistent,
    })
}

#[cfg(test)]
mod tests;
