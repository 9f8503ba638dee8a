//! Singularity data from sampled metrics: the exponent β or the log-type
//! order N of w at the puncture, and the order of the cubic form there.
//!
//! Fits regress the angular average w̄(r) on log r, either as a pure power
//! `w̄ = C r^β` or as a log-type law `w̄ = −C r^{N+1} log r`; the log model is
//! chosen only when its residual is less than half that of the power model.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitKind {
    Power,
    LogType,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityFit {
    pub kind: FitKind,
    /// Fitted exponent (power) or N + 1 (log type).
    pub beta: f64,
    /// Rounded order N (log type only).
    #[serde(rename = "N")]
    pub n: Option<i32>,
    #[serde(rename = "C")]
    pub c: f64,
    /// RMS residual of the selected model in log w.
    pub fit_residual: f64,
    pub residual_power: f64,
    pub residual_log: Option<f64>,
    /// Unrounded slope of the log model (≈ N + 1).
    pub log_slope: Option<f64>,
    /// Residuals within a factor 2 of each other.
    pub ambiguous: bool,
}

const ANGLES: usize = 64;

/// Mean of w over `ANGLES` equally spaced points on |z| = r.
pub fn angular_average(w: &dyn Fn(Complex64) -> f64, r: f64) -> Result<f64> {
    let mut s = 0.0;
    for k in 0..ANGLES {
        let v = w(Complex64::from_polar(r, TAU * (k as f64 + 0.5) / ANGLES as f64));
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("metric density {v} at radius {r} is not positive")));
        }
        s += v;
    }
    Ok(s / ANGLES as f64)
}

struct Line {
    slope: f64,
    intercept: f64,
    rms: f64,
}

fn ols(x: &[f64], y: &[f64]) -> Result<Line> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 1e-12 * n) {
        return Err(Error::Fit("regressor has no spread".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    Ok(Line { slope, intercept, rms })
}

/// Fit the singularity of w at the origin from samples at `radii`.
pub fn fit_singularity(w: &dyn Fn(Complex64) -> f64, radii: &[f64]) -> Result<SingularityFit> {
    if radii.len() < 6 {
        return Err(Error::Fit(format!("need at least 6 radii, got {}", radii.len())));
    }
    if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::Domain("radii must be positive".into()));
    }
    let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().cloned().fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Fit(format!("radii span {:.2} decades, need 2", (hi / lo).log10())));
    }
    let x: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let y = radii
        .iter()
        .map(|&r| angular_average(w, r).map(f64::ln))
        .collect::<Result<Vec<_>>>()?;
    let power = ols(&x, &y)?;
    let log = if hi < 1.0 {
        let y2: Vec<f64> = y.iter().zip(&x).map(|(v, lr)| v - (-lr).ln()).collect();
        let line = ols(&x, &y2)?;
        let n = (line.slope - 1.0).round() as i32;
        let beta = (n + 1) as f64;
        let ln_c = y2.iter().zip(&x).map(|(v, lr)| v - beta * lr).sum::<f64>() / x.len() as f64;
        Some((line, n, ln_c))
    } else {
        None
    };
    let res_log = log.as_ref().map(|l| l.0.rms);
    let ambiguous = res_log.is_some_and(|rl| {
        let (a, b) = (rl.max(power.rms), rl.min(power.rms));
        a <= 2.0 * b && a > 1e-12
    });
    let fit = match log {
        Some((line, n, ln_c)) if line.rms < 0.5 * power.rms => SingularityFit {
            kind: FitKind::LogType,
            beta: (n + 1) as f64,
            n: Some(n),
            c: ln_c.exp(),
            fit_residual: line.rms,
            residual_power: power.rms,
            residual_log: Some(line.rms),
            log_slope: Some(line.slope),
            ambiguous,
        },
        _ => SingularityFit {
            kind: FitKind::Power,
            beta: power.slope,
            n: None,
            c: power.intercept.exp(),
            fit_residual: power.rms,
            residual_power: power.rms,
            residual_log: res_log,
            log_slope: log.as_ref().map(|l| l.0.slope),
            ambiguous,
        },
    };
    Ok(fit)
}

/// `count` radii spaced evenly in log r from `r_max` down to `r_min`.
pub fn log_spaced_radii(r_min: f64, r_max: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|k| r_max * (r_min / r_max).powf(k as f64 / (count - 1) as f64))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicOrder {
    pub order: i32,
    pub unrounded: f64,
    pub radius: f64,
}

/// Winding number (1/2πi)∮ Ξ₀′/Ξ₀ dz on |z| = r0.
pub fn cubic_order(xi0: &dyn Fn(Complex64) -> Complex64, r0: f64) -> Result<CubicOrder> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Domain(format!("contour radius {r0} must be positive")));
    }
    let m = 256;
    let d = 1e-3 * r0;
    let mut vals = Vec::with_capacity(m);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let t = TAU * k as f64 / m as f64;
        let e = Complex64::from_polar(1.0, t);
        let z = r0 * e;
        let f = xi0(z);
        // complex derivative along the real direction, fourth order
        let at = |s: f64| xi0(z + Complex64::new(s * d, 0.0));
        let df = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * d);
        vals.push(f.norm());
        // dz = i z dt
        acc += df / f * Complex64::i() * z;
    }
    let big = vals.iter().cloned().fold(0.0, f64::max);
    let small = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(big > 0.0 && big.is_finite()) || small < 1e-10 * big {
        return Err(Error::Contour(format!(
            "Ξ₀ vanishes or is not finite on |z| = {r0}; retry at another radius"
        )));
    }
    let winding = acc / (m as f64) / Complex64::i();
    let unrounded = winding.re;
    let order = unrounded.round();
    if (unrounded - order).abs() >= 0.1 || winding.im.abs() >= 0.1 {
        return Err(Error::Contour(format!(
            "winding number {unrounded:.4} is not close to an integer"
        )));
    }
    Ok(CubicOrder {
        order: order as i32,
        unrounded,
        radius: r0,
    })
}

/// β < N + 1 (power case), or fitted N equal to the cubic-form order (log case).
pub fn check_bound(fit: &SingularityFit, n: i32) -> bool {
    match fit.kind {
        FitKind::Power => fit.beta < (n + 1) as f64 - 1e-6,
        FitKind::LogType => fit.n == Some(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn radii() -> Vec<f64> {
        log_spaced_radii(1e-5, 1e-2, 12)
    }

    #[test]
    fn power_law() {
        let f = fit_singularity(&|z| z.norm().sqrt(), &radii()).unwrap();
        assert_eq!(f.kind, FitKind::Power);
        assert!((f.beta - 0.5).abs() < 1e-9);
        assert!((f.c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_type() {
        let f = fit_singularity(&|z| -z.norm() * z.norm().ln(), &radii()).unwrap();
        assert_eq!(f.kind, FitKind::LogType);
        assert_eq!(f.n, Some(0));
        assert!((f.c - 1.0).abs() < 1e-9);
        assert!(!f.ambiguous);
    }

    #[test]
    fn log_model_wins_by_ten() {
        for n in [-1, 0, 2] {
            let rr = log_spaced_radii(1e-4, 1e-1, 10);
            let f = fit_singularity(&|z| -2.0 * z.norm().powi(n + 1) * z.norm().ln(), &rr).unwrap();
            assert_eq!(f.n, Some(n));
            assert!(f.residual_power > 10.0 * f.residual_log.unwrap());
        }
    }

    #[test]
    fn cubic_orders() {
        let a = 1.0;
        let o = cubic_order(&|z| -Complex64::i() * a / (4.0 * z), 0.1).unwrap();
        assert_eq!(o.order, -1);
        assert_eq!(cubic_order(&|_| Complex64::new(0.0, -1.0), 0.3).unwrap().order, 0);
        assert_eq!(cubic_order(&|z| z * z, 0.3).unwrap().order, 2);
        assert!(cubic_order(&|_| Complex64::new(0.0, 0.0), 0.3).is_err());
        // zero on the contour
        assert!(cubic_order(&|z| z - 0.3, 0.3).is_err());
    }

    #[test]
    fn bounds() {
        let p = |beta| SingularityFit {
            kind: FitKind::Power,
            beta,
            n: None,
            c: 1.0,
            fit_residual: 0.0,
            residual_power: 0.0,
            residual_log: None,
            log_slope: None,
            ambiguous: false,
        };
        assert!(check_bound(&p(-2.0), 0));
        assert!(!check_bound(&p(1.5), 0));
        let l = SingularityFit { kind: FitKind::LogType, n: Some(0), beta: 1.0, ..p(1.0) };
        assert!(check_bound(&l, 0));
        assert!(!check_bound(&l, -1));
    }

    #[test]
    fn bad_inputs() {
        assert!(fit_singularity(&|_| 1.0, &[0.1, 0.01, 0.001]).is_err());
        assert!(fit_singularity(&|_| 1.0, &log_spaced_radii(0.01, 0.1, 8)).is_err());
        assert!(matches!(fit_singularity(&|_| -1.0, &radii()), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn recovers_planted_power(beta in -6.0f64..3.0, c in 0.1f64..10.0, a in -0.1f64..0.1) {
            let rr = log_spaced_radii(1e-6, 1e-4, 9);
            let f = fit_singularity(&|z| c * z.norm().powf(beta) * (1.0 + a * z.norm().sqrt()), &rr).unwrap();
            prop_assert_eq!(f.kind, FitKind::Power);
            prop_assert!((f.beta - beta).abs() <= 1e-3);
            prop_assert!((f.c / c - 1.0).abs() <= 1e-2);
        }
    }
}
