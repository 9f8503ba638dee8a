//! Grid-refinement studies: observed convergence orders of residuals and errors.

use serde::Serialize;

use crate::error::Result;
use crate::field::LogPolarGrid;

/// Observed order from errors on two grids whose spacings differ by `ratio`.
pub fn observed_order(e_coarse: f64, e_fine: f64, ratio: f64) -> f64 {
    (e_coarse / e_fine).ln() / ratio.ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementStudy {
    /// (n_rho, n_theta) per level
    pub grids: Vec<(usize, usize)>,
    pub errors: Vec<f64>,
    /// orders between consecutive levels
    pub orders: Vec<f64>,
}

impl RefinementStudy {
    /// Evaluate `measure` on `base` refined by 1, 2, 4, ... (`levels` grids).
    pub fn run(
        base: LogPolarGrid,
        levels: usize,
        mut measure: impl FnMut(LogPolarGrid) -> Result<f64>,
    ) -> Result<Self> {
        let mut grids = Vec::with_capacity(levels);
        let mut errors = Vec::with_capacity(levels);
        for k in 0..levels {
            let g = base.refined(1 << k);
            errors.push(measure(g)?);
            grids.push((g.n_rho(), g.n_theta()));
        }
        let orders = errors
            .windows(2)
            .map(|e| observed_order(e[0], e[1], 2.0))
            .collect();
        Ok(Self { grids, errors, orders })
    }

    pub fn finest_error(&self) -> f64 {
        *self.errors.last().unwrap_or(&f64::NAN)
    }

    pub fn last_order(&self) -> f64 {
        *self.orders.last().unwrap_or(&f64::NAN)
    }

    /// Converged at `min_order`, or already at the round-off `floor`.
    pub fn converges(&self, min_order: f64, floor: f64) -> bool {
        self.finest_error() <= floor || self.last_order() >= min_order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_sequence() {
        assert!((observed_order(4e-2, 1e-2, 2.0) - 2.0).abs() < 1e-12);
        let g = LogPolarGrid::annulus(0.1, 1.0, 9, 8).unwrap();
        let s = RefinementStudy::run(g, 3, |g| Ok(g.spacing().powi(2))).unwrap();
        assert_eq!(s.grids, vec![(9, 8), (17, 16), (33, 32)]);
        assert!(s.orders.iter().all(|o| (o - 2.0).abs() < 1e-9));
        assert!(s.converges(1.9, 0.0));
    }
}
