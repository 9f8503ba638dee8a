//! The symmetric positive definite systems behind the Newton steps.
//!
//! The operator is `−(∂ρρ + ∂θθ) + d` on the unknown rows of a log-polar
//! grid, with homogeneous Dirichlet data on the excluded rows. When the
//! first row is a Robin row it is discretised with a ghost node and scaled
//! by ½ so the matrix stays symmetric.
//!
//! Systems are solved by conjugate gradients preconditioned with the same
//! operator after averaging d over θ: that one diagonalises under an FFT in
//! θ into one tridiagonal system per Fourier mode.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::LogPolarGrid;

pub(crate) struct ShiftedLaplacian {
    n_theta: usize,
    rows: usize,
    robin: bool,
    inv_r2: f64,
    inv_t2: f64,
    diag: Vec<f64>,
}

impl ShiftedLaplacian {
    /// Unknown rows are `first..=n_rho−2`; `first` is 0 for a Robin inner row, 1 otherwise.
    pub(crate) fn new(grid: &LogPolarGrid, robin: bool, diag: Vec<f64>) -> Self {
        let first = if robin { 0 } else { 1 };
        let rows = grid.n_rho() - 1 - first;
        debug_assert_eq!(diag.len(), rows * grid.n_theta());
        Self {
            n_theta: grid.n_theta(),
            rows,
            robin,
            inv_r2: 1.0 / (grid.d_rho() * grid.d_rho()),
            inv_t2: 1.0 / (grid.d_theta() * grid.d_theta()),
            diag,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.rows * self.n_theta
    }

    fn theta_scale(&self, row: usize) -> f64 {
        if self.robin && row == 0 {
            0.5
        } else {
            1.0
        }
    }

    pub(crate) fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n_theta;
        for ii in 0..self.rows {
            let s = self.theta_scale(ii);
            let row = &x[ii * n..(ii + 1) * n];
            for j in 0..n {
                let k = ii * n + j;
                let xc = row[j];
                let xl = row[(j + n - 1) % n];
                let xr = row[(j + 1) % n];
                let tt = s * (2.0 * xc - xl - xr) * self.inv_t2;
                let up = if ii + 1 < self.rows { x[k + n] } else { 0.0 };
                let rr = if self.robin && ii == 0 {
                    (xc - up) * self.inv_r2
                } else {
                    let down = if ii > 0 { x[k - n] } else { 0.0 };
                    (2.0 * xc - up - down) * self.inv_r2
                };
                y[k] = rr + tt + self.diag[k] * xc;
            }
        }
    }
}

/// Exact inverse of the θ-averaged operator.
struct FourierPreconditioner {
    n_theta: usize,
    rows: usize,
    inv_r2: f64,
    /// diagonal of each tridiagonal system: [mode][row]
    main: Vec<Vec<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FourierPreconditioner {
    fn new(op: &ShiftedLaplacian) -> Self {
        let n = op.n_theta;
        let mut planner = FftPlanner::new();
        let dbar: Vec<f64> = (0..op.rows)
            .map(|ii| op.diag[ii * n..(ii + 1) * n].iter().sum::<f64>() / n as f64)
            .collect();
        let main = (0..n)
            .map(|k| {
                let lam = (2.0 - 2.0 * (std::f64::consts::TAU * k as f64 / n as f64).cos()) * op.inv_t2;
                (0..op.rows)
                    .map(|ii| {
                        let rr = if op.robin && ii == 0 { op.inv_r2 } else { 2.0 * op.inv_r2 };
                        rr + op.theta_scale(ii) * lam + dbar[ii]
                    })
                    .collect()
            })
            .collect();
        Self {
            n_theta: n,
            rows: op.rows,
            inv_r2: op.inv_r2,
            main,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.n_theta;
        let mut modes: Vec<Complex64> = r.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for row in modes.chunks_mut(n) {
            self.fwd.process(row);
        }
        let off = -self.inv_r2;
        let mut c = vec![0.0; self.rows];
        let mut d = vec![Complex64::new(0.0, 0.0); self.rows];
        for k in 0..n {
            let b = &self.main[k];
            // Thomas algorithm, constant off-diagonals
            c[0] = off / b[0];
            d[0] = modes[k] / b[0];
            for ii in 1..self.rows {
                let m = b[ii] - off * c[ii - 1];
                c[ii] = off / m;
                d[ii] = (modes[ii * n + k] - off * d[ii - 1]) / m;
            }
            modes[(self.rows - 1) * n + k] = d[self.rows - 1];
            for ii in (0..self.rows - 1).rev() {
                d[ii] = d[ii] - c[ii] * d[ii + 1];
                modes[ii * n + k] = d[ii];
            }
        }
        for row in modes.chunks_mut(n) {
            self.inv.process(row);
        }
        let scale = 1.0 / n as f64;
        for (zi, s) in z.iter_mut().zip(&modes) {
            *zi = s.re * scale;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve `op·x = b` to relative residual `rtol` (2-norm). Returns (x, iterations).
pub(crate) fn solve(op: &ShiftedLaplacian, b: &[f64], rtol: f64) -> Result<(Vec<f64>, usize)> {
    let n = op.len();
    let pc = FourierPreconditioner::new(op);
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    pc.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let max_iter = 2000;
    for it in 1..=max_iter {
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::Solver(format!("operator not positive definite (pᵀAp = {pap:e})")));
        }
        let alpha = rz / pap;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if dot(&r, &r).sqrt() <= rtol * bnorm {
            return Ok((x, it));
        }
        pc.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    Err(Error::Solver(format!(
        "conjugate gradients did not reach {rtol:e} in {max_iter} iterations"
    )))
}
