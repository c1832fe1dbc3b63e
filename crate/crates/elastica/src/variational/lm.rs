//! Dense damped least-squares (Levenberg-Marquardt) over residual maps, with
//! forward-difference Jacobians. Small and deterministic; the shooting
//! systems it serves have at most a few dozen unknowns.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::cholesky_solve;
use crate::math;

pub(crate) struct LmOptions {
    pub max_iterations: usize,
    /// Convergence gate on the residual max-norm.
    pub residual_tol: f64,
    /// Relative Jacobian step.
    pub fd_step: f64,
    pub mu_init: f64,
    pub mu_max: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 80,
            residual_tol: 1e-9,
            fd_step: 1e-7,
            mu_init: 1e-6,
            mu_max: 1e12,
        }
    }
}

pub(crate) struct LmOutcome {
    pub z: Vec<f64>,
    pub max_abs: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Half squared residual norm at each accepted iterate; non-increasing.
    pub objective_history: Vec<f64>,
}

fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0.0f64, |m, v| m.max(math::abs(*v)))
}

fn half_ssq(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

/// Minimize `|f(z)|^2` from `z0`. Trial steps that fail to evaluate are
/// treated like uphill steps (rejected, damping increased), so the driver
/// never leaves the feasible region it started in.
pub(crate) fn minimize(
    f: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    z0: &[f64],
    opts: &LmOptions,
) -> Result<LmOutcome> {
    let n = z0.len();
    let mut z = z0.to_vec();
    let mut r = f(&z)?;
    let m = r.len();
    let mut obj = half_ssq(&r);
    let mut history = vec![obj];
    let mut mu = opts.mu_init;
    let mut iterations = 0;

    for _ in 0..opts.max_iterations {
        if max_abs(&r) < opts.residual_tol {
            break;
        }
        // Forward-difference Jacobian, falling back to a backward step for
        // columns whose forward probe leaves the chart domain.
        let mut jac = vec![0.0; m * n];
        for j in 0..n {
            let h = opts.fd_step * (1.0 + math::abs(z[j]));
            let mut zp = z.clone();
            zp[j] += h;
            let (rp, hh) = match f(&zp) {
                Ok(rp) => (rp, h),
                Err(_) => {
                    zp[j] = z[j] - h;
                    (f(&zp)?, -h)
                }
            };
            for i in 0..m {
                jac[i * n + j] = (rp[i] - r[i]) / hh;
            }
        }
        let mut jtj = vec![0.0; n * n];
        let mut jtr = vec![0.0; n];
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..m {
                    s += jac[k * n + i] * jac[k * n + j];
                }
                jtj[i * n + j] = s;
                jtj[j * n + i] = s;
            }
            let mut s = 0.0;
            for k in 0..m {
                s += jac[k * n + i] * r[k];
            }
            jtr[i] = -s;
        }
        let diag_floor = 1e-12 * (1.0 + jtj.iter().step_by(n + 1).fold(0.0f64, |a, v| a.max(*v)));

        // Trial loop: scale the damping until a step lowers the objective.
        let mut accepted = false;
        while mu <= opts.mu_max {
            let mut a = jtj.clone();
            let mut b = jtr.clone();
            for i in 0..n {
                a[i * n + i] += mu * (jtj[i * n + i] + diag_floor);
            }
            if cholesky_solve(&mut a, &mut b, n) {
                let mut zt = z.clone();
                for i in 0..n {
                    zt[i] += b[i];
                }
                if let Ok(rt) = f(&zt) {
                    let objt = half_ssq(&rt);
                    if objt < obj {
                        z = zt;
                        r = rt;
                        obj = objt;
                        history.push(obj);
                        mu = (mu / 3.0).max(1e-12);
                        iterations += 1;
                        accepted = true;
                        break;
                    }
                }
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }

    let max = max_abs(&r);
    Ok(LmOutcome {
        converged: max < opts.residual_tol,
        z,
        max_abs: max,
        iterations,
        objective_history: history,
    })
}
