//! Fixed-step classical Runge-Kutta integration over flat `f64` state slices.
//!
//! The flows integrated here (geodesic equations, the constrained
//! Euler-Lagrange normal form) are smooth on their domains, so fixed-step
//! RK4 with a caller-chosen resolution plus a step-halving diagnostic is
//! sufficient and keeps the integrator trivially deterministic.

use alloc::vec;
use alloc::vec::Vec;

/// One classical RK4 step; `out` may not alias `y`.
pub fn rk4_step<E, F>(f: &mut F, t: f64, y: &[f64], h: f64, out: &mut [f64]) -> Result<(), E>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), E>,
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    f(t, y, &mut k1)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    f(t + 0.5 * h, &tmp, &mut k2)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    f(t + 0.5 * h, &tmp, &mut k3)?;
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    f(t + h, &tmp, &mut k4)?;
    for i in 0..n {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(())
}

/// Integrate from `t0` to `t1` in `n_steps` equal steps, invoking `observe`
/// at every node (including both endpoints). `observe` may mutate the state,
/// which the constrained flows use for drift projection.
pub fn rk4_integrate<E, F, C>(
    f: &mut F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    n_steps: usize,
    mut observe: C,
) -> Result<Vec<f64>, E>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), E>,
    C: FnMut(usize, f64, &mut [f64]) -> Result<(), E>,
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut next = vec![0.0; n];
    let h = (t1 - t0) / n_steps as f64;
    observe(0, t0, &mut y)?;
    for step in 0..n_steps {
        let t = t0 + h * step as f64;
        rk4_step(f, t, &y, h, &mut next)?;
        y.copy_from_slice(&next);
        observe(step + 1, t0 + h * (step + 1) as f64, &mut y)?;
    }
    Ok(y)
}
