//! Pointwise Euler-Lagrange residuals and variational boundary factors.
//!
//! The EL residual of the incomplete problem is
//! `r_i = H_{u_i} - d/dx H_{du_i}`; the complete problem adds
//! `+ d^2/dx^2 H_{ddu_i}`. The third reported component is the constraint
//! defect `g - 1`. Residuals are reported, never enforced, so they can be
//! evaluated on deliberately perturbed curves.
//!
//! `x`-derivatives of the momenta use five-point stencils on a window of
//! half-width `2 * FD_DX`, shifted (one-sided) near the ends of the curve.
//! For curves produced by the solvers, [`el_residual_nodes`] differentiates
//! the node-exact sequences directly on the solution grid instead, which
//! avoids amplifying interpolation error through the second-derivative
//! stencil.

use alloc::vec::Vec;

use crate::darboux::CurveOnSurface;
use crate::error::Result;
use crate::linalg::fd_weights;
use crate::math;
use crate::surface::SurfaceChart;
use crate::tol;

use super::lagrangian::{self, h_eval, u_partials};
use super::{LambdaField, ProblemKind};

/// Five evaluation abscissae around `x`, kept inside `[0, len]`.
fn x_window(len: f64, x: f64) -> [f64; 5] {
    let d = tol::FD_DX.min(len / 4.0);
    let lo = (x - 2.0 * d).clamp(0.0, len - 4.0 * d);
    [lo, lo + d, lo + 2.0 * d, lo + 3.0 * d, lo + 4.0 * d]
}

/// Momenta `H_du` and `H_ddu` at the window nodes plus derivative weights
/// at `z = x`.
struct WindowEval {
    b: [[f64; 2]; 5],
    phi: [[f64; 2]; 5],
    w: Vec<Vec<f64>>,
}

fn window_eval(
    chart: &SurfaceChart,
    kind: ProblemKind,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
) -> Result<WindowEval> {
    let xs = x_window(curve.len, x);
    let mut b = [[0.0; 2]; 5];
    let mut phi = [[0.0; 2]; 5];
    for (j, &xj) in xs.iter().enumerate() {
        let jet = curve.jet(xj);
        let p = chart.point(jet.u[0], jet.u[1])?;
        let hd = h_eval(&p, kind, jet.du, jet.ddu, lambda.eval(xj));
        b[j] = hd.d_du;
        phi[j] = hd.d_ddu;
    }
    Ok(WindowEval { b, phi, w: fd_weights(x, &xs, 2) })
}

fn el_residual(
    chart: &SurfaceChart,
    kind: ProblemKind,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
) -> Result<[f64; 3]> {
    let jet = curve.jet(x);
    let p = chart.point(jet.u[0], jet.u[1])?;
    let lam = lambda.eval(x);
    let hd = h_eval(&p, kind, jet.du, jet.ddu, lam);
    let up = u_partials(chart, kind, jet.u, jet.du, jet.ddu, lam)?;
    let we = window_eval(chart, kind, curve, lambda, x)?;
    let mut r = [0.0; 3];
    for i in 0..2 {
        let mut db = 0.0;
        let mut ddphi = 0.0;
        for j in 0..5 {
            db += we.w[j][1] * we.b[j][i];
            ddphi += we.w[j][2] * we.phi[j][i];
        }
        r[i] = up.h_u[i] - db;
        if kind == ProblemKind::Complete {
            r[i] += ddphi;
        }
    }
    r[2] = hd.g_quad - 1.0;
    Ok(r)
}

/// Residuals `[r_1, r_2, g - 1]` of the incomplete Euler-Lagrange system at
/// `x` for the given curve and multiplier field.
pub fn el_residual_incomplete(
    chart: &SurfaceChart,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
) -> Result<[f64; 3]> {
    el_residual(chart, ProblemKind::Incomplete, curve, lambda, x)
}

/// Residuals `[r_1, r_2, g - 1]` of the complete Euler-Lagrange system.
pub fn el_residual_complete(
    chart: &SurfaceChart,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
) -> Result<[f64; 3]> {
    el_residual(chart, ProblemKind::Complete, curve, lambda, x)
}

/// Component-wise max of the EL residual over `n + 1` uniform samples.
pub fn max_el_residual(
    chart: &SurfaceChart,
    kind: ProblemKind,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    n: usize,
) -> Result<[f64; 3]> {
    let mut out = [0.0f64; 3];
    for k in 0..=n {
        let x = curve.len * k as f64 / n as f64;
        let r = el_residual(chart, kind, curve, lambda, x)?;
        for i in 0..3 {
            out[i] = out[i].max(math::abs(r[i]));
        }
    }
    Ok(out)
}

fn boundary_terms(
    chart: &SurfaceChart,
    kind: ProblemKind,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
    swap: bool,
) -> Result<[f64; 3]> {
    let jet = curve.jet(x);
    let p = chart.point(jet.u[0], jet.u[1])?;
    let hd = h_eval(&p, kind, jet.du, jet.ddu, lambda.eval(x));
    // Endpoint velocity variations are tied together by the constraint only
    // when second-derivative momenta are present; the incomplete triple
    // reduces to the bare natural conditions and needs no branch partials.
    let (mut d_given, mut d_u) = (0.0, [0.0; 2]);
    let mut dphi = [0.0; 2];
    if kind == ProblemKind::Complete {
        let partials = if swap {
            lagrangian::constraint_partials_u1(&p, jet.du)?
        } else {
            lagrangian::constraint_partials_u2(&p, jet.du)?
        };
        d_given = partials.0;
        d_u = partials.1;
        let we = window_eval(chart, kind, curve, lambda, x)?;
        for i in 0..2 {
            for j in 0..5 {
                dphi[i] += we.w[j][1] * we.phi[j][i];
            }
        }
    }
    // Indices: s = solved component (its momentum multiplies the implicit
    // partials), v = the given one.
    let (v, s) = if swap { (1, 0) } else { (0, 1) };
    Ok([
        hd.d_ddu[v] + hd.d_ddu[s] * d_given,
        hd.d_du[v] - dphi[v] + hd.d_ddu[s] * d_u[v],
        hd.d_du[s] - dphi[s] + hd.d_ddu[s] * d_u[s],
    ])
}

/// Variational boundary factors at `x` with the constraint solved for
/// `du2`: the coefficients of the free variations `(delta du1, delta u1,
/// delta u2)` in the first variation. All three must vanish at a natural
/// end. Fails with `SingularU2` where that branch degenerates.
pub fn boundary_terms_u2(
    chart: &SurfaceChart,
    kind: ProblemKind,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
) -> Result<[f64; 3]> {
    boundary_terms(chart, kind, curve, lambda, x, false)
}

/// Boundary factors with the constraint solved for `du1`: coefficients of
/// `(delta du2, delta u2, delta u1)`.
pub fn boundary_terms_u1(
    chart: &SurfaceChart,
    kind: ProblemKind,
    curve: &CurveOnSurface,
    lambda: &LambdaField,
    x: f64,
) -> Result<[f64; 3]> {
    boundary_terms(chart, kind, curve, lambda, x, true)
}

/// Node-exact state sequences along a uniform solution grid.
pub(crate) struct NodeData {
    pub xs: Vec<f64>,
    pub us: Vec<[f64; 2]>,
    pub dus: Vec<[f64; 2]>,
    pub ddus: Vec<[f64; 2]>,
    pub lams: Vec<f64>,
}

/// Max-norm EL residuals evaluated by differentiating the momenta sequences
/// on the node grid itself (five-point stencils, shifted at the ends).
pub(crate) fn el_residual_nodes(
    chart: &SurfaceChart,
    kind: ProblemKind,
    nd: &NodeData,
) -> Result<[f64; 3]> {
    let n = nd.xs.len();
    debug_assert!(n >= 5);
    let mut b = Vec::with_capacity(n);
    let mut phi = Vec::with_capacity(n);
    let mut h_u = Vec::with_capacity(n);
    let mut out = [0.0f64; 3];
    for k in 0..n {
        let p = chart.point(nd.us[k][0], nd.us[k][1])?;
        let hd = h_eval(&p, kind, nd.dus[k], nd.ddus[k], nd.lams[k]);
        let up = u_partials(chart, kind, nd.us[k], nd.dus[k], nd.ddus[k], nd.lams[k])?;
        b.push(hd.d_du);
        phi.push(hd.d_ddu);
        h_u.push(up.h_u);
        out[2] = out[2].max(math::abs(hd.g_quad - 1.0));
    }
    for k in 0..n {
        let s = (k as isize - 2).clamp(0, n as isize - 5) as usize;
        let w = fd_weights(nd.xs[k], &nd.xs[s..s + 5], 2);
        for i in 0..2 {
            let mut db = 0.0;
            let mut ddphi = 0.0;
            for j in 0..5 {
                db += w[j][1] * b[s + j][i];
                ddphi += w[j][2] * phi[s + j][i];
            }
            let mut r = h_u[k][i] - db;
            if kind == ProblemKind::Complete {
                r += ddphi;
            }
            out[i] = out[i].max(math::abs(r));
        }
    }
    Ok(out)
}
