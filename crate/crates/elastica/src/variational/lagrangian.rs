//! The constrained Lagrangian `H` and its partial derivatives, plus the
//! pointwise solve of the unit-speed constraint for one velocity component.
//!
//! `H = kappa_n^2 [+ kappa_g^2] + lambda (g - 1)` where
//! `kappa_n = sum L_ij du_i du_j`, `g = sum g_ij du_i du_j`, and the graded
//! geodesic square is assembled through the defect
//! `gamma_k = ddu_k + sum Gamma^k_ij du_i du_j` as
//! `kappa_g^2 = sum g_kl gamma_k gamma_l` (in the general regime this is
//! `(X . gamma)^2` with `X_i = g_vec[i]`, computed in that factored form).
//!
//! Derivatives in the jet arguments `(du, ddu)` are exact:
//!
//! * `dH/d(ddu_i) = 2 A_i` with `A_i = sum_l g_il gamma_l`,
//! * `dH/d(du_i) = 4 kappa_n P_i + 2 lambda G_i + 4 sum_k A_k sum_j Gamma^k_ij du_j`
//!   (`P = L du`, `G = g du`; the last term only for the complete kind).
//!
//! Derivatives in the chart position are central differences with step
//! [`tol::FD_HU`], bundled so one set of perturbed chart points serves all
//! the flows' needs.

use crate::darboux::geodesic_defect;
use crate::error::{Error, Result};
use crate::math;
use crate::surface::{pair, ChartRegime, SurfaceChart, SurfacePoint};
use crate::tol;

use super::ProblemKind;

/// `H` and its exact jet-argument partials at one point, with the
/// intermediates the flows reuse.
#[derive(Clone, Copy, Debug)]
pub(crate) struct HData {
    pub value: f64,
    /// `dH/d(du_i)`.
    pub d_du: [f64; 2],
    /// `dH/d(ddu_i)`; zero for the incomplete kind.
    pub d_ddu: [f64; 2],
    pub kappa_n: f64,
    pub kappa_g_sq: f64,
    pub g_quad: f64,
    /// `G_i = sum_j g_ij du_j`.
    pub g_du: [f64; 2],
    /// `P_i = sum_j L_ij du_j`.
    pub l_du: [f64; 2],
    pub gamma: [f64; 2],
}

pub(crate) fn h_eval(
    p: &SurfacePoint,
    kind: ProblemKind,
    du: [f64; 2],
    ddu: [f64; 2],
    lambda: f64,
) -> HData {
    let gamma = geodesic_defect(p, du, ddu);
    let mut kappa_n = 0.0;
    let mut g_quad = 0.0;
    let mut g_du = [0.0; 2];
    let mut l_du = [0.0; 2];
    for i in 0..2 {
        for j in 0..2 {
            kappa_n += p.l[pair(i, j)] * du[i] * du[j];
            g_quad += p.g[pair(i, j)] * du[i] * du[j];
            g_du[i] += p.g[pair(i, j)] * du[j];
            l_du[i] += p.l[pair(i, j)] * du[j];
        }
    }
    // A = g gamma, factored through X in the rank-one regime so the
    // near-geodesic cancellation happens once, not per component.
    let (a, kappa_g_sq) = match p.regime {
        ChartRegime::General => {
            let s = p.g_vec[0] * gamma[0] + p.g_vec[1] * gamma[1];
            ([s * p.g_vec[0], s * p.g_vec[1]], s * s)
        }
        ChartRegime::Isotropic => {
            let mut a = [0.0; 2];
            for i in 0..2 {
                for l in 0..2 {
                    a[i] += p.g[pair(i, l)] * gamma[l];
                }
            }
            (a, (a[0] * gamma[0] + a[1] * gamma[1]).max(0.0))
        }
    };
    let complete = kind == ProblemKind::Complete;
    let mut value = kappa_n * kappa_n + lambda * (g_quad - 1.0);
    let mut d_du = [0.0; 2];
    let mut d_ddu = [0.0; 2];
    if complete {
        value += kappa_g_sq;
    }
    for i in 0..2 {
        d_du[i] = 4.0 * kappa_n * l_du[i] + 2.0 * lambda * g_du[i];
        if complete {
            d_ddu[i] = 2.0 * a[i];
            for k in 0..2 {
                let mut cdu = 0.0;
                for j in 0..2 {
                    cdu += p.gamma[k][pair(i, j)] * du[j];
                }
                d_du[i] += 4.0 * a[k] * cdu;
            }
        }
    }
    HData { value, d_du, d_ddu, kappa_n, kappa_g_sq, g_quad, g_du, l_du, gamma }
}

/// First `x`-rate of the constraint quadratic along a curve through the
/// point: `g' = sum_m (dg[m] du du) du_m + 2 sum_k G_k ddu_k`. Exact.
pub(crate) fn gdot_at(p: &SurfacePoint, du: [f64; 2], ddu: [f64; 2]) -> f64 {
    let mut s = 0.0;
    for m in 0..2 {
        let mut q = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                q += p.dg[m][pair(i, j)] * du[i] * du[j];
            }
        }
        s += q * du[m];
        for j in 0..2 {
            s += 2.0 * p.g[pair(m, j)] * du[j] * ddu[m];
        }
    }
    s
}

/// Exact `d(H_{ddu_i})/d(du_k) = 4 sum_l g_il Gamma^l_{kj} du_j`.
pub(crate) fn phi_du_exact(p: &SurfacePoint, du: [f64; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            let mut s = 0.0;
            for l in 0..2 {
                for j in 0..2 {
                    s += p.g[pair(i, l)] * p.gamma[l][pair(k, j)] * du[j];
                }
            }
            out[i][k] = 4.0 * s;
        }
    }
    out
}

/// Exact `d(g')/d(du_k)` at fixed chart point.
pub(crate) fn gdot_du_exact(p: &SurfacePoint, du: [f64; 2], ddu: [f64; 2]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut qk = 0.0;
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                qk += p.dg[k][pair(i, j)] * du[i] * du[j];
            }
        }
        for m in 0..2 {
            let mut dq = 0.0;
            for i in 0..2 {
                dq += 2.0 * p.dg[m][pair(i, k)] * du[i];
            }
            s += dq * du[m];
        }
        for l in 0..2 {
            s += 2.0 * p.g[pair(l, k)] * ddu[l];
        }
        *slot = s + qk;
    }
    out
}

/// Chart-position partials of `H`, of its `du`-gradient, of its
/// `ddu`-gradient, and of the constraint rate, all from one set of four
/// perturbed chart points.
#[derive(Clone, Copy, Debug)]
pub(crate) struct UPartials {
    /// `dH/du_k`.
    pub h_u: [f64; 2],
    /// `b_u[i][k] = d(H_{du_i})/du_k`.
    pub b_u: [[f64; 2]; 2],
    /// `phi_u[i][k] = d(H_{ddu_i})/du_k`.
    pub phi_u: [[f64; 2]; 2],
    /// `d(g')/du_k` at fixed jets.
    pub gdot_u: [f64; 2],
}

pub(crate) fn u_partials(
    chart: &SurfaceChart,
    kind: ProblemKind,
    u: [f64; 2],
    du: [f64; 2],
    ddu: [f64; 2],
    lambda: f64,
) -> Result<UPartials> {
    let d = tol::FD_HU;
    let mut out = UPartials {
        h_u: [0.0; 2],
        b_u: [[0.0; 2]; 2],
        phi_u: [[0.0; 2]; 2],
        gdot_u: [0.0; 2],
    };
    for k in 0..2 {
        let mut up = u;
        up[k] += d;
        let mut um = u;
        um[k] -= d;
        let pp = chart.point(up[0], up[1])?;
        let pm = chart.point(um[0], um[1])?;
        let hp = h_eval(&pp, kind, du, ddu, lambda);
        let hm = h_eval(&pm, kind, du, ddu, lambda);
        let inv = 1.0 / (2.0 * d);
        out.h_u[k] = (hp.value - hm.value) * inv;
        out.gdot_u[k] = (gdot_at(&pp, du, ddu) - gdot_at(&pm, du, ddu)) * inv;
        for i in 0..2 {
            out.b_u[i][k] = (hp.d_du[i] - hm.d_du[i]) * inv;
            out.phi_u[i][k] = (hp.d_ddu[i] - hm.d_ddu[i]) * inv;
        }
    }
    Ok(out)
}

/// Public evaluation handle for the constrained Lagrangian on one chart.
#[derive(Clone, Copy)]
pub struct Lagrangian<'a> {
    pub chart: &'a SurfaceChart,
    pub kind: ProblemKind,
}

impl<'a> Lagrangian<'a> {
    pub fn new(chart: &'a SurfaceChart, kind: ProblemKind) -> Self {
        Lagrangian { chart, kind }
    }

    pub fn value(&self, u: [f64; 2], du: [f64; 2], ddu: [f64; 2], lambda: f64) -> Result<f64> {
        Ok(h_eval(&self.chart.point(u[0], u[1])?, self.kind, du, ddu, lambda).value)
    }

    /// Exact `dH/d(du_i)`.
    pub fn du_partials(
        &self,
        u: [f64; 2],
        du: [f64; 2],
        ddu: [f64; 2],
        lambda: f64,
    ) -> Result<[f64; 2]> {
        Ok(h_eval(&self.chart.point(u[0], u[1])?, self.kind, du, ddu, lambda).d_du)
    }

    /// Exact `dH/d(ddu_i)`.
    pub fn ddu_partials(
        &self,
        u: [f64; 2],
        du: [f64; 2],
        ddu: [f64; 2],
        lambda: f64,
    ) -> Result<[f64; 2]> {
        Ok(h_eval(&self.chart.point(u[0], u[1])?, self.kind, du, ddu, lambda).d_ddu)
    }

    /// Central-difference `dH/du_k`.
    pub fn u_partials(
        &self,
        u: [f64; 2],
        du: [f64; 2],
        ddu: [f64; 2],
        lambda: f64,
    ) -> Result<[f64; 2]> {
        Ok(u_partials(self.chart, self.kind, u, du, ddu, lambda)?.h_u)
    }
}

/// One solved branch of the unit-speed constraint at a chart point: the
/// missing velocity component plus its implicit partials.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintSolve {
    /// The solved component (`du2` for the `U2` form, `du1` for `U1`).
    pub value: f64,
    /// Square-root branch sign used.
    pub sigma: f64,
    /// Partial of the solved component with respect to the given one.
    pub d_given: f64,
    /// Partials with respect to the chart coordinates.
    pub d_u: [f64; 2],
}

fn constraint_branch(
    p: &SurfacePoint,
    given: f64,
    sigma: f64,
    swap: bool,
) -> Result<ConstraintSolve> {
    // Indices arranged so the equation reads q x^2 + 2 m given x + c = 0 in
    // the solved component x.
    let (q, m, c0) = if swap {
        (p.g[0], p.g[1], p.g[2])
    } else {
        (p.g[2], p.g[1], p.g[0])
    };
    if q <= tol::TAU_W {
        return Err(if swap { Error::SingularU1 } else { Error::SingularU2 });
    }
    let disc = given * given * (m * m - q * c0) + q;
    if disc < -1e-12 {
        return Err(Error::InfeasibleConstraint);
    }
    let sq = math::sqrt(disc.max(0.0));
    let value = (-m * given + sigma * sq) / q;
    let du = if swap { [value, given] } else { [given, value] };
    let (d_given, d_u) = constraint_partials(p, du, swap)?;
    Ok(ConstraintSolve { value, sigma, d_given, d_u })
}

fn constraint_partials(p: &SurfacePoint, du: [f64; 2], swap: bool) -> Result<(f64, [f64; 2])> {
    let g_d1 = 2.0 * (p.g[0] * du[0] + p.g[1] * du[1]);
    let g_d2 = 2.0 * (p.g[1] * du[0] + p.g[2] * du[1]);
    let (g_solved, g_given) = if swap { (g_d1, g_d2) } else { (g_d2, g_d1) };
    if math::abs(g_solved) <= tol::TAU_BRANCH {
        return Err(if swap { Error::SingularU1 } else { Error::SingularU2 });
    }
    let d_given = -g_given / g_solved;
    let mut d_u = [0.0; 2];
    for (k, slot) in d_u.iter_mut().enumerate() {
        let mut quad = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                quad += p.dg[k][pair(i, j)] * du[i] * du[j];
            }
        }
        *slot = -quad / g_solved;
    }
    Ok((d_given, d_u))
}

/// Solve `g(du1, du2) = 1` for `du2` on the branch `sigma`.
pub fn solve_constraint_u2(p: &SurfacePoint, du1: f64, sigma: f64) -> Result<ConstraintSolve> {
    constraint_branch(p, du1, sigma, false)
}

/// Solve `g(du1, du2) = 1` for `du1` on the branch `sigma`.
pub fn solve_constraint_u1(p: &SurfacePoint, du2: f64, sigma: f64) -> Result<ConstraintSolve> {
    constraint_branch(p, du2, sigma, true)
}

/// Implicit partials of the `U2` form at a known feasible velocity.
pub(crate) fn constraint_partials_u2(p: &SurfacePoint, du: [f64; 2]) -> Result<(f64, [f64; 2])> {
    constraint_partials(p, du, false)
}

/// Implicit partials of the `U1` form at a known feasible velocity.
pub(crate) fn constraint_partials_u1(p: &SurfacePoint, du: [f64; 2]) -> Result<(f64, [f64; 2])> {
    constraint_partials(p, du, true)
}

/// Which velocity component the constraint is solved for when a start
/// direction is parametrized by one scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum DirMode {
    /// Solve for `du2`; the scalar parameter is `du1`.
    U2,
    /// Solve for `du1`; the scalar parameter is `du2`.
    U1,
}

pub(crate) fn dir_mode(p: &SurfacePoint) -> DirMode {
    if p.g[2] > tol::TAU_W {
        DirMode::U2
    } else {
        DirMode::U1
    }
}

pub(crate) fn dir_from_scalar(
    p: &SurfacePoint,
    mode: DirMode,
    t: f64,
    sigma: f64,
) -> Result<[f64; 2]> {
    match mode {
        DirMode::U2 => Ok([t, solve_constraint_u2(p, t, sigma)?.value]),
        DirMode::U1 => Ok([solve_constraint_u1(p, t, sigma)?.value, t]),
    }
}
