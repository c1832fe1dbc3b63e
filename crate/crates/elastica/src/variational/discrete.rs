//! Direct discrete minimization of the constrained energies over node
//! positions — the robustness fallback behind the shooting solvers — plus
//! the public discrete action whose node gradient reproduces the continuous
//! Euler-Lagrange residual operator.
//!
//! The solver discretizes a curve of fixed length into `n` uniform segments
//! and minimizes a penalized least-squares objective over the `2 (n + 1)`
//! node positions:
//!
//! * per segment, `sqrt(h) * kappa_n` at the midpoint (the row squares then
//!   sum to the midpoint-rule energy), plus, for the complete kind, two
//!   factors whose squares sum to the graded `kappa_g^2`;
//! * per segment, the midpoint unit-speed defect under a stiff penalty;
//! * for clamped starts, penalty rows pinning the start position (and, for
//!   the complete kind, the first velocity component).
//!
//! Midpoint jets come from four-node stencils, so every row touches at most
//! eight variables. The Jacobian is built from eight coloring groups (node
//! index mod 4 times component): four consecutive nodes hold exactly one
//! member of each residue class, so one perturbed evaluation per group
//! attributes unambiguously to columns.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::darboux::{integrate_geodesic, CurveOnSurface};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, fd_weights, solve_least_squares};
use crate::math;
use crate::surface::{pair, ChartRegime, SurfaceChart, SurfacePoint};
use crate::tol;

use super::lagrangian::{dir_from_scalar, dir_mode, h_eval, u_partials, DirMode};
use super::residual::{el_residual_nodes, NodeData};
use super::shooting::{domain_center, triple_state};
use super::{
    quadrature, ElasticSolution, LambdaField, ProblemKind, SolveError, SolveOptions, SolveResult,
    StartCondition, VariationalProblem,
};

/// Penalty weight on the unit-speed defect and the clamped-start pins. At a
/// stationary point the defect balances the energy gradient over the squared
/// weight, which puts it well under the constraint gate.
const W_PEN: f64 = 1e5;
/// Forward-difference step scale for the colored Jacobian.
const FD_STEP: f64 = 1e-7;
/// Ridge for the multiplier-recovery least squares.
const LAM_EPS: f64 = 1e-10;

/// Quadrature of the Lagrangian along a sampled curve, with node jets built
/// from five-point stencils on the sample grid (shifted at the ends) and
/// trapezoid weights. On a uniform grid the partial derivative of this sum
/// with respect to an interior node position is `h` times the continuous
/// Euler-Lagrange residual there — the discrete summation-by-parts mirror of
/// the integration by parts that produces the residual operator — which is
/// what makes it a useful independent check of [`el_residual_incomplete`]
/// and [`el_residual_complete`].
///
/// [`el_residual_incomplete`]: super::el_residual_incomplete
/// [`el_residual_complete`]: super::el_residual_complete
pub fn discrete_action(
    chart: &SurfaceChart,
    kind: ProblemKind,
    xs: &[f64],
    us: &[[f64; 2]],
    lambda: &LambdaField,
) -> Result<f64> {
    let n = xs.len();
    if n < 5 || us.len() != n {
        return Err(Error::DegenerateJet);
    }
    for w in xs.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::DegenerateJet);
        }
    }
    let mut total = 0.0;
    for k in 0..n {
        let s = (k as isize - 2).clamp(0, n as isize - 5) as usize;
        let w = fd_weights(xs[k], &xs[s..s + 5], 2);
        let mut du = [0.0; 2];
        let mut ddu = [0.0; 2];
        for j in 0..5 {
            for i in 0..2 {
                du[i] += w[j][1] * us[s + j][i];
                ddu[i] += w[j][2] * us[s + j][i];
            }
        }
        let p = chart.point(us[k][0], us[k][1])?;
        let hd = h_eval(&p, kind, du, ddu, lambda.eval(xs[k]));
        let wq = if k == 0 {
            0.5 * (xs[1] - xs[0])
        } else if k == n - 1 {
            0.5 * (xs[n - 1] - xs[n - 2])
        } else {
            0.5 * (xs[k + 1] - xs[k - 1])
        };
        total += wq * hd.value;
    }
    Ok(total)
}

/// Central finite difference of [`discrete_action`] in one node coordinate.
pub fn discrete_gradient_fd(
    chart: &SurfaceChart,
    kind: ProblemKind,
    xs: &[f64],
    us: &[[f64; 2]],
    lambda: &LambdaField,
    node: usize,
    comp: usize,
    step: f64,
) -> Result<f64> {
    let mut shifted = us.to_vec();
    shifted[node][comp] = us[node][comp] + step;
    let sp = discrete_action(chart, kind, xs, &shifted, lambda)?;
    shifted[node][comp] = us[node][comp] - step;
    let sm = discrete_action(chart, kind, xs, &shifted, lambda)?;
    Ok((sp - sm) / (2.0 * step))
}

/// Two numbers whose squares sum to the graded `kappa_g^2` at a point: the
/// rank-one projection `X . gamma` in the general regime, a pivoted Cholesky
/// factor of the induced metric applied to the defect in the isotropic one.
fn kappa_g_factors(p: &SurfacePoint, gamma: [f64; 2]) -> (f64, f64) {
    match p.regime {
        ChartRegime::General => (p.g_vec[0] * gamma[0] + p.g_vec[1] * gamma[1], 0.0),
        ChartRegime::Isotropic => {
            let (m0, m1) = if p.g[0] >= p.g[2] { (0, 1) } else { (1, 0) };
            let q00 = p.g[pair(m0, m0)];
            let q11 = p.g[pair(m1, m1)];
            if q00 <= tol::TAU_W {
                return (0.0, 0.0);
            }
            let l11 = math::sqrt(q00);
            let l21 = p.g[1] / l11;
            let l22 = math::sqrt((q11 - l21 * l21).max(0.0));
            (l11 * gamma[m0] + l21 * gamma[m1], l22 * gamma[m1])
        }
    }
}

struct Minimized {
    z: Vec<f64>,
    residual: Vec<f64>,
    iterations: usize,
    history: Vec<f64>,
}

fn half_ssq(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

/// The discretized system on `n` uniform segments.
struct System<'a> {
    chart: &'a SurfaceChart,
    kind: ProblemKind,
    n: usize,
    h: f64,
    /// Midpoint stencil weights `[pattern][node][order]` for the first,
    /// interior, and last segments (offsets `0.5h`, `1.5h`, `2.5h` into the
    /// four-node window).
    wmid: [Vec<Vec<f64>>; 3],
    /// One-sided derivative weights at the start node.
    w0: Vec<Vec<f64>>,
    /// Clamped start: position, and for the complete kind the pinned first
    /// velocity component.
    pin: Option<([f64; 2], Option<f64>)>,
}

impl<'a> System<'a> {
    fn new(
        chart: &'a SurfaceChart,
        kind: ProblemKind,
        n: usize,
        len: f64,
        start: StartCondition,
    ) -> Self {
        let h = len / n as f64;
        let grid = [0.0, h, 2.0 * h, 3.0 * h];
        let wmid = [
            fd_weights(0.5 * h, &grid, 2),
            fd_weights(1.5 * h, &grid, 2),
            fd_weights(2.5 * h, &grid, 2),
        ];
        let w0 = fd_weights(0.0, &grid, 1);
        let pin = match start {
            StartCondition::Free => None,
            StartCondition::Clamped { u0, du1 } => {
                Some((u0, (kind == ProblemKind::Complete).then_some(du1)))
            }
        };
        System { chart, kind, n, h, wmid, w0, pin }
    }

    fn rows_per_segment(&self) -> usize {
        match self.kind {
            ProblemKind::Incomplete => 2,
            ProblemKind::Complete => 4,
        }
    }

    fn rows(&self) -> usize {
        self.n * self.rows_per_segment()
            + match self.pin {
                None => 0,
                Some((_, None)) => 2,
                Some((_, Some(_))) => 3,
            }
    }

    /// Base node and weight pattern of the four-node stencil for segment `k`.
    fn stencil(&self, k: usize) -> (usize, &[Vec<f64>]) {
        let j = (k as isize - 1).clamp(0, self.n as isize - 3) as usize;
        let pat = if k == 0 {
            0
        } else if k == self.n - 1 {
            2
        } else {
            1
        };
        (j, &self.wmid[pat])
    }

    fn residual(&self, z: &[f64]) -> Result<Vec<f64>> {
        let sqrt_h = math::sqrt(self.h);
        let mut r = Vec::with_capacity(self.rows());
        for k in 0..self.n {
            let (j, w) = self.stencil(k);
            let mut u = [0.0; 2];
            let mut du = [0.0; 2];
            let mut ddu = [0.0; 2];
            for (a, wa) in w.iter().enumerate() {
                for i in 0..2 {
                    let v = z[2 * (j + a) + i];
                    u[i] += wa[0] * v;
                    du[i] += wa[1] * v;
                    ddu[i] += wa[2] * v;
                }
            }
            let p = self.chart.point(u[0], u[1])?;
            let hd = h_eval(&p, self.kind, du, ddu, 0.0);
            r.push(sqrt_h * hd.kappa_n);
            if self.kind == ProblemKind::Complete {
                let (f1, f2) = kappa_g_factors(&p, hd.gamma);
                r.push(sqrt_h * f1);
                r.push(sqrt_h * f2);
            }
            r.push(W_PEN * (hd.g_quad - 1.0));
        }
        if let Some((u0, du1)) = self.pin {
            r.push(W_PEN * (z[0] - u0[0]));
            r.push(W_PEN * (z[1] - u0[1]));
            if let Some(d1) = du1 {
                let mut v = 0.0;
                for (a, wa) in self.w0.iter().enumerate() {
                    v += wa[1] * z[2 * a];
                }
                r.push(W_PEN * (v - d1));
            }
        }
        Ok(r)
    }

    /// Column footprint of every residual row (at most eight entries).
    fn row_cols(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.rows());
        for k in 0..self.n {
            let (j, _) = self.stencil(k);
            let cols: Vec<usize> =
                (0..4).flat_map(|a| [2 * (j + a), 2 * (j + a) + 1]).collect();
            for _ in 0..self.rows_per_segment() {
                out.push(cols.clone());
            }
        }
        if let Some((_, du1)) = self.pin {
            out.push(vec![0]);
            out.push(vec![1]);
            if du1.is_some() {
                out.push(vec![0, 2, 4, 6]);
            }
        }
        out
    }

    /// Colored forward-difference Jacobian as sparse rows, with a backward
    /// retry for groups whose forward probe fails to evaluate.
    fn jacobian(
        &self,
        z: &[f64],
        r0: &[f64],
        row_cols: &[Vec<usize>],
    ) -> Result<Vec<Vec<(usize, f64)>>> {
        let nv = z.len();
        let mut jrows: Vec<Vec<(usize, f64)>> = vec![Vec::with_capacity(8); r0.len()];
        for rm in 0..4 {
            for c in 0..2 {
                let mut zp = z.to_vec();
                let mut steps = vec![0.0; nv];
                let mut node = rm;
                while 2 * node + c < nv {
                    let col = 2 * node + c;
                    let d = FD_STEP * (1.0 + math::abs(z[col]));
                    zp[col] += d;
                    steps[col] = d;
                    node += 4;
                }
                let (rp, sgn) = match self.residual(&zp) {
                    Ok(v) => (v, 1.0),
                    Err(_) => {
                        let mut zm = z.to_vec();
                        for (col, d) in steps.iter().enumerate() {
                            zm[col] -= d;
                        }
                        (self.residual(&zm)?, -1.0)
                    }
                };
                for (rowi, cols) in row_cols.iter().enumerate() {
                    for &col in cols {
                        if steps[col] != 0.0 {
                            jrows[rowi].push((col, (rp[rowi] - r0[rowi]) / (sgn * steps[col])));
                        }
                    }
                }
            }
        }
        Ok(jrows)
    }

    /// Damped least squares over the node positions. This is minimization,
    /// not root finding — the energy rows stay at the minimized level — so
    /// termination is a stalled trial loop (no downhill step at any damping)
    /// or the iteration budget, and convergence is judged afterwards from
    /// the constraint and pin rows alone.
    fn minimize(&self, z0: Vec<f64>, opts: &SolveOptions) -> Result<Minimized> {
        let nv = z0.len();
        let row_cols = self.row_cols();
        let mut z = z0;
        let mut r = self.residual(&z)?;
        let mut obj = half_ssq(&r);
        let mut history = vec![obj];
        let mut mu = 1e-6;
        let mut iterations = 0;
        for _ in 0..opts.max_iterations.max(120) {
            let jrows = self.jacobian(&z, &r, &row_cols)?;
            let mut jtj = vec![0.0; nv * nv];
            let mut jtr = vec![0.0; nv];
            for (rowi, cols) in jrows.iter().enumerate() {
                for &(c1, v1) in cols {
                    jtr[c1] -= v1 * r[rowi];
                    for &(c2, v2) in cols {
                        jtj[c1 * nv + c2] += v1 * v2;
                    }
                }
            }
            let diag_floor =
                1e-12 * (1.0 + jtj.iter().step_by(nv + 1).fold(0.0f64, |a, v| a.max(*v)));
            let mut accepted = false;
            while mu <= 1e12 {
                let mut a = jtj.clone();
                let mut b = jtr.clone();
                for i in 0..nv {
                    a[i * nv + i] += mu * (jtj[i * nv + i] + diag_floor);
                }
                // Jacobi equilibration before factoring: the penalty rows
                // put ~W_PEN^2 on the pinned/constrained directions while
                // the energy rows carry O(1), and the factorization should
                // not have to absorb that spread.
                let scale: Vec<f64> = (0..nv)
                    .map(|i| 1.0 / math::sqrt(a[i * nv + i].max(1e-300)))
                    .collect();
                for i in 0..nv {
                    b[i] *= scale[i];
                    for j in 0..nv {
                        a[i * nv + j] *= scale[i] * scale[j];
                    }
                }
                if cholesky_solve(&mut a, &mut b, nv) {
                    let mut zt = z.clone();
                    for i in 0..nv {
                        zt[i] += b[i] * scale[i];
                    }
                    if let Ok(rt) = self.residual(&zt) {
                        let objt = half_ssq(&rt);
                        if objt.is_finite() && objt < obj {
                            // The penalty rows keep the damping diagonal large,
                            // so an accepted step can be far shorter than the
                            // valley allows. Extend it geometrically while the
                            // objective keeps dropping.
                            let mut best = (zt, rt, objt);
                            let mut alpha = 2.0;
                            while alpha <= 1024.0 {
                                let mut ze = z.clone();
                                for i in 0..nv {
                                    ze[i] += alpha * b[i] * scale[i];
                                }
                                let re = match self.residual(&ze) {
                                    Ok(re) => re,
                                    Err(_) => break,
                                };
                                let oe = half_ssq(&re);
                                if oe.is_finite() && oe < best.2 {
                                    best = (ze, re, oe);
                                    alpha *= 2.0;
                                } else {
                                    break;
                                }
                            }
                            z = best.0;
                            r = best.1;
                            obj = best.2;
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
        Ok(Minimized { z, residual: r, iterations, history })
    }

    /// Initial node positions: a geodesic polyline from the start data when
    /// one integrates cleanly (unit speed holds everywhere by construction),
    /// a straight chart line otherwise.
    fn initial_nodes(&self, u0: [f64; 2], dir: [f64; 2]) -> Vec<f64> {
        let n = self.n;
        let len = self.h * n as f64;
        let mut z = vec![0.0; 2 * (n + 1)];
        if let Ok(run) = integrate_geodesic(self.chart, [u0[0], u0[1], dir[0], dir[1]], len, self.h)
        {
            if let Some((_, us, _)) = run.curve.nodes() {
                if us.len() == n + 1 {
                    for (k, u) in us.iter().enumerate() {
                        z[2 * k] = u[0];
                        z[2 * k + 1] = u[1];
                    }
                    return z;
                }
            }
        }
        for k in 0..=n {
            let x = self.h * k as f64;
            z[2 * k] = u0[0] + dir[0] * x;
            z[2 * k + 1] = u0[1] + dir[1] * x;
        }
        z
    }

    /// Node jets, multiplier recovery, energies, residual report and gates.
    fn assemble(
        &self,
        min: &Minimized,
        opts: &SolveOptions,
        sigma: f64,
    ) -> SolveResult<ElasticSolution> {
        let n = self.n;
        let n_nodes = n + 1;
        let z = &min.z;
        let xs: Vec<f64> = (0..n_nodes).map(|k| self.h * k as f64).collect();
        let us: Vec<[f64; 2]> = (0..n_nodes).map(|k| [z[2 * k], z[2 * k + 1]]).collect();

        // Five-point node jets; velocities rescaled to exact unit speed (the
        // penalty enforces the constraint at midpoints, to its own level).
        let mut dus = Vec::with_capacity(n_nodes);
        let mut ddus = Vec::with_capacity(n_nodes);
        let mut starts = Vec::with_capacity(n_nodes);
        let mut wnode = Vec::with_capacity(n_nodes);
        for k in 0..n_nodes {
            let s = (k as isize - 2).clamp(0, n_nodes as isize - 5) as usize;
            let w = fd_weights(xs[k], &xs[s..s + 5], 2);
            let mut du = [0.0; 2];
            let mut ddu = [0.0; 2];
            for j in 0..5 {
                for i in 0..2 {
                    du[i] += w[j][1] * us[s + j][i];
                    ddu[i] += w[j][2] * us[s + j][i];
                }
            }
            let p = self.chart.point(us[k][0], us[k][1]).map_err(SolveError::Geometry)?;
            let sp = p.speed(du);
            if sp > tol::TAU_W {
                du = [du[0] / sp, du[1] / sp];
            }
            dus.push(du);
            ddus.push(ddu);
            starts.push(s);
            wnode.push(w);
        }

        // Nodal multiplier by linear least squares on the Euler-Lagrange
        // rows: the residual is affine in the lambda samples — through
        // `lambda_k dg/du` in `H_u` and `2 lambda G` inside the
        // differentiated momentum — and everything else is the lambda-free
        // base. The ridge returns the minimum-norm field where the system is
        // degenerate (flat directions).
        let complete = self.kind == ProblemKind::Complete;
        let mut b0 = Vec::with_capacity(n_nodes);
        let mut phi0 = Vec::with_capacity(n_nodes);
        let mut hu0 = Vec::with_capacity(n_nodes);
        let mut gdu2 = Vec::with_capacity(n_nodes);
        let mut gu = Vec::with_capacity(n_nodes);
        let mut kn_vals = Vec::with_capacity(n_nodes);
        let mut kg_vals = Vec::with_capacity(n_nodes);
        for k in 0..n_nodes {
            let p = self.chart.point(us[k][0], us[k][1]).map_err(SolveError::Geometry)?;
            let hd = h_eval(&p, self.kind, dus[k], ddus[k], 0.0);
            let up = u_partials(self.chart, self.kind, us[k], dus[k], ddus[k], 0.0)
                .map_err(SolveError::Geometry)?;
            b0.push(hd.d_du);
            phi0.push(hd.d_ddu);
            hu0.push(up.h_u);
            gdu2.push([2.0 * hd.g_du[0], 2.0 * hd.g_du[1]]);
            let mut gu_k = [0.0; 2];
            for (i, slot) in gu_k.iter_mut().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        *slot += p.dg[i][pair(a, b)] * dus[k][a] * dus[k][b];
                    }
                }
            }
            gu.push(gu_k);
            kn_vals.push(hd.kappa_n * hd.kappa_n);
            kg_vals.push(hd.kappa_g_sq);
        }
        let mut lam_m = vec![0.0; 2 * n_nodes * n_nodes];
        let mut lam_r = vec![0.0; 2 * n_nodes];
        for k in 0..n_nodes {
            let s = starts[k];
            let w = &wnode[k];
            for i in 0..2 {
                let row = 2 * k + i;
                let mut base = hu0[k][i];
                for j in 0..5 {
                    base -= w[j][1] * b0[s + j][i];
                    if complete {
                        base += w[j][2] * phi0[s + j][i];
                    }
                }
                lam_r[row] = -base;
                lam_m[row * n_nodes + k] += gu[k][i];
                for j in 0..5 {
                    lam_m[row * n_nodes + s + j] -= w[j][1] * gdu2[s + j][i];
                }
            }
        }
        let lams = solve_least_squares(&lam_m, &lam_r, 2 * n_nodes, n_nodes, LAM_EPS);
        let mut dlams = Vec::with_capacity(n_nodes);
        for k in 0..n_nodes {
            let s = starts[k];
            let mut d = 0.0;
            for j in 0..5 {
                d += wnode[k][j][1] * lams[s + j];
            }
            dlams.push(d);
        }

        let nd = NodeData {
            xs: xs.clone(),
            us: us.clone(),
            dus: dus.clone(),
            ddus: ddus.clone(),
            lams: lams.clone(),
        };
        let el = el_residual_nodes(self.chart, self.kind, &nd).map_err(SolveError::Geometry)?;

        // Boundary triples at natural ends, with the momentum rate taken
        // from the grid derivative of the nodal momentum sequence.
        let ends: &[usize] = if self.pin.is_none() { &[0, n] } else { &[n] };
        let mut triples = Vec::new();
        for &k in ends {
            let p = self.chart.point(us[k][0], us[k][1]).map_err(SolveError::Geometry)?;
            let mut phidot = [0.0; 2];
            if complete {
                let s = starts[k];
                for i in 0..2 {
                    for j in 0..5 {
                        phidot[i] += wnode[k][j][1] * phi0[s + j][i];
                    }
                }
            }
            let t = triple_state(&p, self.kind, dus[k], ddus[k], lams[k], phidot)
                .map_err(SolveError::Geometry)?;
            triples.extend_from_slice(&t);
        }

        let kn = quadrature(&xs, &kn_vals);
        let k_total = {
            let sums: Vec<f64> = kn_vals.iter().zip(kg_vals.iter()).map(|(a, b)| a + b).collect();
            quadrature(&xs, &sums)
        };
        let max_kg = kg_vals.iter().fold(0.0f64, |m, v| m.max(*v));
        let curve = CurveOnSurface::from_samples(xs, us, dus).map_err(SolveError::Geometry)?;
        let lambda =
            LambdaField::from_samples(nd.xs.clone(), lams, dlams).map_err(SolveError::Geometry)?;
        let solution = ElasticSolution {
            chart: self.chart.clone(),
            kind: self.kind,
            curve,
            lambda,
            k: k_total,
            kn,
            el_residual: el,
            boundary_residual: triples,
            is_geodesic: max_kg < opts.tau_geo * opts.tau_geo,
            sigma,
            iterations: min.iterations,
            energy_history: min.history.clone(),
        };

        // Gates: midpoint constraint defect and start pins, read back from
        // the final penalty rows. The Euler-Lagrange residual is honest
        // discretization error here and is reported, not gated.
        let rps = self.rows_per_segment();
        let mut defect = 0.0f64;
        for k in 0..n {
            defect = defect.max(math::abs(min.residual[k * rps + rps - 1]) / W_PEN);
        }
        let mut pin_def = 0.0f64;
        for v in &min.residual[n * rps..] {
            pin_def = pin_def.max(math::abs(*v) / W_PEN);
        }
        if defect <= opts.tau_con && pin_def <= opts.tau_bc {
            Ok(solution)
        } else {
            Err(SolveError::NoConvergence {
                residual: defect.max(pin_def),
                best: Box::new(solution),
            })
        }
    }
}

/// Direct discretized minimization of the posed problem over `n_segments`
/// uniform segments (clamped below at 8). The shooting solvers fall back to
/// this when their residual maps will not converge; it trades the tight
/// Euler-Lagrange residuals of the continuous flows for basin robustness.
pub fn solve_discrete(
    problem: &VariationalProblem,
    n_segments: usize,
    opts: &SolveOptions,
) -> SolveResult<ElasticSolution> {
    let n = n_segments.max(8);
    let sys = System::new(&problem.chart, problem.kind, n, problem.length, problem.start);
    let u0 = match problem.start {
        StartCondition::Clamped { u0, .. } => u0,
        StartCondition::Free => {
            opts.init.map(|s| s.u0).unwrap_or_else(|| domain_center(&problem.chart))
        }
    };
    let p0 = problem.chart.point(u0[0], u0[1])?;
    let mode = dir_mode(&p0);
    // Direction scalar and branch signs, mirroring the shooting start plans.
    let (t0, sigmas): (f64, Vec<f64>) = match (problem.start, mode) {
        (StartCondition::Free, DirMode::U2) => {
            (opts.init.map(|s| s.du[0]).unwrap_or(0.0), vec![1.0, -1.0])
        }
        (StartCondition::Free, DirMode::U1) => {
            (opts.init.map(|s| s.du[1]).unwrap_or(0.0), vec![1.0, -1.0])
        }
        (StartCondition::Clamped { du1, .. }, DirMode::U1) => {
            // The constraint pins |du1|; the free scalar is du2 and the
            // branch sign must reproduce the clamped direction.
            (opts.init.map(|s| s.du[1]).unwrap_or(0.0), vec![math::sgn(du1)])
        }
        (StartCondition::Clamped { du1, .. }, DirMode::U2) => (du1, vec![1.0, -1.0]),
    };
    let mut best: Option<ElasticSolution> = None;
    let mut first_err: Option<SolveError> = None;
    for sigma in sigmas {
        let attempt = (|| -> SolveResult<ElasticSolution> {
            let dir = dir_from_scalar(&p0, mode, t0, sigma)?;
            let z0 = sys.initial_nodes(u0, dir);
            let min = sys.minimize(z0, opts)?;
            sys.assemble(&min, opts, sigma)
        })();
        match attempt {
            Ok(sol) => {
                let better = match &best {
                    Some(b) => sol.k < b.k - 1e-15,
                    None => true,
                };
                if better {
                    best = Some(sol);
                }
            }
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    match best {
        Some(sol) => Ok(sol),
        None => Err(first_err.unwrap_or(SolveError::SingularConstraint)),
    }
}
