//! Constrained variational problems for relaxed elastic lines on oriented
//! surfaces.
//!
//! Two problems are posed over curves `x -> (u1(x), u2(x))` of fixed length
//! with the unit-speed side condition `g = sum g_ij du_i du_j = 1`:
//!
//! * **incomplete**: minimize the total squared normal curvature
//!   `Kn = integral of kappa_n^2`, Lagrangian `H = kappa_n^2 + lambda (g - 1)`;
//!   the Euler-Lagrange system `H_{u_i} - (H_{du_i})' = 0` together with the
//!   multiplier is fifth order;
//! * **complete**: minimize the full squared curvature
//!   `K = integral of (kappa_n^2 + kappa_g^2)` with the regime-graded geodesic
//!   curvature, Lagrangian `H = kappa_n^2 + kappa_g^2 + lambda (g - 1)`; the
//!   system `H_{u_i} - (H_{du_i})' + (H_{ddu_i})'' = 0` is ninth order.
//!
//! The start is either free or clamped (positions plus, for the complete
//! problem, the first velocity component); the far end is always natural
//! (free), so the variational boundary factors must vanish there.
//!
//! On charts with a non-isotropic tangent direction the graded
//! `kappa_g^2 = (X . gamma)^2` vanishes identically along every unit-speed
//! curve (`X . gamma` is the derivative of the constraint), which collapses
//! the complete problem onto the incomplete one: same extremals, same
//! multiplier, and the complete boundary triples reduce to `H_{du_i} = 0`.
//! The solvers exploit this; on isotropic charts the genuine ninth-order
//! system is shot directly.

mod discrete;
mod lagrangian;
mod lm;
mod residual;
mod shooting;

pub use discrete::{discrete_action, discrete_gradient_fd, solve_discrete};
pub use lagrangian::{solve_constraint_u1, solve_constraint_u2, ConstraintSolve, Lagrangian};
pub use residual::{
    boundary_terms_u1, boundary_terms_u2, el_residual_complete, el_residual_incomplete,
    max_el_residual,
};
pub use shooting::{solve_collocation, solve_complete, solve_incomplete};

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::darboux::{darboux_invariants, max_kappa_g_sq, CurveOnSurface};
use crate::error::{Error, Result};
use crate::math;
use crate::surface::SurfaceChart;
use crate::tol;

/// Which energy is being minimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    /// Total squared normal curvature.
    Incomplete,
    /// Total squared curvature (normal plus graded geodesic).
    Complete,
}

/// Start-of-curve boundary data. The far end is always natural.
#[derive(Clone, Copy, Debug)]
pub enum StartCondition {
    /// Both endpoints natural (free).
    Free,
    /// Positions pinned at `u0`; `du1` fixes the first velocity component.
    /// The complete problem pins it hard (its ninth-order structure needs
    /// the extra datum); the incomplete problem, being fifth order, uses it
    /// only to seed and sign the start direction.
    Clamped { u0: [f64; 2], du1: f64 },
}

/// A posed elastic-line problem on one chart.
#[derive(Clone)]
pub struct VariationalProblem {
    pub chart: SurfaceChart,
    pub kind: ProblemKind,
    pub length: f64,
    pub start: StartCondition,
}

impl VariationalProblem {
    /// Validates the length and, for a clamped start, that the unit-speed
    /// constraint is solvable for a start direction consistent with `du1`.
    pub fn new(
        chart: SurfaceChart,
        kind: ProblemKind,
        length: f64,
        start: StartCondition,
    ) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::DegenerateJet);
        }
        if let StartCondition::Clamped { u0, du1 } = start {
            let p = chart.point(u0[0], u0[1])?;
            match lagrangian::solve_constraint_u2(&p, du1, 1.0) {
                Ok(_) => {}
                Err(Error::InfeasibleConstraint) => {
                    // The other branch has the same discriminant.
                    return Err(Error::InfeasibleConstraint);
                }
                Err(Error::SingularU2) => {
                    // The constraint cannot see du2; it must then pin du1 up
                    // to sign, and the clamped value has to match.
                    let sigma = math::sgn(du1);
                    let c = lagrangian::solve_constraint_u1(&p, 0.0, sigma)?;
                    if math::abs(c.value - du1) > 1e-6 {
                        return Err(Error::InfeasibleConstraint);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(VariationalProblem { chart, kind, length, start })
    }
}

/// The multiplier function `lambda(x)` attached to a solution: constant, or
/// cubic Hermite through samples with recorded slopes.
#[derive(Clone, Debug)]
pub struct LambdaField {
    source: LambdaSource,
}

#[derive(Clone, Debug)]
enum LambdaSource {
    Constant(f64),
    Samples { xs: Vec<f64>, vals: Vec<f64>, dvals: Vec<f64> },
}

impl LambdaField {
    pub fn constant(v: f64) -> Self {
        LambdaField { source: LambdaSource::Constant(v) }
    }

    pub fn from_samples(xs: Vec<f64>, vals: Vec<f64>, dvals: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != vals.len() || xs.len() != dvals.len() {
            return Err(Error::DegenerateJet);
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::DegenerateJet);
            }
        }
        Ok(LambdaField { source: LambdaSource::Samples { xs, vals, dvals } })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.source {
            LambdaSource::Constant(v) => *v,
            LambdaSource::Samples { xs, vals, dvals } => {
                let n = xs.len();
                let seg = xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
                let h = xs[seg + 1] - xs[seg];
                let t = (x - xs[seg]) / h;
                let (t2, t3) = (t * t, t * t * t);
                (2.0 * t3 - 3.0 * t2 + 1.0) * vals[seg]
                    + (t3 - 2.0 * t2 + t) * dvals[seg] * h
                    + (-2.0 * t3 + 3.0 * t2) * vals[seg + 1]
                    + (t3 - t2) * dvals[seg + 1] * h
            }
        }
    }

    /// Largest absolute sampled value (constant fields report themselves).
    pub fn max_abs(&self) -> f64 {
        match &self.source {
            LambdaSource::Constant(v) => math::abs(*v),
            LambdaSource::Samples { vals, .. } => {
                vals.iter().fold(0.0f64, |m, v| m.max(math::abs(*v)))
            }
        }
    }
}

/// Everything a solver returns: the curve, its multiplier, both energies,
/// and the quality measures the acceptance gates look at.
#[derive(Clone)]
pub struct ElasticSolution {
    pub chart: SurfaceChart,
    pub kind: ProblemKind,
    pub curve: CurveOnSurface,
    pub lambda: LambdaField,
    /// Total squared curvature (normal plus graded geodesic).
    pub k: f64,
    /// Total squared normal curvature.
    pub kn: f64,
    /// Max-norm residuals of the two Euler-Lagrange equations and of `g - 1`.
    pub el_residual: [f64; 3],
    /// Variational boundary factors at each natural end (flattened triples).
    pub boundary_residual: Vec<f64>,
    /// Whether the graded geodesic curvature vanishes within the default
    /// tolerance; see [`is_geodesic`] for a configurable check.
    pub is_geodesic: bool,
    /// Constraint branch sign the solver settled on.
    pub sigma: f64,
    pub iterations: usize,
    /// Minimized objective (half the squared residual norm for the shooting
    /// solvers; penalized energy for the discrete minimizer) at each accepted
    /// iterate; non-increasing by construction.
    pub energy_history: Vec<f64>,
}

/// Solver configuration. `Default` matches the documented method parameters.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Multiple-shooting segment count.
    pub segments: usize,
    /// Integration steps per shooting segment (also sets the returned
    /// curve's sample resolution: `segments * steps_per_segment` intervals).
    pub steps_per_segment: usize,
    pub max_iterations: usize,
    /// Convergence gate on the max-norm of the shooting residual map.
    pub residual_tol: f64,
    pub tau_el: f64,
    pub tau_bc: f64,
    pub tau_con: f64,
    pub tau_geo: f64,
    /// Optional seed for the start point/direction of free problems (and the
    /// free direction scalar of clamped ones).
    pub init: Option<InitState>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            segments: tol::SHOOTING_SEGMENTS,
            steps_per_segment: 32,
            max_iterations: 80,
            residual_tol: 1e-9,
            tau_el: tol::TAU_EL,
            tau_bc: tol::TAU_BC,
            tau_con: tol::TAU_CON,
            tau_geo: tol::TAU_GEO,
            init: None,
        }
    }
}

/// Initial guess for a solve.
#[derive(Clone, Copy, Debug)]
pub struct InitState {
    pub u0: [f64; 2],
    pub du: [f64; 2],
}

/// Solver failure modes.
pub enum SolveError {
    /// The iteration stalled or a quality gate failed; carries the best
    /// iterate so callers can inspect how close it came.
    NoConvergence { residual: f64, best: Box<ElasticSolution> },
    /// Both constraint branches are singular (the tangent direction carries
    /// no Galilean speed).
    SingularConstraint,
    /// Geometry failure underneath the solver.
    Geometry(Error),
}

impl From<Error> for SolveError {
    fn from(e: Error) -> Self {
        SolveError::Geometry(e)
    }
}

impl fmt::Debug for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NoConvergence { residual, best } => f
                .debug_struct("NoConvergence")
                .field("residual", residual)
                .field("best_k", &best.k)
                .field("best_el_residual", &best.el_residual)
                .finish(),
            SolveError::SingularConstraint => f.write_str("SingularConstraint"),
            SolveError::Geometry(e) => f.debug_tuple("Geometry").field(e).finish(),
        }
    }
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NoConvergence { residual, .. } => {
                write!(f, "solver did not converge: residual {residual:.3e}")
            }
            SolveError::SingularConstraint => {
                write!(f, "unit-speed constraint singular in both velocity components")
            }
            SolveError::Geometry(e) => write!(f, "geometry error: {e}"),
        }
    }
}

impl core::error::Error for SolveError {}

pub type SolveResult<T> = core::result::Result<T, SolveError>;

/// Composite quadrature over sample values on a grid: Simpson where the
/// spacing is uniform with an even interval count, trapezoid otherwise.
pub(crate) fn quadrature(xs: &[f64], vals: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let h = xs[1] - xs[0];
    let uniform = xs.windows(2).all(|w| math::abs(w[1] - w[0] - h) < 1e-9 * (1.0 + math::abs(h)));
    if uniform && (n - 1) % 2 == 0 {
        let mut s = vals[0] + vals[n - 1];
        for (k, v) in vals.iter().enumerate().take(n - 1).skip(1) {
            s += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s * h / 3.0
    } else {
        let mut s = 0.0;
        for k in 0..n - 1 {
            s += 0.5 * (vals[k] + vals[k + 1]) * (xs[k + 1] - xs[k]);
        }
        s
    }
}

/// Sample grid for energy quadrature: the curve's own nodes when it is
/// sample-based (the constraint is known to hold there), a uniform 512-point
/// grid otherwise.
fn energy_grid(curve: &CurveOnSurface) -> Vec<f64> {
    if let Some((xs, _, _)) = curve.nodes() {
        xs.to_vec()
    } else {
        (0..=512).map(|k| curve.len * k as f64 / 512.0).collect()
    }
}

fn energy_of(
    chart: &SurfaceChart,
    curve: &CurveOnSurface,
    f: impl Fn(&crate::darboux::DarbouxData) -> f64,
) -> Result<f64> {
    let xs = energy_grid(curve);
    let mut vals = Vec::with_capacity(xs.len());
    for &x in &xs {
        let d = darboux_invariants(chart, curve, x)?;
        vals.push(f(&d));
    }
    Ok(quadrature(&xs, &vals))
}

/// Total squared normal curvature `integral of kappa_n^2` over the curve.
/// The unit-speed constraint must hold at the quadrature samples.
pub fn energy_kn(chart: &SurfaceChart, curve: &CurveOnSurface) -> Result<f64> {
    energy_of(chart, curve, |d| d.kappa_n * d.kappa_n)
}

/// Total squared curvature `integral of (kappa_n^2 + kappa_g^2)` with the
/// regime-graded geodesic curvature — the energy the complete problem
/// minimizes. Exceeds [`energy_kn`] by the geodesic part.
pub fn energy_k(chart: &SurfaceChart, curve: &CurveOnSurface) -> Result<f64> {
    energy_of(chart, curve, |d| d.kappa_n * d.kappa_n + d.kappa_g_sq)
}

/// Geodesic classification of a solution: largest graded `kappa_g^2` over
/// 256 samples below `tol^2`.
pub fn is_geodesic(sol: &ElasticSolution, tol: f64) -> Result<bool> {
    Ok(max_kappa_g_sq(&sol.chart, &sol.curve, 256)? < tol * tol)
}
