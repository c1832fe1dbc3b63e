//! Darboux invariants along curves on surfaces, and geodesic integration.
//!
//! A curve on a chart is a parameter path `x -> (u1(x), u2(x))`. Along it:
//!
//! * normal curvature `kappa_n = sum L_ij du_i du_j`
//! * geodesic torsion `tau_g = sum g^i L_ij du_j`
//! * geodesic defect `gamma_i = ddu_i + sum Gamma^i_kl du_k du_l`
//! * squared geodesic curvature `kappa_g^2 = sum g_ij gamma_i gamma_j`,
//!   with the regime-graded first form (degenerate `X_i X_j` on general
//!   charts, Euclidean on isotropic charts).
//!
//! On general charts the graded `kappa_g^2` equals `(X . gamma)^2`, which is
//! the derivative of the constraint along the curve squared — it vanishes on
//! every exactly unit-speed curve. The ambient curvature splits there as
//! `kappa^2 = |tangential part|^2 + kappa_n^2`, so the Pythagoras check is
//! carried by the Euclidean square of the tangential acceleration
//! ([`DarbouxData::kappa_g_frame_sq`]), which coincides with `kappa_g^2` on
//! isotropic charts and complements `kappa_n` on unit-speed curves in
//! general position.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::galilean::GVector;
use crate::math;
use crate::ode;
use crate::surface::{pair, ChartRegime, SurfaceChart, SurfacePoint};
use crate::tol;

/// Parameter-path value and derivatives at one `x`.
#[derive(Clone, Copy, Debug)]
pub struct CurveUJet {
    pub x: f64,
    pub u: [f64; 2],
    pub du: [f64; 2],
    pub ddu: [f64; 2],
}

type UJetFn = dyn Fn(f64) -> CurveUJet + Send + Sync;

#[derive(Clone)]
enum USource {
    Jets(Arc<UJetFn>),
    /// Cubic Hermite interpolation through `(x, u, du)` nodes.
    Sampled { xs: Vec<f64>, us: Vec<[f64; 2]>, dus: Vec<[f64; 2]> },
}

/// A curve in the parameter plane of a chart, on `[0, len]`.
#[derive(Clone)]
pub struct CurveOnSurface {
    source: USource,
    pub len: f64,
}

impl CurveOnSurface {
    pub fn from_jets<F>(len: f64, f: F) -> Self
    where
        F: Fn(f64) -> CurveUJet + Send + Sync + 'static,
    {
        CurveOnSurface { source: USource::Jets(Arc::new(f)), len }
    }

    /// Build from ordered samples of positions and velocities; the curve is
    /// the piecewise cubic Hermite interpolant.
    pub fn from_samples(xs: Vec<f64>, us: Vec<[f64; 2]>, dus: Vec<[f64; 2]>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != us.len() || xs.len() != dus.len() {
            return Err(Error::DegenerateJet);
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::DegenerateJet);
            }
        }
        let len = xs[xs.len() - 1] - xs[0];
        Ok(CurveOnSurface { source: USource::Sampled { xs, us, dus }, len })
    }

    /// Interpolation nodes when the curve is sample-based.
    pub fn nodes(&self) -> Option<(&[f64], &[[f64; 2]], &[[f64; 2]])> {
        match &self.source {
            USource::Sampled { xs, us, dus } => Some((xs, us, dus)),
            USource::Jets(_) => None,
        }
    }

    pub fn jet(&self, x: f64) -> CurveUJet {
        match &self.source {
            USource::Jets(f) => f(x),
            USource::Sampled { xs, us, dus } => {
                let n = xs.len();
                let seg = xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
                let h = xs[seg + 1] - xs[seg];
                let t = (x - xs[seg]) / h;
                let (t2, t3) = (t * t, t * t * t);
                let mut u = [0.0; 2];
                let mut du = [0.0; 2];
                let mut ddu = [0.0; 2];
                for k in 0..2 {
                    let (p0, p1) = (us[seg][k], us[seg + 1][k]);
                    let (m0, m1) = (dus[seg][k] * h, dus[seg + 1][k] * h);
                    u[k] = (2.0 * t3 - 3.0 * t2 + 1.0) * p0
                        + (t3 - 2.0 * t2 + t) * m0
                        + (-2.0 * t3 + 3.0 * t2) * p1
                        + (t3 - t2) * m1;
                    du[k] = ((6.0 * t2 - 6.0 * t) * p0
                        + (3.0 * t2 - 4.0 * t + 1.0) * m0
                        + (-6.0 * t2 + 6.0 * t) * p1
                        + (3.0 * t2 - 2.0 * t) * m1)
                        / h;
                    ddu[k] = ((12.0 * t - 6.0) * p0
                        + (6.0 * t - 4.0) * m0
                        + (-12.0 * t + 6.0) * p1
                        + (6.0 * t - 2.0) * m1)
                        / (h * h);
                }
                CurveUJet { x, u, du, ddu }
            }
        }
    }
}

/// Darboux invariants of a surface curve at one parameter value.
#[derive(Clone, Debug)]
pub struct DarbouxData {
    pub x: f64,
    pub u: [f64; 2],
    pub du: [f64; 2],
    /// Galilean speed of the tangent (should be 1 on constrained curves).
    pub speed: f64,
    pub kappa_n: f64,
    pub tau_g: f64,
    /// Squared geodesic curvature by the graded first form.
    pub kappa_g_sq: f64,
    /// Euclidean square of the tangential acceleration
    /// `psi_1 gamma_1 + psi_2 gamma_2`; complements `kappa_n^2` to the
    /// ambient `kappa^2` on unit-speed curves.
    pub kappa_g_frame_sq: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Unit tangent in ambient space.
    pub t: GVector,
    /// Side tangential vector (general regime only).
    pub q: Option<GVector>,
    /// Unit normal (general regime only).
    pub n: Option<GVector>,
}

/// Geodesic defect `gamma_i = ddu_i + sum Gamma^i_kl du_k du_l`.
pub(crate) fn geodesic_defect(p: &SurfacePoint, du: [f64; 2], ddu: [f64; 2]) -> [f64; 2] {
    let mut gamma = [0.0; 2];
    for k in 0..2 {
        let mut s = ddu[k];
        for i in 0..2 {
            for j in 0..2 {
                s += p.gamma[k][pair(i, j)] * du[i] * du[j];
            }
        }
        gamma[k] = s;
    }
    gamma
}

pub(crate) fn invariants_at_point(p: &SurfacePoint, jet: &CurveUJet) -> DarbouxData {
    let du = jet.du;
    let kappa_n = p.l[0] * du[0] * du[0] + 2.0 * p.l[1] * du[0] * du[1] + p.l[2] * du[1] * du[1];
    let mut tau_g = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            tau_g += p.g_upper[i] * p.l[pair(i, j)] * du[j];
        }
    }
    let gamma = geodesic_defect(p, du, jet.ddu);
    // Assemble both squares from the tangential acceleration vector rather
    // than the quadratic forms: identical in exact arithmetic (the graded
    // first form factors through the chart jets) but free of the sign-losing
    // cancellation the term-by-term sums suffer near geodesics.
    let a_tan = p.jets.psi1 * gamma[0] + p.jets.psi2 * gamma[1];
    let kappa_g_sq = match p.regime {
        ChartRegime::General => a_tan.x * a_tan.x,
        ChartRegime::Isotropic => a_tan.iso_dot(&a_tan),
    };
    let kappa_g_frame_sq = a_tan.iso_dot(&a_tan);
    DarbouxData {
        x: jet.x,
        u: jet.u,
        du,
        speed: p.speed(du),
        kappa_n,
        tau_g,
        kappa_g_sq,
        kappa_g_frame_sq,
        gamma1: gamma[0],
        gamma2: gamma[1],
        t: p.tangent(du),
        q: p.q,
        n: p.n,
    }
}

/// Darboux invariants at `x`; the curve must satisfy the unit-speed
/// constraint there.
pub fn darboux_invariants(s: &SurfaceChart, c: &CurveOnSurface, x: f64) -> Result<DarbouxData> {
    let jet = c.jet(x);
    let p = s.point(jet.u[0], jet.u[1])?;
    let speed = p.speed(jet.du);
    if math::abs(speed - 1.0) > tol::TAU_CON {
        return Err(Error::ConstraintViolated { speed, at: x });
    }
    Ok(invariants_at_point(&p, &jet))
}

/// Residual of the curvature decomposition
/// `|kappa^2 - (kappa_g^2 + kappa_n^2)|`, with the ambient curvature taken
/// from the chart composition and the geodesic square from the tangential
/// acceleration.
pub fn pythagoras_residual(s: &SurfaceChart, c: &CurveOnSurface, x: f64) -> Result<f64> {
    let jet = c.jet(x);
    let p = s.point(jet.u[0], jet.u[1])?;
    let speed = p.speed(jet.du);
    if math::abs(speed - 1.0) > tol::TAU_CON {
        return Err(Error::ConstraintViolated { speed, at: x });
    }
    let d = invariants_at_point(&p, &jet);
    // Ambient second derivative of x -> psi(u1(x), u2(x)).
    let (du, ddu) = (jet.du, jet.ddu);
    let accel = p.jets.psi11 * (du[0] * du[0])
        + p.jets.psi12 * (2.0 * du[0] * du[1])
        + p.jets.psi22 * (du[1] * du[1])
        + p.jets.psi1 * ddu[0]
        + p.jets.psi2 * ddu[1];
    // On constrained curves the acceleration is isotropic; its Euclidean
    // length is the ambient curvature.
    let kappa_sq = accel.iso_dot(&accel);
    Ok(math::abs(kappa_sq - (d.kappa_g_frame_sq + d.kappa_n * d.kappa_n)))
}

/// Right-hand side of the first-order geodesic system for the state
/// `(u1, u2, du1, du2)`.
pub fn geodesic_ode(s: &SurfaceChart, state: &[f64; 4]) -> Result<[f64; 4]> {
    let p = s.point(state[0], state[1])?;
    let du = [state[2], state[3]];
    let gamma = geodesic_defect(&p, du, [0.0, 0.0]);
    Ok([du[0], du[1], -gamma[0], -gamma[1]])
}

/// Result of a geodesic integration.
pub struct GeodesicRun {
    pub curve: CurveOnSurface,
    /// Worst deviation of the Galilean speed from its initial value.
    pub max_speed_drift: f64,
    /// Step-halving (Richardson) estimate of the endpoint error.
    pub richardson_error: f64,
}

/// Integrate the geodesic equations from `init = (u1, u2, du1, du2)` over
/// `[0, len]` with RK4 steps of size at most `h`.
pub fn integrate_geodesic(
    s: &SurfaceChart,
    init: [f64; 4],
    len: f64,
    h: f64,
) -> Result<GeodesicRun> {
    let p0 = s.point(init[0], init[1])?;
    let speed0 = p0.speed([init[2], init[3]]);
    if math::abs(speed0 - 1.0) > tol::TAU_CON {
        return Err(Error::ConstraintViolated { speed: speed0, at: 0.0 });
    }
    if len == 0.0 {
        let curve = CurveOnSurface::from_samples(
            alloc::vec![0.0, 1e-9],
            alloc::vec![[init[0], init[1]]; 2],
            alloc::vec![[init[2], init[3]]; 2],
        )?;
        return Ok(GeodesicRun { curve, max_speed_drift: 0.0, richardson_error: 0.0 });
    }

    let run = |n_steps: usize, record: bool| -> Result<(Vec<f64>, Vec<[f64; 2]>, Vec<[f64; 2]>, f64, [f64; 4])> {
        let mut xs = Vec::new();
        let mut us = Vec::new();
        let mut dus = Vec::new();
        let mut drift = 0.0f64;
        let mut f = |_x: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            let rhs = geodesic_ode(s, &[y[0], y[1], y[2], y[3]])?;
            dy.copy_from_slice(&rhs);
            Ok(())
        };
        let yf = ode::rk4_integrate(&mut f, 0.0, len, &init, n_steps, |_, x, y| {
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::StepFailure);
            }
            if !s.contains(y[0], y[1]) {
                return Err(Error::LeftDomain { u: [y[0], y[1]] });
            }
            let p = s.point(y[0], y[1])?;
            drift = drift.max(math::abs(p.speed([y[2], y[3]]) - speed0));
            if record {
                xs.push(x);
                us.push([y[0], y[1]]);
                dus.push([y[2], y[3]]);
            }
            Ok(())
        })?;
        Ok((xs, us, dus, drift, [yf[0], yf[1], yf[2], yf[3]]))
    };

    let n_steps = (math::ceil(len / h) as usize).max(1);
    let (xs, us, dus, drift, y_end) = run(n_steps, true)?;
    let (_, _, _, _, y_half) = run(2 * n_steps, false)?;
    let richardson = (0..4).map(|i| math::abs(y_end[i] - y_half[i])).fold(0.0f64, f64::max);
    let curve = CurveOnSurface::from_samples(xs, us, dus)?;
    Ok(GeodesicRun { curve, max_speed_drift: drift, richardson_error: richardson })
}

/// Geodesic classification of a curve: largest graded `kappa_g^2` over a
/// uniform sample grid, compared against `tol^2`.
pub fn max_kappa_g_sq(s: &SurfaceChart, c: &CurveOnSurface, n_samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..=n_samples {
        let x = c.len * k as f64 / n_samples as f64;
        let jet = c.jet(x);
        let p = s.point(jet.u[0], jet.u[1])?;
        let d = invariants_at_point(&p, &jet);
        worst = worst.max(math::abs(d.kappa_g_sq));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::ChartJets;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cylinder(r: f64) -> SurfaceChart {
        SurfaceChart::from_jets([[-100.0, 100.0], [-100.0, 100.0]], move |u, v| {
            let (s, c) = (math::sin(v / r), math::cos(v / r));
            ChartJets {
                psi: GVector::new(u, r * c, r * s),
                psi1: GVector::new(1.0, 0.0, 0.0),
                psi2: GVector::new(0.0, -s, c),
                psi11: GVector::ZERO,
                psi12: GVector::ZERO,
                psi22: GVector::new(0.0, -c / r, -s / r),
            }
        })
    }

    fn flat_plane() -> SurfaceChart {
        SurfaceChart::from_jets([[-100.0, 100.0], [-100.0, 100.0]], |u1, u2| ChartJets {
            psi: GVector::new(0.0, u1, u2),
            psi1: GVector::new(0.0, 1.0, 0.0),
            psi2: GVector::new(0.0, 0.0, 1.0),
            psi11: GVector::ZERO,
            psi12: GVector::ZERO,
            psi22: GVector::ZERO,
        })
    }

    #[test]
    fn generator_on_cylinder_has_trivial_invariants() {
        let s = cylinder(2.0);
        let c = CurveOnSurface::from_jets(1.0, |x| CurveUJet {
            x,
            u: [x, 0.7],
            du: [1.0, 0.0],
            ddu: [0.0, 0.0],
        });
        let d = darboux_invariants(&s, &c, 0.4).unwrap();
        assert_eq!(d.kappa_n, 0.0);
        assert_eq!(d.tau_g, 0.0);
        assert_eq!(d.kappa_g_sq, 0.0);
        assert_eq!(d.t, GVector::new(1.0, 0.0, 0.0));
        assert_eq!(pythagoras_residual(&s, &c, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn circle_on_cylinder_matches_closed_forms() {
        // u = const, v = x: isotropic tangent, kappa = kappa_n = 1/R.
        let r = 2.0;
        let s = cylinder(r);
        let c = CurveOnSurface::from_jets(1.0, |x| CurveUJet {
            x,
            u: [0.3, x],
            du: [0.0, 1.0],
            ddu: [0.0, 0.0],
        });
        let d = darboux_invariants(&s, &c, 0.2).unwrap();
        assert_relative_eq!(d.kappa_n, 1.0 / r);
        assert_eq!(d.kappa_g_sq, 0.0);
        assert_relative_eq!(d.speed, 1.0);
        assert_abs_diff_eq!(pythagoras_residual(&s, &c, 0.2).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn constrained_wiggle_on_cylinder() {
        // u = x, v arbitrary smooth: kappa_n = v'^2/R, graded kappa_g = |u''| = 0,
        // tangential-acceleration square = v''^2.
        let r = 1.5;
        let s = cylinder(r);
        let c = CurveOnSurface::from_jets(1.0, |x| CurveUJet {
            x,
            u: [x, 0.4 * math::sin(x)],
            du: [1.0, 0.4 * math::cos(x)],
            ddu: [0.0, -0.4 * math::sin(x)],
        });
        for &x in &[0.1, 0.5, 0.9] {
            let d = darboux_invariants(&s, &c, x).unwrap();
            let vdot = 0.4 * math::cos(x);
            let vddot = -0.4 * math::sin(x);
            assert_relative_eq!(d.kappa_n, vdot * vdot / r, epsilon = 1e-12);
            assert_abs_diff_eq!(d.kappa_g_sq, 0.0, epsilon = 1e-15);
            assert_relative_eq!(d.kappa_g_frame_sq, vddot * vddot, epsilon = 1e-12);
            assert_abs_diff_eq!(pythagoras_residual(&s, &c, x).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn geodesic_torsion_uses_the_reciprocal_vectors() {
        // Circle direction on the cylinder: tau_g = g^2 L_22 dv = -(1/R).
        let r = 2.0;
        let s = cylinder(r);
        let c = CurveOnSurface::from_jets(1.0, |x| CurveUJet {
            x,
            u: [0.0, x],
            du: [0.0, 1.0],
            ddu: [0.0, 0.0],
        });
        let d = darboux_invariants(&s, &c, 0.5).unwrap();
        assert_relative_eq!(d.tau_g, -1.0 / r);
    }

    #[test]
    fn unit_speed_curve_on_the_plane_is_euclidean() {
        let s = flat_plane();
        // Turning-angle parametrization: exactly unit Euclidean speed.
        let theta = |x: f64| 0.3 * math::sin(x);
        let c = CurveOnSurface::from_jets(1.0, move |x| {
            // u(x) = integral of (cos theta, sin theta); position values are
            // only needed up to an additive constant for invariants, so a
            // quick series is fine here: invariants use du, ddu and u only
            // through the (flat) chart.
            let th = theta(x);
            let dth = 0.3 * math::cos(x);
            CurveUJet {
                x,
                u: [x, x * x],
                du: [math::cos(th), math::sin(th)],
                ddu: [-math::sin(th) * dth, math::cos(th) * dth],
            }
        });
        for &x in &[0.0, 0.3, 0.8] {
            let d = darboux_invariants(&s, &c, x).unwrap();
            let dth = 0.3 * math::cos(x);
            assert_eq!(d.kappa_n, 0.0);
            assert_eq!(d.tau_g, 0.0);
            assert_relative_eq!(d.kappa_g_sq, dth * dth, epsilon = 1e-12);
            assert_relative_eq!(d.kappa_g_sq, d.kappa_g_frame_sq);
            assert_abs_diff_eq!(pythagoras_residual(&s, &c, x).unwrap(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn constraint_violation_is_reported() {
        let s = cylinder(2.0);
        let c = CurveOnSurface::from_jets(1.0, |x| CurveUJet {
            x,
            u: [2.0 * x, 0.0],
            du: [2.0, 0.0],
            ddu: [0.0, 0.0],
        });
        assert!(matches!(
            darboux_invariants(&s, &c, 0.1),
            Err(Error::ConstraintViolated { speed, .. }) if speed == 2.0
        ));
    }

    #[test]
    fn plane_geodesics_are_straight_lines() {
        let s = flat_plane();
        let (a, c) = (0.6, 0.8);
        let run = integrate_geodesic(&s, [0.1, -0.2, a, c], 1.0, 1e-3).unwrap();
        let end = run.curve.jet(1.0);
        assert_abs_diff_eq!(end.u[0], 0.1 + a, epsilon = 1e-10);
        assert_abs_diff_eq!(end.u[1], -0.2 + c, epsilon = 1e-10);
        assert!(run.max_speed_drift < 1e-12);
        assert!(run.richardson_error < 1e-12);
        assert!(max_kappa_g_sq(&s, &run.curve, 50).unwrap() < 1e-10);
    }

    #[test]
    fn cylinder_geodesics_run_along_generators() {
        let s = cylinder(2.0);
        let run = integrate_geodesic(&s, [0.0, 0.5, 1.0, 0.3], 1.0, 1e-3).unwrap();
        let end = run.curve.jet(1.0);
        // Flat connection: both parameters evolve linearly.
        assert_abs_diff_eq!(end.u[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(end.u[1], 0.5 + 0.3, epsilon = 1e-12);
        assert!(run.max_speed_drift < 1e-12);
    }

    #[test]
    fn polar_geodesics_stay_straight_in_the_plane() {
        // Geodesics of the polar chart of the isotropic plane must be
        // straight lines in Cartesian coordinates.
        let s = SurfaceChart::from_jets([[0.2, 5.0], [-10.0, 10.0]], |r, t| {
            let (st, ct) = (math::sin(t), math::cos(t));
            ChartJets {
                psi: GVector::new(0.0, r * ct, r * st),
                psi1: GVector::new(0.0, ct, st),
                psi2: GVector::new(0.0, -r * st, r * ct),
                psi11: GVector::ZERO,
                psi12: GVector::new(0.0, -st, ct),
                psi22: GVector::new(0.0, -r * ct, -r * st),
            }
        });
        // Start at (r, t) = (1, 0) moving with unit speed at 45 degrees:
        // dr = cos(pi/4), dt = sin(pi/4)/r.
        let v = core::f64::consts::FRAC_1_SQRT_2;
        let run = integrate_geodesic(&s, [1.0, 0.0, v, v], 1.0, 1e-3).unwrap();
        assert!(run.max_speed_drift < 1e-10);
        // Cartesian straight line from (1, 0) with direction (v, v).
        for &x in &[0.25, 0.5, 1.0] {
            let j = run.curve.jet(x);
            let (y, z) = (j.u[0] * math::cos(j.u[1]), j.u[0] * math::sin(j.u[1]));
            assert_abs_diff_eq!(y, 1.0 + v * x, epsilon = 1e-9);
            assert_abs_diff_eq!(z, v * x, epsilon = 1e-9);
        }
        assert!(max_kappa_g_sq(&s, &run.curve, 50).unwrap() < 1e-10);
    }

    #[test]
    fn leaving_the_domain_is_an_error() {
        let s = SurfaceChart::from_jets([[-0.5, 0.5], [-10.0, 10.0]], |u1, u2| ChartJets {
            psi: GVector::new(0.0, u1, u2),
            psi1: GVector::new(0.0, 1.0, 0.0),
            psi2: GVector::new(0.0, 0.0, 1.0),
            psi11: GVector::ZERO,
            psi12: GVector::ZERO,
            psi22: GVector::ZERO,
        });
        assert!(matches!(
            integrate_geodesic(&s, [0.0, 0.0, 1.0, 0.0], 1.0, 1e-2),
            Err(Error::LeftDomain { .. })
        ));
    }

    #[test]
    fn zero_length_integration_returns_the_start() {
        let s = flat_plane();
        let run = integrate_geodesic(&s, [0.3, 0.4, 1.0, 0.0], 0.0, 1e-3).unwrap();
        let j = run.curve.jet(0.0);
        assert_eq!(j.u, [0.3, 0.4]);
    }

    #[test]
    fn hermite_sampling_reproduces_smooth_curves() {
        let f = |x: f64| [math::sin(x), math::cos(2.0 * x)];
        let df = |x: f64| [math::cos(x), -2.0 * math::sin(2.0 * x)];
        let ddf = |x: f64| [-math::sin(x), -4.0 * math::cos(2.0 * x)];
        let n = 100;
        let xs: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let us: Vec<[f64; 2]> = xs.iter().map(|&x| f(x)).collect();
        let dus: Vec<[f64; 2]> = xs.iter().map(|&x| df(x)).collect();
        let c = CurveOnSurface::from_samples(xs, us, dus).unwrap();
        for &x in &[0.105, 0.5, 0.995] {
            let j = c.jet(x);
            for k in 0..2 {
                assert_abs_diff_eq!(j.u[k], f(x)[k], epsilon = 1e-8);
                assert_abs_diff_eq!(j.du[k], df(x)[k], epsilon = 1e-5);
                assert_abs_diff_eq!(j.ddu[k], ddf(x)[k], epsilon = 1e-2);
            }
        }
    }
}
