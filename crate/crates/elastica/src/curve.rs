//! Curves in Galilean 3-space: jets, Frenet apparatus, curvature, torsion.
//!
//! An *admissible* curve is parametrized by its absolute coordinate,
//! `alpha(x) = (x, y(x), z(x))`, which is automatically the arc-length
//! parametrization. The Frenet data of such curves are
//!
//! ```text
//! kappa = sqrt(y''^2 + z''^2)         tau = det(a', a'', a''') / kappa^2
//! T = a'      N = a''/kappa           B = (0, -z'', y'')/kappa
//! ```
//!
//! For a curve in a general regular parametrization the invariants come from
//! the quotient formulas built on the Galilean norm and cross product.

use alloc::sync::Arc;

use crate::error::{Error, Result};
use crate::galilean::{GVector, GalileanIsometry};
use crate::linalg;
use crate::math;
use crate::tol;

/// Value and first three derivatives of a curve at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct CurveJet {
    /// Parameter at which the jet was taken.
    pub x: f64,
    pub point: GVector,
    pub d1: GVector,
    pub d2: GVector,
    pub d3: GVector,
}

impl CurveJet {
    pub const fn new(x: f64, point: GVector, d1: GVector, d2: GVector, d3: GVector) -> Self {
        CurveJet { x, point, d1, d2, d3 }
    }
}

/// Central-difference step sizes for position-only curve evaluators, one per
/// derivative order. The defaults balance truncation against cancellation
/// for coordinates of order one.
#[derive(Clone, Copy, Debug)]
pub struct FdSteps {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps { h1: tol::FD_H1, h2: tol::FD_H2, h3: tol::FD_H3 }
    }
}

impl FdSteps {
    /// Uniform step for all three orders (used by convergence diagnostics).
    pub fn uniform(h: f64) -> Self {
        FdSteps { h1: h, h2: h, h3: h }
    }
}

type JetFn = dyn Fn(f64) -> CurveJet + Send + Sync;
type PosFn = dyn Fn(f64) -> GVector + Send + Sync;

#[derive(Clone)]
enum Source {
    Jets(Arc<JetFn>),
    Positions { f: Arc<PosFn>, steps: FdSteps },
}

/// A curve given either by analytic jets or by positions with a
/// finite-difference jet fallback (second-order central stencils).
#[derive(Clone)]
pub struct ParametricCurve {
    source: Source,
    /// Parameter interval the curve is meant to be evaluated on.
    pub domain: [f64; 2],
}

impl ParametricCurve {
    pub fn from_jets<F>(domain: [f64; 2], f: F) -> Self
    where
        F: Fn(f64) -> CurveJet + Send + Sync + 'static,
    {
        ParametricCurve { source: Source::Jets(Arc::new(f)), domain }
    }

    pub fn from_positions<F>(domain: [f64; 2], f: F) -> Self
    where
        F: Fn(f64) -> GVector + Send + Sync + 'static,
    {
        Self::from_positions_with_steps(domain, f, FdSteps::default())
    }

    pub fn from_positions_with_steps<F>(domain: [f64; 2], f: F, steps: FdSteps) -> Self
    where
        F: Fn(f64) -> GVector + Send + Sync + 'static,
    {
        ParametricCurve { source: Source::Positions { f: Arc::new(f), steps }, domain }
    }

    /// Evaluate the 3-jet at `x`.
    pub fn jet(&self, x: f64) -> CurveJet {
        match &self.source {
            Source::Jets(f) => f(x),
            Source::Positions { f, steps } => {
                let p = f(x);
                let (h1, h2, h3) = (steps.h1, steps.h2, steps.h3);
                let d1 = (f(x + h1) - f(x - h1)) / (2.0 * h1);
                let d2 = (f(x + h2) - 2.0 * p + f(x - h2)) / (h2 * h2);
                let d3 = (f(x + 2.0 * h3) - 2.0 * f(x + h3) + 2.0 * f(x - h3)
                    - f(x - 2.0 * h3))
                    / (2.0 * h3 * h3 * h3);
                CurveJet::new(x, p, d1, d2, d3)
            }
        }
    }

    /// The image curve under a Galilean isometry (jets transform by the
    /// linear part, positions by the full affine map).
    pub fn transform(&self, m: GalileanIsometry) -> ParametricCurve {
        let domain = self.domain;
        match &self.source {
            Source::Jets(f) => {
                let f = Arc::clone(f);
                ParametricCurve::from_jets(domain, move |x| {
                    let j = f(x);
                    CurveJet::new(
                        x,
                        m.apply(&j.point),
                        m.linear(&j.d1),
                        m.linear(&j.d2),
                        m.linear(&j.d3),
                    )
                })
            }
            Source::Positions { f, steps } => {
                let f = Arc::clone(f);
                let steps = *steps;
                ParametricCurve::from_positions_with_steps(domain, move |x| m.apply(&f(x)), steps)
            }
        }
    }
}

/// Frenet data of an admissible curve at one point.
#[derive(Clone, Copy, Debug)]
pub struct FrenetFrame {
    pub t: GVector,
    pub n: GVector,
    pub b: GVector,
    pub kappa: f64,
    pub tau: f64,
}

fn check_admissible(jet: &CurveJet) -> Result<()> {
    if math::abs(jet.d1.x - 1.0) > tol::TAU_ADM {
        return Err(Error::NotAdmissible { dx: jet.d1.x });
    }
    Ok(())
}

/// Curvature of an admissible (arc-length) curve: `sqrt(y''^2 + z''^2)`.
///
/// The second derivative is isotropic by construction, so only its `(y, z)`
/// part enters — any finite-difference residue in the x-component is ignored
/// rather than being allowed to flip the norm onto the wrong branch.
pub fn curvature_arclength(c: &ParametricCurve, x: f64) -> Result<f64> {
    let jet = c.jet(x);
    check_admissible(&jet)?;
    Ok(jet.d2.iso_norm())
}

/// Torsion of an admissible curve: `det(a', a'', a''') / kappa^2`, which for
/// tangents of the form `(1, y', z')` collapses to
/// `(y'' z''' - z'' y''') / kappa^2`.
pub fn torsion_arclength(c: &ParametricCurve, x: f64) -> Result<f64> {
    let jet = c.jet(x);
    check_admissible(&jet)?;
    let kappa_sq = jet.d2.iso_dot(&jet.d2);
    if kappa_sq <= tol::KAPPA_MIN * tol::KAPPA_MIN {
        return Err(Error::CurvatureVanishes { kappa: math::sqrt(kappa_sq) });
    }
    Ok((jet.d2.y * jet.d3.z - jet.d2.z * jet.d3.y) / kappa_sq)
}

/// Full Frenet frame of an admissible curve.
pub fn frenet_frame(c: &ParametricCurve, x: f64) -> Result<FrenetFrame> {
    let jet = c.jet(x);
    check_admissible(&jet)?;
    let kappa = jet.d2.iso_norm();
    if kappa <= tol::KAPPA_MIN {
        return Err(Error::CurvatureVanishes { kappa });
    }
    let tau = (jet.d2.y * jet.d3.z - jet.d2.z * jet.d3.y) / (kappa * kappa);
    Ok(FrenetFrame {
        t: GVector::new(1.0, jet.d1.y, jet.d1.z),
        n: GVector::new(0.0, jet.d2.y / kappa, jet.d2.z / kappa),
        b: GVector::new(0.0, -jet.d2.z / kappa, jet.d2.y / kappa),
        kappa,
        tau,
    })
}

/// Curvature and torsion of a regular curve in an arbitrary parametrization:
///
/// ```text
/// kappa = |g' x g''| / |g'|^3        tau = det(g', g'', g''') / |g' x g''|^2
/// ```
///
/// A vanishing cross product (straight segments) yields `(kappa, 0)`.
pub fn curvature_torsion_general(c: &ParametricCurve, x: f64) -> Result<(f64, f64)> {
    let jet = c.jet(x);
    // Tolerant norm branch: computed tangents carry finite-difference noise
    // in the x-component, so the exact-zero test of the Galilean norm is
    // replaced by a threshold.
    let v = if math::abs(jet.d1.x) > tol::TAU_ISO {
        math::abs(jet.d1.x)
    } else {
        jet.d1.iso_norm()
    };
    if v <= tol::KAPPA_MIN {
        return Err(Error::DegenerateJet);
    }
    let cross = jet.d1.cross(&jet.d2);
    let c_norm = cross.iso_norm();
    let kappa = c_norm / (v * v * v);
    if kappa <= tol::KAPPA_MIN {
        return Ok((kappa, 0.0));
    }
    let det = linalg::det3(&[
        [jet.d1.x, jet.d1.y, jet.d1.z],
        [jet.d2.x, jet.d2.y, jet.d2.z],
        [jet.d3.x, jet.d3.y, jet.d3.z],
    ]);
    Ok((kappa, det / (c_norm * c_norm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    /// alpha(x) = (x, x^2, x^3) with analytic jets.
    fn twisted_cubic() -> ParametricCurve {
        ParametricCurve::from_jets([-2.0, 2.0], |x| {
            CurveJet::new(
                x,
                GVector::new(x, x * x, x * x * x),
                GVector::new(1.0, 2.0 * x, 3.0 * x * x),
                GVector::new(0.0, 2.0, 6.0 * x),
                GVector::new(0.0, 0.0, 6.0),
            )
        })
    }

    #[test]
    fn curvature_of_twisted_cubic() {
        let c = twisted_cubic();
        assert_relative_eq!(curvature_arclength(&c, 0.0).unwrap(), 2.0);
        assert_relative_eq!(curvature_arclength(&c, 1.0).unwrap(), 40.0f64.sqrt());
    }

    #[test]
    fn torsion_of_twisted_cubic() {
        let c = twisted_cubic();
        assert_relative_eq!(torsion_arclength(&c, 0.0).unwrap(), 3.0);
        assert_relative_eq!(torsion_arclength(&c, 1.0).unwrap(), 12.0 / 40.0);
    }

    #[test]
    fn straight_line_has_zero_curvature_and_no_frame() {
        let c = ParametricCurve::from_jets([0.0, 1.0], |x| {
            CurveJet::new(
                x,
                GVector::new(x, 2.0 * x, -x),
                GVector::new(1.0, 2.0, -1.0),
                GVector::ZERO,
                GVector::ZERO,
            )
        });
        assert_eq!(curvature_arclength(&c, 0.5).unwrap(), 0.0);
        assert!(matches!(torsion_arclength(&c, 0.5), Err(Error::CurvatureVanishes { .. })));
        assert!(matches!(frenet_frame(&c, 0.5), Err(Error::CurvatureVanishes { .. })));
    }

    #[test]
    fn planar_curve_has_zero_torsion() {
        let c = ParametricCurve::from_jets([0.0, 1.0], |x| {
            CurveJet::new(
                x,
                GVector::new(x, math::sin(x), 0.0),
                GVector::new(1.0, math::cos(x), 0.0),
                GVector::new(0.0, -math::sin(x), 0.0),
                GVector::new(0.0, -math::cos(x), 0.0),
            )
        });
        assert_abs_diff_eq!(torsion_arclength(&c, 0.7).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn frame_of_normal_parabola() {
        let c = ParametricCurve::from_jets([-1.0, 1.0], |x| {
            CurveJet::new(
                x,
                GVector::new(x, 0.5 * x * x, 0.0),
                GVector::new(1.0, x, 0.0),
                GVector::new(0.0, 1.0, 0.0),
                GVector::ZERO,
            )
        });
        let f = frenet_frame(&c, 0.0).unwrap();
        assert_eq!(f.t, GVector::new(1.0, 0.0, 0.0));
        assert_eq!(f.n, GVector::new(0.0, 1.0, 0.0));
        assert_eq!(f.b, GVector::new(0.0, 0.0, 1.0));
        assert_relative_eq!(f.kappa, 1.0);
    }

    #[test]
    fn frame_is_orthonormal_in_the_galilean_sense() {
        let c = twisted_cubic();
        let f = frenet_frame(&c, 0.4).unwrap();
        assert_eq!(f.t.x, 1.0);
        assert!(f.n.is_isotropic() && f.b.is_isotropic());
        assert_relative_eq!(f.n.dot(&f.n), 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.b.dot(&f.b), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.n.dot(&f.b), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn frame_satisfies_the_frenet_equations() {
        // T' = kappa N, N' = tau B, B' = -tau N, via central differences of
        // the analytic frame.
        let c = twisted_cubic();
        let x0 = 0.3;
        let h = 1e-5;
        let fp = frenet_frame(&c, x0 + h).unwrap();
        let fm = frenet_frame(&c, x0 - h).unwrap();
        let f0 = frenet_frame(&c, x0).unwrap();
        let dt = (fp.t - fm.t) / (2.0 * h);
        let dn = (fp.n - fm.n) / (2.0 * h);
        let db = (fp.b - fm.b) / (2.0 * h);
        let r1 = dt - f0.kappa * f0.n;
        let r2 = dn - f0.tau * f0.b;
        let r3 = db + f0.tau * f0.n;
        for r in [r1, r2, r3] {
            assert!(r.iso_norm() + math::abs(r.x) < 1e-8, "residual {r:?}");
        }
    }

    #[test]
    fn general_formulas_agree_on_arclength_curves() {
        let c = twisted_cubic();
        for &x in &[-0.9, 0.0, 0.37, 1.0] {
            let (k, t) = curvature_torsion_general(&c, x).unwrap();
            assert_relative_eq!(k, curvature_arclength(&c, x).unwrap(), epsilon = 1e-10);
            assert_relative_eq!(t, torsion_arclength(&c, x).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn general_formulas_on_doubled_parameter() {
        // gamma(t) = (2t, 4t^2, 8t^3) traces the twisted cubic with x = 2t.
        let g = ParametricCurve::from_jets([-1.0, 1.0], |t| {
            CurveJet::new(
                t,
                GVector::new(2.0 * t, 4.0 * t * t, 8.0 * t * t * t),
                GVector::new(2.0, 8.0 * t, 24.0 * t * t),
                GVector::new(0.0, 8.0, 48.0 * t),
                GVector::new(0.0, 0.0, 48.0),
            )
        });
        let c = twisted_cubic();
        for &t in &[-0.4, 0.1, 0.5] {
            let (kg, tg) = curvature_torsion_general(&g, t).unwrap();
            let (kc, tc) = curvature_torsion_general(&c, 2.0 * t).unwrap();
            assert_relative_eq!(kg, kc, epsilon = 1e-10);
            assert_relative_eq!(tg, tc, epsilon = 1e-10);
        }
    }

    #[test]
    fn straight_line_general_curvature_is_zero() {
        let g = ParametricCurve::from_jets([0.0, 1.0], |t| {
            CurveJet::new(
                t,
                GVector::new(t, t, t),
                GVector::new(1.0, 1.0, 1.0),
                GVector::ZERO,
                GVector::ZERO,
            )
        });
        let (k, t) = curvature_torsion_general(&g, 0.5).unwrap();
        assert_eq!(k, 0.0);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn non_admissible_curve_is_rejected() {
        let g = ParametricCurve::from_jets([0.0, 1.0], |t| {
            CurveJet::new(
                t,
                GVector::new(2.0 * t, t, 0.0),
                GVector::new(2.0, 1.0, 0.0),
                GVector::ZERO,
                GVector::ZERO,
            )
        });
        assert!(matches!(
            curvature_arclength(&g, 0.2),
            Err(Error::NotAdmissible { dx }) if dx == 2.0
        ));
    }

    #[test]
    fn fd_jets_track_analytic_jets() {
        let pos = |x: f64| GVector::new(x, math::sin(x), math::cos(2.0 * x));
        let c = ParametricCurve::from_positions([-1.0, 1.0], pos);
        let x = 0.35;
        let j = c.jet(x);
        assert_abs_diff_eq!(j.d1.y, math::cos(x), epsilon = 1e-9);
        assert_abs_diff_eq!(j.d1.z, -2.0 * math::sin(2.0 * x), epsilon = 1e-9);
        assert_abs_diff_eq!(j.d2.y, -math::sin(x), epsilon = 1e-6);
        assert_abs_diff_eq!(j.d2.z, -4.0 * math::cos(2.0 * x), epsilon = 1e-6);
        assert_abs_diff_eq!(j.d3.y, -math::cos(x), epsilon = 1e-5);
        assert_abs_diff_eq!(j.d3.z, 8.0 * math::sin(2.0 * x), epsilon = 1e-5);

        let analytic = ParametricCurve::from_jets([-1.0, 1.0], |x| {
            CurveJet::new(
                x,
                GVector::new(x, math::sin(x), math::cos(2.0 * x)),
                GVector::new(1.0, math::cos(x), -2.0 * math::sin(2.0 * x)),
                GVector::new(0.0, -math::sin(x), -4.0 * math::cos(2.0 * x)),
                GVector::new(0.0, -math::cos(x), 8.0 * math::sin(2.0 * x)),
            )
        });
        assert_relative_eq!(
            curvature_arclength(&c, x).unwrap(),
            curvature_arclength(&analytic, x).unwrap(),
            epsilon = 1e-6
        );
        assert_relative_eq!(
            torsion_arclength(&c, x).unwrap(),
            torsion_arclength(&analytic, x).unwrap(),
            epsilon = 1e-5
        );
    }

    fn monotone_reparam_jets(a: f64) -> ParametricCurve {
        // x(t) = t + a sin t composed with alpha(x) = (x, sin x, cos 2x).
        ParametricCurve::from_jets([-1.0, 1.0], move |t| {
            let x = t + a * math::sin(t);
            let x1 = 1.0 + a * math::cos(t);
            let x2 = -a * math::sin(t);
            let x3 = -a * math::cos(t);
            let p = GVector::new(x, math::sin(x), math::cos(2.0 * x));
            let a1 = GVector::new(1.0, math::cos(x), -2.0 * math::sin(2.0 * x));
            let a2 = GVector::new(0.0, -math::sin(x), -4.0 * math::cos(2.0 * x));
            let a3 = GVector::new(0.0, -math::cos(x), 8.0 * math::sin(2.0 * x));
            CurveJet::new(
                t,
                p,
                a1 * x1,
                a2 * (x1 * x1) + a1 * x2,
                a3 * (x1 * x1 * x1) + a2 * (3.0 * x1 * x2) + a1 * x3,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn invariants_survive_reparametrization(t in -0.9f64..0.9, a in 0.05f64..0.4) {
            let reparam = monotone_reparam_jets(a);
            let base = ParametricCurve::from_jets([-2.0, 2.0], |x| {
                CurveJet::new(
                    x,
                    GVector::new(x, math::sin(x), math::cos(2.0 * x)),
                    GVector::new(1.0, math::cos(x), -2.0 * math::sin(2.0 * x)),
                    GVector::new(0.0, -math::sin(x), -4.0 * math::cos(2.0 * x)),
                    GVector::new(0.0, -math::cos(x), 8.0 * math::sin(2.0 * x)),
                )
            });
            let x = t + a * math::sin(t);
            let (k1, t1) = curvature_torsion_general(&reparam, t).unwrap();
            let (k2, t2) = curvature_torsion_general(&base, x).unwrap();
            prop_assert!((k1 - k2).abs() <= 1e-8 * k2.abs().max(1.0));
            prop_assert!((t1 - t2).abs() <= 1e-8 * t2.abs().max(1.0));
        }

        #[test]
        fn invariants_survive_isometries(
            x in -0.8f64..0.8,
            a in -3.0f64..3.0, b in -3.0f64..3.0, cc in -2.0f64..2.0,
            d in -3.0f64..3.0, e in -2.0f64..2.0, phi in -3.1f64..3.1,
        ) {
            let c = twisted_cubic();
            let moved = c.transform(GalileanIsometry::new(a, b, cc, d, e, phi));
            let (k1, t1) = curvature_torsion_general(&c, x).unwrap();
            let (k2, t2) = curvature_torsion_general(&moved, x).unwrap();
            prop_assert!((k1 - k2).abs() <= 1e-8 * k1.abs().max(1.0));
            prop_assert!((t1 - t2).abs() <= 1e-8 * t1.abs().max(1.0));
            // The admissible-path invariants agree as well: the linear part
            // maps admissible jets to admissible jets.
            let k_adm = curvature_arclength(&moved, x).unwrap();
            prop_assert!((k_adm - k1).abs() <= 1e-8 * k1.abs().max(1.0));
        }
    }
}
