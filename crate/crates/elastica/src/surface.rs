//! Oriented surfaces in Galilean 3-space: charts, normal and side tangential
//! vectors, fundamental forms, and Christoffel symbols.
//!
//! A chart `psi(u1, u2)` falls into one of two regimes:
//!
//! * **General**: at least one tangent vector is non-isotropic and the
//!   Galilean cross product `psi1 x psi2` has positive length `W`. The normal
//!   `n = (psi1 x psi2)/W`, the side tangential `Q = (X2 psi1 - X1 psi2)/W`,
//!   the degenerate first form `g_ij = X_i X_j`, the second form `L_ij`, and
//!   the extrinsic Christoffel symbols all live here.
//!
//! * **Isotropic**: the whole chart lies in a plane `x = const` (all x-jets
//!   vanish). The cross product degenerates (`W = 0`), no isotropic unit
//!   normal exists, and the induced geometry is the Euclidean geometry of the
//!   `(y, z)` plane: the first form is `h_ij = psi_i . psi_j` (Euclidean on
//!   `(y, z)`), the second form vanishes, and Christoffel symbols are the
//!   intrinsic ones of `h`. Normal curvature and geodesic torsion vanish
//!   identically for curves on such charts.
//!
//! A chart whose first-order x-jets vanish while second-order ones do not is
//! degenerate in an unsupported way and is reported as an error.

use alloc::sync::Arc;

use crate::error::{Error, Result};
use crate::galilean::GVector;
use crate::math;
use crate::tol;

/// Chart value and derivatives up to second order at one `(u1, u2)`.
#[derive(Clone, Copy, Debug)]
pub struct ChartJets {
    pub psi: GVector,
    pub psi1: GVector,
    pub psi2: GVector,
    pub psi11: GVector,
    pub psi12: GVector,
    pub psi22: GVector,
}

impl ChartJets {
    /// First derivative by index (0 or 1).
    pub fn d1(&self, i: usize) -> GVector {
        match i {
            0 => self.psi1,
            _ => self.psi2,
        }
    }

    /// Second derivative by index pair (each 0 or 1).
    pub fn d2(&self, i: usize, j: usize) -> GVector {
        match i + j {
            0 => self.psi11,
            1 => self.psi12,
            _ => self.psi22,
        }
    }
}

/// Index into the packed symmetric-pair arrays: (0,0) -> 0, (0,1) -> 1,
/// (1,1) -> 2.
#[inline]
pub(crate) fn pair(i: usize, j: usize) -> usize {
    i + j
}

/// Finite-difference steps for position-only charts.
#[derive(Clone, Copy, Debug)]
pub struct ChartFdSteps {
    /// Step for first derivatives.
    pub h1: f64,
    /// Step for second (including mixed) derivatives.
    pub h2: f64,
}

impl Default for ChartFdSteps {
    fn default() -> Self {
        ChartFdSteps { h1: tol::FD_H1, h2: tol::FD_H2 }
    }
}

type ChartJetFn = dyn Fn(f64, f64) -> ChartJets + Send + Sync;
type ChartPosFn = dyn Fn(f64, f64) -> GVector + Send + Sync;

#[derive(Clone)]
enum ChartSource {
    Jets(Arc<ChartJetFn>),
    Positions { f: Arc<ChartPosFn>, steps: ChartFdSteps },
}

/// A parametrized surface patch with analytic jets or a finite-difference
/// fallback.
#[derive(Clone)]
pub struct SurfaceChart {
    source: ChartSource,
    /// `[[u1_min, u1_max], [u2_min, u2_max]]`.
    pub domain: [[f64; 2]; 2],
}

impl SurfaceChart {
    pub fn from_jets<F>(domain: [[f64; 2]; 2], f: F) -> Self
    where
        F: Fn(f64, f64) -> ChartJets + Send + Sync + 'static,
    {
        SurfaceChart { source: ChartSource::Jets(Arc::new(f)), domain }
    }

    pub fn from_positions<F>(domain: [[f64; 2]; 2], f: F) -> Self
    where
        F: Fn(f64, f64) -> GVector + Send + Sync + 'static,
    {
        Self::from_positions_with_steps(domain, f, ChartFdSteps::default())
    }

    pub fn from_positions_with_steps<F>(domain: [[f64; 2]; 2], f: F, steps: ChartFdSteps) -> Self
    where
        F: Fn(f64, f64) -> GVector + Send + Sync + 'static,
    {
        SurfaceChart { source: ChartSource::Positions { f: Arc::new(f), steps }, domain }
    }

    pub fn contains(&self, u1: f64, u2: f64) -> bool {
        u1 >= self.domain[0][0]
            && u1 <= self.domain[0][1]
            && u2 >= self.domain[1][0]
            && u2 <= self.domain[1][1]
    }

    /// Evaluate chart jets (analytic or central finite differences).
    pub fn jets(&self, u1: f64, u2: f64) -> ChartJets {
        match &self.source {
            ChartSource::Jets(f) => f(u1, u2),
            ChartSource::Positions { f, steps } => {
                let (h1, h2) = (steps.h1, steps.h2);
                let psi = f(u1, u2);
                let psi1 = (f(u1 + h1, u2) - f(u1 - h1, u2)) / (2.0 * h1);
                let psi2 = (f(u1, u2 + h1) - f(u1, u2 - h1)) / (2.0 * h1);
                let psi11 = (f(u1 + h2, u2) - 2.0 * psi + f(u1 - h2, u2)) / (h2 * h2);
                let psi22 = (f(u1, u2 + h2) - 2.0 * psi + f(u1, u2 - h2)) / (h2 * h2);
                let psi12 = (f(u1 + h2, u2 + h2) - f(u1 + h2, u2 - h2) - f(u1 - h2, u2 + h2)
                    + f(u1 - h2, u2 - h2))
                    / (4.0 * h2 * h2);
                ChartJets { psi, psi1, psi2, psi11, psi12, psi22 }
            }
        }
    }

    /// Evaluate the full point geometry at `(u1, u2)`.
    pub fn point(&self, u1: f64, u2: f64) -> Result<SurfacePoint> {
        SurfacePoint::build([u1, u2], self.jets(u1, u2))
    }
}

/// Which geometric regime a chart point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartRegime {
    /// Regular Galilean chart (`W > 0`).
    General,
    /// Chart inside a plane `x = const`; Euclidean geometry of `(y, z)`.
    Isotropic,
}

/// All derived geometry at one chart point. Symmetric pairs are packed as
/// `[q_11, q_12, q_22]`; Christoffel symbols as `gamma[k][pair(i,j)]`.
#[derive(Clone, Debug)]
pub struct SurfacePoint {
    pub u: [f64; 2],
    pub jets: ChartJets,
    pub regime: ChartRegime,
    /// `W = |psi1 x psi2|` (zero in the isotropic regime).
    pub w: f64,
    /// Unit normal (general regime only).
    pub n: Option<GVector>,
    /// Side tangential vector (general regime only).
    pub q: Option<GVector>,
    /// First fundamental form: `X_i X_j` in the general regime, the Euclidean
    /// `(y, z)` products in the isotropic regime.
    pub g: [f64; 3],
    /// `g_i = X_i`.
    pub g_vec: [f64; 2],
    /// `g^1 = X_2/W`, `g^2 = -X_1/W` (zero in the isotropic regime).
    pub g_upper: [f64; 2],
    /// Second fundamental form (zero in the isotropic regime).
    pub l: [f64; 3],
    /// Christoffel symbols `gamma[k][pair(i,j)]`.
    pub gamma: [[f64; 3]; 2],
    /// Euclidean `(y, z)` products `psi_i . psi_j`, available in both regimes
    /// (coincides with `g` on isotropic charts).
    pub h: [f64; 3],
    /// Partials of the first form: `dg[k][pair(i,j)] = d g_ij / d u_k`,
    /// exact from second-order jets.
    pub dg: [[f64; 3]; 2],
}

impl SurfacePoint {
    fn build(u: [f64; 2], jets: ChartJets) -> Result<SurfacePoint> {
        let x1 = jets.psi1.x;
        let x2 = jets.psi2.x;
        let h = [
            jets.psi1.iso_dot(&jets.psi1),
            jets.psi1.iso_dot(&jets.psi2),
            jets.psi2.iso_dot(&jets.psi2),
        ];
        if math::abs(x1) <= tol::TAU_ISO && math::abs(x2) <= tol::TAU_ISO {
            let x_second = math::abs(jets.psi11.x)
                .max(math::abs(jets.psi12.x))
                .max(math::abs(jets.psi22.x));
            if x_second > tol::TAU_ISO {
                return Err(Error::BothDenominatorsVanish);
            }
            return Self::build_isotropic(u, jets, h);
        }
        let cross = jets.psi1.cross(&jets.psi2);
        let w = cross.iso_norm();
        if w <= tol::TAU_W {
            return Err(Error::DegenerateChart { w });
        }
        let n = cross / w;
        let q = (x2 * jets.psi1 - x1 * jets.psi2) / w;

        let mut l = [0.0; 3];
        let mut gamma = [[0.0; 3]; 2];
        let mut dg = [[0.0; 3]; 2];
        for i in 0..2 {
            for j in i..2 {
                let d2 = jets.d2(i, j);
                let x_ij = d2.x;
                // Second form: pick the better-conditioned of the two
                // equivalent quotient formulas.
                let num = if math::abs(x2) >= math::abs(x1) {
                    (x2 * d2 - x_ij * jets.psi2) / x2
                } else {
                    (x1 * d2 - x_ij * jets.psi1) / x1
                };
                l[pair(i, j)] = num.iso_dot(&n);
                // Christoffel symbols from the tangential part of psi_ij.
                gamma[0][pair(i, j)] = (x2 * d2 - x_ij * jets.psi2).iso_dot(&q) / w;
                gamma[1][pair(i, j)] = (x_ij * jets.psi1 - x1 * d2).iso_dot(&q) / w;
            }
        }
        for k in 0..2 {
            for i in 0..2 {
                for j in i..2 {
                    // d/du_k (X_i X_j).
                    dg[k][pair(i, j)] =
                        jets.d2(i, k).x * jets.d1(j).x + jets.d1(i).x * jets.d2(j, k).x;
                }
            }
        }
        Ok(SurfacePoint {
            u,
            jets,
            regime: ChartRegime::General,
            w,
            n: Some(n),
            q: Some(q),
            g: [x1 * x1, x1 * x2, x2 * x2],
            g_vec: [x1, x2],
            g_upper: [x2 / w, -x1 / w],
            l,
            gamma,
            h,
            dg,
        })
    }

    fn build_isotropic(u: [f64; 2], jets: ChartJets, h: [f64; 3]) -> Result<SurfacePoint> {
        let det = h[0] * h[2] - h[1] * h[1];
        if det <= tol::TAU_W {
            return Err(Error::DegenerateChart { w: 0.0 });
        }
        let h_inv = [h[2] / det, -h[1] / det, h[0] / det];
        // dh[k][pair(i,j)] = psi_ik . psi_j + psi_i . psi_jk.
        let mut dh = [[0.0; 3]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in i..2 {
                    dh[k][pair(i, j)] = jets.d2(i, k).iso_dot(&jets.d1(j))
                        + jets.d1(i).iso_dot(&jets.d2(j, k));
                }
            }
        }
        // Intrinsic symbols of the Euclidean metric h.
        let mut gamma = [[0.0; 3]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in i..2 {
                    let mut s = 0.0;
                    for m in 0..2 {
                        s += h_inv[pair(k, m)]
                            * (dh[i][pair(j, m)] + dh[j][pair(i, m)] - dh[m][pair(i, j)]);
                    }
                    gamma[k][pair(i, j)] = 0.5 * s;
                }
            }
        }
        Ok(SurfacePoint {
            u,
            jets,
            regime: ChartRegime::Isotropic,
            w: 0.0,
            n: None,
            q: None,
            g: h,
            g_vec: [0.0, 0.0],
            g_upper: [0.0, 0.0],
            l: [0.0; 3],
            gamma,
            h,
            dg: dh,
        })
    }

    /// Tangent vector of the parameter velocity `du` in ambient space.
    pub fn tangent(&self, du: [f64; 2]) -> GVector {
        self.jets.psi1 * du[0] + self.jets.psi2 * du[1]
    }

    /// Galilean speed of the parameter velocity `du`: the constraint function
    /// whose unit level set defines arc-length parametrization. Branches on
    /// the tolerance-graded isotropy of the tangent.
    pub fn speed(&self, du: [f64; 2]) -> f64 {
        let t = self.tangent(du);
        if math::abs(t.x) > tol::TAU_ISO {
            math::abs(t.x)
        } else {
            t.iso_norm()
        }
    }

    /// The constraint quadratic `sum_ij g_ij du_i du_j`.
    pub fn g_quad(&self, du: [f64; 2]) -> f64 {
        self.g[0] * du[0] * du[0] + 2.0 * self.g[1] * du[0] * du[1] + self.g[2] * du[1] * du[1]
    }
}

/// Unit normal field (general regime); errors on isotropic or degenerate
/// charts where no isotropic unit normal exists.
pub fn unit_normal(s: &SurfaceChart, u1: f64, u2: f64) -> Result<GVector> {
    let p = s.point(u1, u2)?;
    p.n.ok_or(Error::DegenerateChart { w: 0.0 })
}

/// Side tangential vector `Q` (general regime).
pub fn side_tangential(s: &SurfaceChart, u1: f64, u2: f64) -> Result<GVector> {
    let p = s.point(u1, u2)?;
    p.q.ok_or(Error::DegenerateChart { w: 0.0 })
}

/// First fundamental form `(g11, g12, g22, g1, g2)`.
pub fn first_form(s: &SurfaceChart, u1: f64, u2: f64) -> Result<(f64, f64, f64, f64, f64)> {
    let p = s.point(u1, u2)?;
    Ok((p.g[0], p.g[1], p.g[2], p.g_vec[0], p.g_vec[1]))
}

/// Second fundamental form `(L11, L12, L22)`.
pub fn second_form(s: &SurfaceChart, u1: f64, u2: f64) -> Result<(f64, f64, f64)> {
    let p = s.point(u1, u2)?;
    Ok((p.l[0], p.l[1], p.l[2]))
}

/// Christoffel symbols `gamma[k][pair(i,j)]`.
pub fn christoffel(s: &SurfaceChart, u1: f64, u2: f64) -> Result<[[f64; 3]; 2]> {
    let p = s.point(u1, u2)?;
    Ok(p.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cylinder(r: f64) -> SurfaceChart {
        SurfaceChart::from_jets([[-10.0, 10.0], [-10.0, 10.0]], move |u, v| {
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
        SurfaceChart::from_jets([[-10.0, 10.0], [-10.0, 10.0]], |u1, u2| ChartJets {
            psi: GVector::new(0.0, u1, u2),
            psi1: GVector::new(0.0, 1.0, 0.0),
            psi2: GVector::new(0.0, 0.0, 1.0),
            psi11: GVector::ZERO,
            psi12: GVector::ZERO,
            psi22: GVector::ZERO,
        })
    }

    /// A generic curved chart exercising all coefficient paths.
    fn generic_chart() -> SurfaceChart {
        SurfaceChart::from_positions([[-1.0, 1.0], [-1.0, 1.0]], |u, v| {
            GVector::new(
                u + 2.0 * v,
                math::sin(u) + v * v,
                math::cos(v) + 0.3 * u * u,
            )
        })
    }

    #[test]
    fn cylinder_point_geometry() {
        let s = cylinder(2.0);
        let p = s.point(0.3, 0.0).unwrap();
        assert_eq!(p.regime, ChartRegime::General);
        assert_relative_eq!(p.w, 1.0);
        let n = p.n.unwrap();
        assert_abs_diff_eq!(n.x, 0.0);
        assert_relative_eq!(n.y, -1.0);
        assert_abs_diff_eq!(n.z, 0.0, epsilon = 1e-15);
        // g11 = 1, rest 0; L22 = 1/R; all Christoffel symbols vanish.
        assert_eq!(p.g, [1.0, 0.0, 0.0]);
        assert_eq!(p.l[0], 0.0);
        assert_eq!(p.l[1], 0.0);
        assert_relative_eq!(p.l[2], 0.5);
        for k in 0..2 {
            for ij in 0..3 {
                assert_abs_diff_eq!(p.gamma[k][ij], 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn plane_is_isotropic_with_euclidean_metric() {
        let s = flat_plane();
        let p = s.point(0.4, -0.7).unwrap();
        assert_eq!(p.regime, ChartRegime::Isotropic);
        assert_eq!(p.w, 0.0);
        assert_eq!(p.g, [1.0, 0.0, 1.0]);
        assert_eq!(p.l, [0.0, 0.0, 0.0]);
        assert_eq!(p.gamma, [[0.0; 3]; 2]);
        assert!(matches!(
            unit_normal(&s, 0.4, -0.7),
            Err(Error::DegenerateChart { .. })
        ));
        assert!(matches!(
            side_tangential(&s, 0.4, -0.7),
            Err(Error::DegenerateChart { .. })
        ));
    }

    #[test]
    fn polar_coordinates_give_euclidean_christoffels() {
        // Polar chart of the isotropic plane: h = diag(1, r^2), so the only
        // nonzero symbols are gamma^r_tt = -r and gamma^t_rt = 1/r.
        let s = SurfaceChart::from_jets([[0.5, 3.0], [-3.0, 3.0]], |r, t| {
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
        let r = 1.7;
        let p = s.point(r, 0.9).unwrap();
        assert_eq!(p.regime, ChartRegime::Isotropic);
        assert_relative_eq!(p.g[2], r * r, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma[0][0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(p.gamma[0][2], -r, epsilon = 1e-12);
        assert_relative_eq!(p.gamma[1][1], 1.0 / r, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma[1][0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma[0][1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.gamma[1][2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn normal_and_side_tangential_are_orthonormal() {
        let s = generic_chart();
        for &(u, v) in &[(0.1, -0.3), (0.5, 0.5), (-0.7, 0.2)] {
            let p = s.point(u, v).unwrap();
            let n = p.n.unwrap();
            let q = p.q.unwrap();
            assert!(n.is_isotropic() && q.is_isotropic());
            assert_relative_eq!(n.dot(&n), 1.0, epsilon = 1e-9);
            assert_relative_eq!(q.dot(&q), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(n.dot(&q), 0.0, epsilon = 1e-9);
            // Normality against the tangent plane.
            assert_abs_diff_eq!(n.dot(&p.jets.psi1), 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(n.dot(&p.jets.psi2), 0.0, epsilon = 1e-9);
            // For a unit (admissible) tangent T, the frame closes up as
            // T x n = Q.
            let du = {
                // Solve X1 a + X2 b = 1 with b = 0.2 fixed.
                let b = 0.2;
                let a = (1.0 - p.g_vec[1] * b) / p.g_vec[0];
                [a, b]
            };
            let t = p.tangent(du);
            assert_relative_eq!(t.x, 1.0, epsilon = 1e-12);
            let tq = t.cross(&n);
            assert_abs_diff_eq!((tq - q).iso_norm(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn second_form_branches_agree() {
        let s = generic_chart();
        let p = s.point(0.3, 0.4).unwrap();
        let n = p.n.unwrap();
        let (x1, x2) = (p.jets.psi1.x, p.jets.psi2.x);
        assert!(math::abs(x1) > 1e-6 && math::abs(x2) > 1e-6);
        for i in 0..2 {
            for j in i..2 {
                let d2 = p.jets.d2(i, j);
                let via_x2 = ((x2 * d2 - d2.x * p.jets.psi2) / x2).iso_dot(&n);
                let via_x1 = ((x1 * d2 - d2.x * p.jets.psi1) / x1).iso_dot(&n);
                assert_relative_eq!(via_x1, via_x2, epsilon = 1e-6, max_relative = 1e-6);
                assert_relative_eq!(p.l[pair(i, j)], via_x2, epsilon = 1e-6, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn christoffels_reconstruct_the_tangential_part() {
        // Gauss decomposition: psi_ij = gamma^1_ij psi1 + gamma^2_ij psi2
        // + L_ij n must hold on general charts.
        let s = generic_chart();
        let p = s.point(-0.2, 0.6).unwrap();
        let n = p.n.unwrap();
        for i in 0..2 {
            for j in i..2 {
                let lhs = p.jets.d2(i, j);
                let rhs = p.jets.psi1 * p.gamma[0][pair(i, j)]
                    + p.jets.psi2 * p.gamma[1][pair(i, j)]
                    + n * p.l[pair(i, j)];
                let r = lhs - rhs;
                assert_abs_diff_eq!(r.x, 0.0, epsilon = 1e-7);
                assert_abs_diff_eq!(r.iso_norm(), 0.0, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn first_form_partials_match_finite_differences() {
        let s = generic_chart();
        let (u, v) = (0.25, -0.4);
        let p = s.point(u, v).unwrap();
        let d = 1e-5;
        let gp1 = s.point(u + d, v).unwrap().g;
        let gm1 = s.point(u - d, v).unwrap().g;
        let gp2 = s.point(u, v + d).unwrap().g;
        let gm2 = s.point(u, v - d).unwrap().g;
        for ij in 0..3 {
            assert_abs_diff_eq!(p.dg[0][ij], (gp1[ij] - gm1[ij]) / (2.0 * d), epsilon = 1e-4);
            assert_abs_diff_eq!(p.dg[1][ij], (gp2[ij] - gm2[ij]) / (2.0 * d), epsilon = 1e-4);
        }
    }

    #[test]
    fn fd_chart_matches_analytic_cylinder() {
        let r = 2.0;
        let analytic = cylinder(r);
        let fd = SurfaceChart::from_positions([[-10.0, 10.0], [-10.0, 10.0]], move |u, v| {
            GVector::new(u, r * math::cos(v / r), r * math::sin(v / r))
        });
        let (u, v) = (0.4, 1.1);
        let pa = analytic.point(u, v).unwrap();
        let pf = fd.point(u, v).unwrap();
        assert_eq!(pf.regime, ChartRegime::General);
        for ij in 0..3 {
            assert_abs_diff_eq!(pa.g[ij], pf.g[ij], epsilon = 1e-6);
            assert_abs_diff_eq!(pa.l[ij], pf.l[ij], epsilon = 1e-4);
            assert_abs_diff_eq!(pa.gamma[0][ij], pf.gamma[0][ij], epsilon = 1e-4);
            assert_abs_diff_eq!(pa.gamma[1][ij], pf.gamma[1][ij], epsilon = 1e-4);
        }
    }

    #[test]
    fn mixed_degenerate_chart_is_rejected() {
        // x-component u^2: first-order x-jets vanish at u = 0 while the
        // second-order one does not.
        let s = SurfaceChart::from_jets([[-1.0, 1.0], [-1.0, 1.0]], |u, v| ChartJets {
            psi: GVector::new(u * u, u, v),
            psi1: GVector::new(2.0 * u, 1.0, 0.0),
            psi2: GVector::new(0.0, 0.0, 1.0),
            psi11: GVector::new(2.0, 0.0, 0.0),
            psi12: GVector::ZERO,
            psi22: GVector::ZERO,
        });
        assert!(matches!(s.point(0.0, 0.3), Err(Error::BothDenominatorsVanish)));
        // Away from u = 0 the chart is a regular general-regime chart.
        assert!(s.point(0.5, 0.3).is_ok());
    }

    #[test]
    fn rank_deficient_chart_is_rejected() {
        let s = SurfaceChart::from_jets([[-1.0, 1.0], [-1.0, 1.0]], |u, v| ChartJets {
            psi: GVector::new(u + v, u + v, 0.0),
            psi1: GVector::new(1.0, 1.0, 0.0),
            psi2: GVector::new(1.0, 1.0, 0.0),
            psi11: GVector::ZERO,
            psi12: GVector::ZERO,
            psi22: GVector::ZERO,
        });
        assert!(matches!(s.point(0.0, 0.0), Err(Error::DegenerateChart { .. })));
    }

    #[test]
    fn speed_branches_on_tangent_isotropy() {
        let s = cylinder(2.0);
        let p = s.point(0.0, 0.0).unwrap();
        // Generator direction: non-isotropic tangent, speed |X . du| = 1.
        assert_relative_eq!(p.speed([1.0, 0.5]), 1.0);
        // Circle direction: isotropic tangent, Euclidean speed.
        assert_relative_eq!(p.speed([0.0, 1.0]), 1.0);
        assert_relative_eq!(p.speed([0.0, 2.0]), 2.0);
    }
}
