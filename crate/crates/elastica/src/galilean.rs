//! Vectors of the flat Galilean 3-space and its isometry group.
//!
//! The geometry grades vectors by their first component: a vector with
//! `x != 0` is *non-isotropic* and its length is `|x|`; a vector with `x == 0`
//! is *isotropic* and falls back to the Euclidean length of its `(y, z)` part.

use crate::math;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// A vector (or point) in Galilean 3-space.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GVector {
    pub const ZERO: GVector = GVector { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        GVector { x, y, z }
    }

    /// Exact grading test used by the norm/dot branch.
    pub fn is_isotropic(&self) -> bool {
        self.x == 0.0
    }

    /// Tolerant grading test for data that went through finite differences.
    pub fn is_isotropic_tol(&self, tau: f64) -> bool {
        math::abs(self.x) <= tau
    }

    /// Galilean norm: `|x|` when non-isotropic, else `sqrt(y^2 + z^2)`.
    pub fn norm(&self) -> f64 {
        if self.x != 0.0 {
            math::abs(self.x)
        } else {
            math::hypot(self.y, self.z)
        }
    }

    /// Galilean scalar product: `x1*x2` when either factor is non-isotropic,
    /// else the Euclidean product of the `(y, z)` parts.
    pub fn dot(&self, other: &GVector) -> f64 {
        if !self.is_isotropic() || !other.is_isotropic() {
            self.x * other.x
        } else {
            self.y * other.y + self.z * other.z
        }
    }

    /// Euclidean product of the `(y, z)` parts regardless of grading.
    ///
    /// Internal helper: the kernels use it when a vector is isotropic *by
    /// construction* but carries finite-difference noise in `x`, where the
    /// exact branch of [`GVector::dot`] would misfire.
    pub(crate) fn iso_dot(&self, other: &GVector) -> f64 {
        self.y * other.y + self.z * other.z
    }

    /// Euclidean length of the `(y, z)` part; see [`GVector::iso_dot`].
    pub(crate) fn iso_norm(&self) -> f64 {
        math::hypot(self.y, self.z)
    }

    /// Galilean cross product. The result is always isotropic:
    /// `(0, a3*b1 - a1*b3, a1*b2 - a2*b1)`.
    pub fn cross(&self, other: &GVector) -> GVector {
        GVector {
            x: 0.0,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }
}

impl Add for GVector {
    type Output = GVector;
    fn add(self, rhs: GVector) -> GVector {
        GVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for GVector {
    type Output = GVector;
    fn sub(self, rhs: GVector) -> GVector {
        GVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for GVector {
    type Output = GVector;
    fn neg(self) -> GVector {
        GVector::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for GVector {
    type Output = GVector;
    fn mul(self, s: f64) -> GVector {
        GVector::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<GVector> for f64 {
    type Output = GVector;
    fn mul(self, v: GVector) -> GVector {
        v * self
    }
}

impl Div<f64> for GVector {
    type Output = GVector;
    fn div(self, s: f64) -> GVector {
        GVector::new(self.x / s, self.y / s, self.z / s)
    }
}

/// A direct isometry of Galilean 3-space.
///
/// In coordinates:
///
/// ```text
/// x' = a + x
/// y' = b + c*x + y*cos(phi) + z*sin(phi)
/// z' = d + e*x - y*sin(phi) + z*cos(phi)
/// ```
///
/// The linear part has determinant one, so these preserve the Galilean norm,
/// scalar product, and the invariants built from them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GalileanIsometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub phi: f64,
}

impl GalileanIsometry {
    pub const IDENTITY: GalileanIsometry =
        GalileanIsometry { a: 0.0, b: 0.0, c: 0.0, d: 0.0, e: 0.0, phi: 0.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64, phi: f64) -> Self {
        GalileanIsometry { a, b, c, d, e, phi }
    }

    /// Apply the full affine map to a point.
    pub fn apply(&self, p: &GVector) -> GVector {
        let lin = self.linear(p);
        GVector::new(self.a + lin.x, self.b + lin.y, self.d + lin.z)
    }

    /// Apply only the linear part (appropriate for tangent vectors).
    pub fn linear(&self, v: &GVector) -> GVector {
        let (s, c) = (math::sin(self.phi), math::cos(self.phi));
        GVector::new(
            v.x,
            self.c * v.x + v.y * c + v.z * s,
            self.e * v.x - v.y * s + v.z * c,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn norm_grades_by_first_component() {
        assert_eq!(GVector::new(3.0, -40.0, 500.0).norm(), 3.0);
        assert_eq!(GVector::new(-2.0, 0.0, 0.0).norm(), 2.0);
        assert_relative_eq!(GVector::new(0.0, 3.0, 4.0).norm(), 5.0);
        assert_eq!(GVector::ZERO.norm(), 0.0);
    }

    #[test]
    fn dot_grades_by_first_components() {
        let a = GVector::new(2.0, 7.0, -1.0);
        let b = GVector::new(-3.0, 100.0, 100.0);
        assert_eq!(a.dot(&b), -6.0);
        // One factor non-isotropic is enough for the x-branch.
        let iso = GVector::new(0.0, 1.0, 1.0);
        assert_eq!(a.dot(&iso), 0.0);
        assert_eq!(iso.dot(&a), 0.0);
        // Both isotropic: Euclidean on (y, z).
        let iso2 = GVector::new(0.0, 2.0, 5.0);
        assert_eq!(iso.dot(&iso2), 7.0);
    }

    #[test]
    fn cross_matches_determinant_expansion() {
        let a = GVector::new(1.0, 2.0, 3.0);
        let b = GVector::new(4.0, 5.0, 6.0);
        let c = a.cross(&b);
        assert_eq!(c, GVector::new(0.0, 3.0 * 4.0 - 1.0 * 6.0, 1.0 * 5.0 - 2.0 * 4.0));
        assert!(c.is_isotropic());
        // Antisymmetry.
        let d = b.cross(&a);
        assert_eq!(c + d, GVector::ZERO);
    }

    #[test]
    fn isometry_identity_fixes_everything() {
        let p = GVector::new(1.5, -2.5, 3.5);
        assert_eq!(GalileanIsometry::IDENTITY.apply(&p), p);
        assert_eq!(GalileanIsometry::IDENTITY.linear(&p), p);
    }

    fn small() -> impl Strategy<Value = f64> {
        -10.0f64..10.0
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn linear_part_preserves_norm(
            a in small(), b in small(), c in small(),
            d in small(), e in small(), phi in -3.2f64..3.2,
            vx in small(), vy in small(), vz in small(),
        ) {
            let iso = GalileanIsometry::new(a, b, c, d, e, phi);
            let v = GVector::new(vx, vy, vz);
            prop_assert!((iso.linear(&v).norm() - v.norm()).abs() < 1e-9);
            // Isotropic vectors stay isotropic and keep their Euclidean length.
            let w = GVector::new(0.0, vy, vz);
            let lw = iso.linear(&w);
            prop_assert!(lw.is_isotropic());
            prop_assert!((lw.norm() - w.norm()).abs() < 1e-9);
        }

        #[test]
        fn linear_part_preserves_dot(
            c in small(), e in small(), phi in -3.2f64..3.2,
            ax in small(), ay in small(), az in small(),
            by in small(), bz in small(),
        ) {
            let iso = GalileanIsometry::new(0.0, 0.0, c, 0.0, e, phi);
            // Non-isotropic pair.
            let a = GVector::new(if ax == 0.0 { 1.0 } else { ax }, ay, az);
            let b = GVector::new(2.0, by, bz);
            prop_assert!((iso.linear(&a).dot(&iso.linear(&b)) - a.dot(&b)).abs() < 1e-9);
            // Isotropic pair.
            let ai = GVector::new(0.0, ay, az);
            let bi = GVector::new(0.0, by, bz);
            prop_assert!((iso.linear(&ai).dot(&iso.linear(&bi)) - ai.dot(&bi)).abs() < 1e-9);
        }
    }
}
