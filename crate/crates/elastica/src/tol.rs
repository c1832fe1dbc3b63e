//! Central numeric tolerances and method parameters.
//!
//! The acceptance suite pins behaviour against these exact values; change with care.

/// A computed x-component below this counts as isotropic. The algebraic norm and
/// scalar-product branch rules still use exact `x != 0` comparisons; this tolerance
/// is for classifying quantities that carry floating-point noise.
pub const TAU_ISO: f64 = 1e-10;

/// Curvature floor below which the principal normal, binormal, and torsion are
/// treated as undefined.
pub const KAPPA_MIN: f64 = 1e-12;

/// Admissibility: |x-component of the unit tangent - 1| must stay below this for
/// the arc-length-form curve operations.
pub const TAU_ADM: f64 = 1e-8;

/// Central-difference step for first derivatives (relative to coordinate scale).
pub const FD_H1: f64 = 1e-5;

/// Step for second-derivative stencils. Larger than `FD_H1` because the eps/h^2
/// rounding term dominates below ~1e-4.
pub const FD_H2: f64 = 1e-4;

/// Step for the five-point third-derivative stencil.
pub const FD_H3: f64 = 1e-3;

/// Unit-speed constraint tolerance: |speed - 1| per sample.
pub const TAU_CON: f64 = 1e-8;

/// Chart regularity floor for W = ||psi_1 x psi_2||.
pub const TAU_W: f64 = 1e-12;

/// Denominator floor when selecting the X1/X2 branch of the second-form formula.
pub const TAU_BRANCH: f64 = 1e-12;

/// Euler-Lagrange residual ceiling for an accepted elastic-line solution.
pub const TAU_EL: f64 = 1e-6;

/// Boundary-term ceiling for an accepted elastic-line solution.
pub const TAU_BC: f64 = 1e-6;

/// Default geodesic classification tolerance: max kappa_g^2 < TAU_GEO^2.
pub const TAU_GEO: f64 = 1e-6;

/// Constraint re-projection cadence (integration steps) inside the shooting flow.
pub const N_PROJ: usize = 10;

/// Multiple-shooting segment count.
pub const SHOOTING_SEGMENTS: usize = 8;

/// Central-difference step for chart-direction partials of the constrained Lagrangian.
pub const FD_HU: f64 = 1e-5;

/// Half-step for the five-point x-windows that differentiate Lagrangian momenta
/// along a curve.
pub const FD_DX: f64 = 1e-3;
