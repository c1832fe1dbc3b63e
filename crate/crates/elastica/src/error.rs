//! Error type shared by the geometry kernels.

use core::fmt;

/// Failure modes of the curve/surface kernels and the catalog constructors.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Curve is not in arc-length (admissible) form: the tangent x-component
    /// differs from 1 beyond tolerance.
    NotAdmissible { dx: f64 },
    /// Curvature below the floor; normal, binormal, and torsion are undefined.
    CurvatureVanishes { kappa: f64 },
    /// Tangent (or the cross product entering a quotient) degenerates.
    DegenerateJet,
    /// Chart fails the regularity requirement W > 0 (and is not a clean
    /// isotropic chart).
    DegenerateChart { w: f64 },
    /// Both denominators of the second-form formula vanish while second-order
    /// x-jets survive: the chart degenerates in an unsupported way.
    BothDenominatorsVanish,
    /// A curve sample violates the unit-speed side condition.
    ConstraintViolated { speed: f64, at: f64 },
    /// Integration left the chart domain.
    LeftDomain { u: [f64; 2] },
    /// Non-finite state during integration.
    StepFailure,
    /// The constraint cannot be solved for the first velocity component.
    SingularU1,
    /// The constraint cannot be solved for the second velocity component.
    SingularU2,
    /// No real velocity branch satisfies the constraint at this point.
    InfeasibleConstraint,
    /// Cylinder radius must be positive.
    NonpositiveRadius,
    /// Helical pitch must be nonzero.
    ZeroPitch,
    /// Euclidean-profile helical surface requires an arc-length profile
    /// (f'^2 + g'^2 = 1).
    ProfileNotArcLength { defect: f64 },
    /// Isotropic-profile helical surface requires f^2 + p^2 f'^2 > 0.
    DegenerateProfile,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotAdmissible { dx } => {
                write!(f, "curve not admissible: tangent x-component {dx} != 1")
            }
            Error::CurvatureVanishes { kappa } => {
                write!(f, "curvature {kappa:.3e} below floor; frame undefined")
            }
            Error::DegenerateJet => write!(f, "degenerate curve jet"),
            Error::DegenerateChart { w } => {
                write!(f, "degenerate chart: W = {w:.3e} below regularity floor")
            }
            Error::BothDenominatorsVanish => {
                write!(f, "both second-form denominators vanish on a non-flat chart")
            }
            Error::ConstraintViolated { speed, at } => {
                write!(f, "unit-speed constraint violated: speed {speed} at x = {at}")
            }
            Error::LeftDomain { u } => {
                write!(f, "left chart domain at (u1, u2) = ({}, {})", u[0], u[1])
            }
            Error::StepFailure => write!(f, "non-finite state during integration"),
            Error::SingularU1 => write!(f, "constraint not solvable for du1"),
            Error::SingularU2 => write!(f, "constraint not solvable for du2"),
            Error::InfeasibleConstraint => {
                write!(f, "no real velocity satisfies the unit-speed constraint here")
            }
            Error::NonpositiveRadius => write!(f, "radius must be positive"),
            Error::ZeroPitch => write!(f, "pitch must be nonzero"),
            Error::ProfileNotArcLength { defect } => {
                write!(f, "profile is not arc length: |f'^2 + g'^2 - 1| up to {defect:.3e}")
            }
            Error::DegenerateProfile => write!(f, "profile degenerates: f^2 + p^2 f'^2 = 0"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
