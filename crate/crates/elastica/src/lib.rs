//! Curves, surfaces, and relaxed elastic lines in the Galilean 3-space.
//!
//! The Galilean 3-space carries a degenerate metric with one absolute (non-isotropic)
//! direction, taken here as the x-axis. This crate implements the resulting curve
//! theory (Frenet apparatus of admissible curves), the surface theory (unit normal,
//! side tangential vector, fundamental forms, Christoffel symbols, Darboux
//! invariants), and two constrained variational problems for elastic lines on
//! oriented surfaces: minimizing the squared normal curvature, and minimizing the
//! full squared curvature, both under the unit-speed side condition.
//!
//! Everything outside the solvers is `no_std`-friendly (enable the `libm` feature
//! and disable `std`); file formats and the CLI live in the companion crate.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("enable either the `std` or the `libm` feature");

extern crate alloc;

pub mod catalog;
pub mod curve;
pub mod darboux;
pub mod error;
pub mod galilean;
mod linalg;
mod math;
mod ode;
mod rng;
pub mod surface;
pub mod tol;
pub mod variational;

pub use error::Error;
pub use galilean::{GVector, GalileanIsometry};
