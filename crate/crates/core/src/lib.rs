//! Exact density operators for a spin-1/2 particle in time-dependent
//! magnetic fields, obtained from the invariants of a (non-Hermitian)
//! time-dependent oscillator through a one-mode bosonic realization of
//! su(2).
//!
//! The main path is [`aux_solver::solve_aux`] followed by
//! [`invariant::complex_magnetization`]. [`bloch`], [`riccati`] and the
//! closed forms in [`invariant`] provide independent cross-checks.

pub mod algebra;
pub mod aux_solver;
pub mod bloch;
pub mod density;
pub mod error;
pub mod fields;
pub mod invariant;
pub mod odeint;
pub mod riccati;

pub type Vec3R = nalgebra::Vector3<f64>;
pub type Vec3C = nalgebra::Vector3<num_complex::Complex64>;

pub use num_complex::Complex64;

pub use algebra::{PolyForm, SpinCoeffs};
pub use aux_solver::{AuxSample, AuxSolution, AuxSource, Branch};
pub use bloch::{Method, Record, Trajectory};
pub use density::SpinMatrix2;
pub use error::{Error, Result};
pub use fields::{ConstantField, FieldModel, FieldSample, RotatingField, TabulatedField};
pub use invariant::{InvariantTrajectory, MagnetizationC, MagnetizationR};
pub use odeint::Grid;
pub use riccati::{Chart, ComplexParameter};
