//! Steady-state solver for the hyperbolic Hermite moment system of the
//! ES-BGK Boltzmann equation in one space dimension.
//!
//! The discrete problem is a first-order finite-volume scheme with an HLL
//! interface flux and Maxwell walls. It is solved either by symmetric
//! Gauss-Seidel sweeps with a local Newton solve per cell, or by a
//! full-approximation-scheme nonlinear multigrid that uses those sweeps as
//! its smoother.

// NaN must fail every positivity test, hence `!(x > 0.0)`; index loops mirror the recursions.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod basis;
pub mod closure;
pub mod discretization;
mod error;
pub mod harness;
pub mod nmg;
pub mod sgs;

pub use basis::{BasisAnchor, MacroState, MomentCoeffs, MultiIndex};
pub use closure::{ExternalForce, FrequencyLaw, GasModel};
pub use discretization::{Field, Grid1D, ProblemSpec, WallSpec};
pub use error::{Error, Result};
pub use nmg::{CycleConfig, LevelHierarchy};
pub use sgs::{NewtonConfig, SweepStats};
