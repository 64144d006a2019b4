//! Single-grid nonlinear solver: local Newton per cell inside symmetric
//! Gauss-Seidel sweeps, plus the explicit pseudo-time baseline.

mod driver;
mod newton;

pub(crate) use driver::sweep_in_place;
pub use driver::{
    mass_correction, pseudo_time_solve, pseudo_time_step, sgs_sweep, single_grid_solve, stable_time_step, SolveOptions,
};
pub use newton::{local_newton, max_relaxation, numerical_jacobian, regularized_solve, relaxed_state, NewtonOutcome};

use crate::discretization::Field;
use crate::error::{Error, Result};

/// Parameters of the local Newton iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Weight of the residual regularization `λ‖R̃‖I`.
    pub lambda: f64,
    /// Local residual tolerance.
    pub tol: f64,
    pub max_steps: usize,
    /// Stop once the local residual has halved.
    pub halving_stop: bool,
    /// Relative floor of the finite-difference step, scaled by `ρ θ^{|α|/2}`.
    pub delta_floor: f64,
    pub rho_floor: f64,
    pub theta_floor: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            lambda: 1.0,
            tol: 1e-8,
            max_steps: 5,
            halving_stop: true,
            delta_floor: 1e-4,
            rho_floor: 1e-6,
            theta_floor: 1e-6,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if !(self.lambda >= 0.0) || !(self.tol >= 0.0) || !(self.delta_floor > 0.0) {
            return Err(Error::Config("lambda, tol and delta_floor must be non-negative".into()));
        }
        if !(self.rho_floor > 0.0 && self.theta_floor > 0.0) {
            return Err(Error::Config("positivity floors must be positive".into()));
        }
        Ok(())
    }
}

/// Counters of one symmetric sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SweepStats {
    /// Local solves performed (two per cell).
    pub cell_solves: usize,
    pub newton_steps: usize,
    pub max_cell_steps: usize,
    /// Newton updates shortened by the positivity bound.
    pub clipped: usize,
    /// Cells left unchanged because the regularized matrix was singular.
    pub singular: usize,
    pub wall_ms: f64,
}

impl SweepStats {
    pub(crate) fn absorb(&mut self, o: &NewtonOutcome) {
        self.cell_solves += 1;
        self.newton_steps += o.steps;
        self.max_cell_steps = self.max_cell_steps.max(o.steps);
        self.clipped += o.clipped;
        self.singular += usize::from(o.singular);
    }
}

/// One row of a convergence history.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub iter: usize,
    pub residual: f64,
    /// Cumulative smoother sweeps on all levels.
    pub sweeps: usize,
    pub newton_steps: usize,
    pub wall_ms: f64,
    /// Cumulative work in units of one sweep (or one explicit step) on the finest grid.
    pub work: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Diverged(String),
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max_iterations",
            SolveStatus::Diverged(_) => "diverged",
        }
    }
}

/// Final field of a solve together with its history.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub field: Field,
    pub history: Vec<ConvergenceRecord>,
    pub status: SolveStatus,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// Outer iterations performed.
    pub fn iterations(&self) -> usize {
        self.history.last().map_or(0, |r| r.iter)
    }

    pub fn final_residual(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |r| r.residual)
    }

    /// Work spent until the residual first dropped to `level`, if it did.
    pub fn work_to(&self, level: f64) -> Option<f64> {
        self.history.iter().find(|r| r.residual <= level).map(|r| r.work)
    }
}
