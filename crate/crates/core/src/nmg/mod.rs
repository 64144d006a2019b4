//! Full-approximation-scheme nonlinear multigrid with SGS-Newton smoothing.

mod transfer;

use std::time::Instant;

pub use transfer::{prolong_correct, restrict_field, restrict_residual};

use crate::basis::MomentCoeffs;
use crate::discretization::{assemble_residual, global_norm, residual_norm, Field, Grid1D, ProblemSpec};
use crate::error::{Error, Result};
use crate::sgs::{
    mass_correction, single_grid_solve, sweep_in_place, ConvergenceRecord, NewtonConfig, SolveOptions, SolveReport,
    SolveStatus,
};

/// Nested grids, coarsest first; each coarse cell is the union of two fine cells.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelHierarchy {
    grids: Vec<Grid1D>,
}

impl LevelHierarchy {
    pub fn levels(&self) -> &[Grid1D] {
        &self.grids
    }

    pub fn n_levels(&self) -> usize {
        self.grids.len()
    }

    pub fn finest(&self) -> &Grid1D {
        self.grids.last().expect("non-empty hierarchy")
    }

    pub fn grid(&self, level: usize) -> &Grid1D {
        &self.grids[level]
    }
}

/// Halve `grid` repeatedly down to `coarsest` cells.
pub fn build_hierarchy(grid: &Grid1D, coarsest: usize) -> Result<LevelHierarchy> {
    if coarsest == 0 {
        return Err(Error::InvalidGrid("coarsest level needs at least one cell".into()));
    }
    let mut grids = vec![grid.clone()];
    let mut n = grid.n_cells();
    while n > coarsest {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "{} cells do not halve down to {coarsest}",
                grid.n_cells()
            )));
        }
        let next = grids.last().unwrap().coarsen()?;
        n = next.n_cells();
        grids.push(next);
    }
    if n != coarsest {
        return Err(Error::InvalidGrid(format!(
            "{} cells do not halve down to {coarsest}",
            grid.n_cells()
        )));
    }
    grids.reverse();
    Ok(LevelHierarchy { grids })
}

/// Shape of one multigrid cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleConfig {
    /// Recursive coarse calls per level: 1 gives a V-cycle, 2 a W-cycle.
    pub gamma: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub coarsest_cells: usize,
    /// Coarsest solve stops at `max(coarsest_tol, coarsest_reduction · incoming residual)`.
    pub coarsest_tol: f64,
    pub coarsest_reduction: f64,
    pub coarsest_max_iters: usize,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            gamma: 1,
            nu1: 2,
            nu2: 2,
            coarsest_cells: 4,
            coarsest_tol: 1e-8,
            coarsest_reduction: 0.01,
            coarsest_max_iters: 100,
        }
    }
}

impl CycleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma == 0 || self.gamma > 2 {
            return Err(Error::Config(format!("cycle index {} outside 1..=2", self.gamma)));
        }
        if self.nu1 + self.nu2 == 0 {
            return Err(Error::Config("at least one smoothing step is required".into()));
        }
        if self.coarsest_max_iters == 0 || self.coarsest_cells == 0 {
            return Err(Error::Config("coarsest level needs cells and iterations".into()));
        }
        Ok(())
    }
}

/// Work and event counters accumulated over cycles.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CycleStats {
    pub sweeps: usize,
    pub newton_steps: usize,
    /// Sweeps weighted by level size relative to the finest grid.
    pub work: f64,
    /// Coarse corrections skipped after a failed coarse solve.
    pub skipped_corrections: usize,
}

struct Context<'a> {
    hierarchy: &'a LevelHierarchy,
    spec: &'a ProblemSpec,
    newton: &'a NewtonConfig,
    cycle: &'a CycleConfig,
    stats: CycleStats,
}

impl Context<'_> {
    fn weight(&self, level: usize) -> f64 {
        self.hierarchy.grid(level).n_cells() as f64 / self.hierarchy.finest().n_cells() as f64
    }

    fn smooth(&mut self, field: &mut Field, rhs: Option<&[MomentCoeffs]>, level: usize, count: usize) -> Result<()> {
        for _ in 0..count {
            let s = sweep_in_place(field, rhs, self.spec, self.newton)?;
            self.stats.sweeps += 1;
            self.stats.newton_steps += s.newton_steps;
            self.stats.work += self.weight(level);
        }
        Ok(())
    }

    fn cycle(&mut self, field: &Field, rhs: Option<&[MomentCoeffs]>, level: usize) -> Result<Field> {
        if level == 0 {
            let incoming = residual_norm(field, self.spec, rhs)?;
            let opts = SolveOptions {
                tol: self.cycle.coarsest_tol.max(self.cycle.coarsest_reduction * incoming),
                max_iters: self.cycle.coarsest_max_iters,
                correct_mass: false,
                divergence_factor: 1e6,
                work_per_sweep: self.weight(0),
            };
            let report = single_grid_solve(field, rhs, self.spec, self.newton, &opts)?;
            let last = report.history.last().copied().expect("history has the initial row");
            self.stats.sweeps += last.sweeps;
            self.stats.newton_steps += last.newton_steps;
            self.stats.work += last.work;
            return match report.status {
                SolveStatus::Diverged(msg) => Err(Error::Infeasible(format!("coarsest solve: {msg}"))),
                _ => Ok(report.field),
            };
        }
        let mut fine = field.clone();
        self.smooth(&mut fine, rhs, level, self.cycle.nu1)?;

        let coarse_grid = self.hierarchy.grid(level - 1);
        let corrected = (|| -> Result<Field> {
            let residual = assemble_residual(&fine, self.spec, rhs)?;
            let restricted = restrict_field(&fine, coarse_grid)?;
            let mut coarse_rhs = restrict_residual(&residual, fine.grid(), &restricted)?;
            let plain = assemble_residual(&restricted, self.spec, None)?;
            for (r, p) in coarse_rhs.iter_mut().zip(&plain) {
                // R_H(f̄_H) = −(0 − R_H(f̄_H))
                r.axpy(-1.0, p);
            }
            let mut solved = restricted.clone();
            for _ in 0..self.cycle.gamma {
                solved = self.cycle(&solved, Some(&coarse_rhs), level - 1)?;
            }
            prolong_correct(
                &fine,
                &restricted,
                &solved,
                self.newton.rho_floor,
                self.newton.theta_floor,
            )
        })();
        match corrected {
            Ok(f) => fine = f,
            Err(e @ Error::Io(_)) => return Err(e),
            Err(_) => self.stats.skipped_corrections += 1,
        }

        self.smooth(&mut fine, rhs, level, self.cycle.nu2)?;
        Ok(fine)
    }
}

/// One FAS cycle on `level` of `hierarchy` (the finest level is `n_levels − 1`).
#[allow(clippy::too_many_arguments)]
pub fn nmg_cycle(
    field: &Field,
    rhs: Option<&[MomentCoeffs]>,
    level: usize,
    hierarchy: &LevelHierarchy,
    spec: &ProblemSpec,
    newton: &NewtonConfig,
    cycle: &CycleConfig,
) -> Result<(Field, CycleStats)> {
    if level >= hierarchy.n_levels() || field.grid() != hierarchy.grid(level) {
        return Err(Error::InvalidGrid(format!("field does not live on level {level}")));
    }
    let mut ctx = Context {
        hierarchy,
        spec,
        newton,
        cycle,
        stats: CycleStats::default(),
    };
    let out = ctx.cycle(field, rhs, level)?;
    Ok((out, ctx.stats))
}

/// Repeats cycles with the mass correction until the global residual drops to `opts.tol`.
pub fn nmg_solve(
    field: &Field,
    spec: &ProblemSpec,
    newton: &NewtonConfig,
    cycle: &CycleConfig,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    newton.validate()?;
    cycle.validate()?;
    let start = Instant::now();
    let hierarchy = build_hierarchy(field.grid(), cycle.coarsest_cells)?;
    let finest = hierarchy.n_levels() - 1;
    let mass = field.total_mass();
    let mut current = field.clone();
    let r0 = residual_norm(&current, spec, None)?;
    let mut history = vec![ConvergenceRecord {
        iter: 0,
        residual: r0,
        sweeps: 0,
        newton_steps: 0,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        work: 0.0,
    }];
    let mut status = if r0 <= opts.tol {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };
    let mut totals = CycleStats::default();
    let mut ctx = Context {
        hierarchy: &hierarchy,
        spec,
        newton,
        cycle,
        stats: CycleStats::default(),
    };
    if status != SolveStatus::Converged {
        for iter in 1..=opts.max_iters {
            ctx.stats = CycleStats::default();
            let step = ctx.cycle(&current, None, finest).and_then(|f| {
                let f = if opts.correct_mass {
                    mass_correction(&f, mass)?
                } else {
                    f
                };
                let r = global_norm(&assemble_residual(&f, spec, None)?, f.grid())?;
                Ok((f, r))
            });
            let (next, r) = match step {
                Ok(v) => v,
                Err(e) => {
                    status = SolveStatus::Diverged(e.to_string());
                    break;
                }
            };
            current = next;
            totals.sweeps += ctx.stats.sweeps;
            totals.newton_steps += ctx.stats.newton_steps;
            totals.work += ctx.stats.work;
            totals.skipped_corrections += ctx.stats.skipped_corrections;
            history.push(ConvergenceRecord {
                iter,
                residual: r,
                sweeps: totals.sweeps,
                newton_steps: totals.newton_steps,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                work: totals.work,
            });
            if !r.is_finite() || r > opts.divergence_factor * r0 {
                status = SolveStatus::Diverged(format!("residual {r}"));
                break;
            }
            if r <= opts.tol {
                status = SolveStatus::Converged;
                break;
            }
        }
    }
    Ok(SolveReport {
        field: current,
        history,
        status,
    })
}
