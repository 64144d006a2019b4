use std::time::Instant;

use super::{local_newton, ConvergenceRecord, NewtonConfig, SolveReport, SolveStatus, SweepStats};
use crate::basis::MomentCoeffs;
use crate::closure::frequency_unchecked;
use crate::discretization::{assemble_residual, global_norm, neighbors, residual_norm, with_cell, Field, ProblemSpec};
use crate::error::{Error, Result};

/// Stopping rules of an outer iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Rescale to the initial total mass after every iteration.
    pub correct_mass: bool,
    /// Declare divergence once the residual exceeds this multiple of the initial one.
    pub divergence_factor: f64,
    /// Work charged per sweep, in finest-grid sweep units.
    pub work_per_sweep: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-8,
            max_iters: 10_000,
            correct_mass: true,
            divergence_factor: 1e6,
            work_per_sweep: 1.0,
        }
    }
}

fn elapsed_ms(start: &Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Forward then backward pass of local Newton solves, updating `field` in place.
pub(crate) fn sweep_in_place(
    field: &mut Field,
    rhs: Option<&[MomentCoeffs]>,
    spec: &ProblemSpec,
    cfg: &NewtonConfig,
) -> Result<SweepStats> {
    let start = Instant::now();
    let n = field.n_cells();
    if let Some(r) = rhs {
        if r.len() != n {
            return Err(Error::InvalidParameter("rhs length differs from the field".into()));
        }
    }
    let mut stats = SweepStats::default();
    for i in (0..n).chain((0..n).rev()) {
        let dx = field.grid().dx(i);
        let (cell, outcome) = {
            let cells = field.cells();
            let (left, right) = neighbors(cells, i, spec);
            local_newton(&cells[i], left, right, dx, rhs.map(|r| &r[i]), spec, cfg).map_err(|e| with_cell(e, i))?
        };
        stats.absorb(&outcome);
        field.cells_mut()[i] = cell;
    }
    stats.wall_ms = elapsed_ms(&start);
    Ok(stats)
}

/// One symmetric Gauss-Seidel sweep.
pub fn sgs_sweep(
    field: &Field,
    rhs: Option<&[MomentCoeffs]>,
    spec: &ProblemSpec,
    cfg: &NewtonConfig,
) -> Result<(Field, SweepStats)> {
    let mut out = field.clone();
    let stats = sweep_in_place(&mut out, rhs, spec, cfg)?;
    Ok((out, stats))
}

/// Uniform rescaling to `initial_mass`.
pub fn mass_correction(field: &Field, initial_mass: f64) -> Result<Field> {
    let mass = field.total_mass();
    if !(mass > 0.0) {
        return Err(Error::NonPositiveDensity(mass));
    }
    if !(initial_mass > 0.0) {
        return Err(Error::InvalidParameter(format!("target mass {initial_mass}")));
    }
    let mut out = field.clone();
    if mass != initial_mass {
        let factor = initial_mass / mass;
        for c in out.cells_mut() {
            c.scale(factor);
        }
    }
    Ok(out)
}

/// Repeats sweeps (and the mass correction, if enabled) until the global
/// residual drops to `opts.tol`.
pub fn single_grid_solve(
    field: &Field,
    rhs: Option<&[MomentCoeffs]>,
    spec: &ProblemSpec,
    cfg: &NewtonConfig,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut current = field.clone();
    let mass = current.total_mass();
    let r0 = residual_norm(&current, spec, rhs)?;
    let mut history = vec![ConvergenceRecord {
        iter: 0,
        residual: r0,
        sweeps: 0,
        newton_steps: 0,
        wall_ms: elapsed_ms(&start),
        work: 0.0,
    }];
    if r0 <= opts.tol {
        return Ok(SolveReport {
            field: current,
            history,
            status: SolveStatus::Converged,
        });
    }
    let mut steps = 0;
    let mut status = SolveStatus::MaxIterations;
    for iter in 1..=opts.max_iters {
        let mut next = current.clone();
        let outcome = sweep_in_place(&mut next, rhs, spec, cfg).and_then(|stats| {
            if opts.correct_mass {
                next = mass_correction(&next, mass)?;
            }
            let r = residual_norm(&next, spec, rhs)?;
            Ok((stats, r))
        });
        let (stats, r) = match outcome {
            Ok(v) => v,
            Err(e) => {
                status = SolveStatus::Diverged(e.to_string());
                break;
            }
        };
        current = next;
        steps += stats.newton_steps;
        history.push(ConvergenceRecord {
            iter,
            residual: r,
            sweeps: iter,
            newton_steps: steps,
            wall_ms: elapsed_ms(&start),
            work: iter as f64 * opts.work_per_sweep,
        });
        if !r.is_finite() || r > opts.divergence_factor * r0 {
            status = SolveStatus::Diverged(
                Error::Diverged {
                    residual: r,
                    limit: opts.divergence_factor * r0,
                }
                .to_string(),
            );
            break;
        }
        if r <= opts.tol {
            status = SolveStatus::Converged;
            break;
        }
    }
    Ok(SolveReport {
        field: current,
        history,
        status,
    })
}

/// `cfl · min_i min(Δx_i / (|u₁| + c_M √θ), 1/ν)`.
pub fn stable_time_step(field: &Field, spec: &ProblemSpec, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!("CFL number {cfl} outside (0, 1]")));
    }
    let c = field.cell(0).space().max_speed();
    let mut dt = f64::INFINITY;
    for (i, f) in field.cells().iter().enumerate() {
        let a = f.anchor();
        let speed = a.u[0].abs() + c * a.theta.sqrt();
        let nu = frequency_unchecked(&spec.gas, f.density(), a.theta);
        dt = dt.min(field.grid().dx(i) / speed).min(1.0 / nu);
    }
    Ok(cfl * dt)
}

fn explicit_update(field: &Field, residual: &[MomentCoeffs], dt: f64) -> Result<Field> {
    let mut out = field.clone();
    for (i, (cell, r)) in out.cells_mut().iter_mut().zip(residual).enumerate() {
        let mut g = cell.clone();
        g.axpy(dt, r);
        *cell = g.to_compliant().map_err(|e| with_cell(e, i))?;
    }
    Ok(out)
}

/// Forward-Euler step `f ← f − Δt R(f)` followed by re-anchoring.
pub fn pseudo_time_step(field: &Field, spec: &ProblemSpec, cfl: f64) -> Result<Field> {
    let dt = stable_time_step(field, spec, cfl)?;
    let residual = assemble_residual(field, spec, None)?;
    explicit_update(field, &residual, dt)
}

/// Explicit pseudo-time marching to a steady state; one step counts as one unit of work.
pub fn pseudo_time_solve(field: &Field, spec: &ProblemSpec, cfl: f64, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let mut current = field.clone();
    let mass = current.total_mass();
    let mut history = Vec::new();
    let mut status = SolveStatus::MaxIterations;
    let mut r0 = f64::NAN;
    for iter in 0..=opts.max_iters {
        let residual = match assemble_residual(&current, spec, None) {
            Ok(r) => r,
            Err(e) => {
                status = SolveStatus::Diverged(e.to_string());
                break;
            }
        };
        let r = global_norm(&residual, current.grid())?;
        if iter == 0 {
            r0 = r;
        }
        history.push(ConvergenceRecord {
            iter,
            residual: r,
            sweeps: iter,
            newton_steps: 0,
            wall_ms: elapsed_ms(&start),
            work: iter as f64 * opts.work_per_sweep,
        });
        if r <= opts.tol {
            status = SolveStatus::Converged;
            break;
        }
        if !r.is_finite() || r > opts.divergence_factor * r0 {
            status = SolveStatus::Diverged(format!("residual {r}"));
            break;
        }
        if iter == opts.max_iters {
            break;
        }
        let step = stable_time_step(&current, spec, cfl).and_then(|dt| explicit_update(&current, &residual, dt));
        current = match step {
            Ok(f) if opts.correct_mass => mass_correction(&f, mass)?,
            Ok(f) => f,
            Err(e) => {
                status = SolveStatus::Diverged(e.to_string());
                break;
            }
        };
    }
    Ok(SolveReport {
        field: current,
        history,
        status,
    })
}
