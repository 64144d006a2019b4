//! Local Newton iteration for one cell with its neighbours frozen.

use nalgebra::{DMatrix, DVector};

use super::NewtonConfig;
use crate::basis::MomentCoeffs;
use crate::discretization::{local_norm_values, LocalOperator, Neighbor, ProblemSpec};
use crate::error::{Error, Result};

/// Outcome counters of one local solve.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NewtonOutcome {
    pub steps: usize,
    pub clipped: usize,
    pub singular: bool,
    pub initial_residual: f64,
}

/// Forward-difference perturbation of coefficient `k`.
#[inline]
fn step_size(cfg: &NewtonConfig, value: f64, rho: f64, theta: f64, degree: usize) -> f64 {
    let floor = cfg.delta_floor * rho * theta.powf(degree as f64 / 2.0);
    f64::EPSILON.sqrt() * value.abs().max(floor)
}

/// `J = ∂R/∂f` column by column, `base` being `r − R(f)`.
pub(crate) fn jacobian_into(
    op: &mut LocalOperator<'_>,
    f: &[f64],
    base: &[f64],
    cfg: &NewtonConfig,
    jac: &mut DMatrix<f64>,
) -> Result<()> {
    let space = op.space();
    let theta = op.anchor().theta;
    let rho = f[0];
    let n = f.len();
    let mut probe = f.to_vec();
    let mut col = vec![0.0; n];
    for k in 0..n {
        let h = step_size(cfg, f[k], rho, theta, space.degree(k));
        let shifted = f[k] + h;
        let h = shifted - f[k];
        if h == 0.0 {
            return Err(Error::InvalidParameter(format!("perturbation underflow in column {k}")));
        }
        probe[k] = shifted;
        op.evaluate(&probe, &mut col)?;
        probe[k] = f[k];
        let inv = 1.0 / h;
        for (j, (c, b)) in col.iter().zip(base).enumerate() {
            jac[(j, k)] = (b - c) * inv;
        }
    }
    Ok(())
}

/// Forward-difference Jacobian `∂R_i/∂f_i` in the anchor of `f`.
pub fn numerical_jacobian(
    left: Neighbor<'_>,
    f: &MomentCoeffs,
    right: Neighbor<'_>,
    dx: f64,
    spec: &ProblemSpec,
    cfg: &NewtonConfig,
) -> Result<DMatrix<f64>> {
    let mut op = LocalOperator::new(spec, *f.anchor(), left, right, dx, None)?;
    let n = f.values().len();
    let mut base = vec![0.0; n];
    op.evaluate(f.values(), &mut base)?;
    let mut jac = DMatrix::zeros(n, n);
    jacobian_into(&mut op, f.values(), &base, cfg, &mut jac)?;
    Ok(jac)
}

/// Solves `(λ‖R̃‖ I + J) Δf = R̃` by LU with partial pivoting.
pub fn regularized_solve(jac: &DMatrix<f64>, rhs: &[f64], lambda: f64, norm: f64) -> Result<Vec<f64>> {
    let n = rhs.len();
    if jac.nrows() != n || jac.ncols() != n {
        return Err(Error::InvalidParameter("Jacobian and residual sizes differ".into()));
    }
    let mut a = jac.clone();
    let shift = lambda * norm;
    for i in 0..n {
        a[(i, i)] += shift;
    }
    let b = DVector::from_column_slice(rhs);
    let x = a.lu().solve(&b).ok_or(Error::SingularJacobian)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularJacobian);
    }
    Ok(x.as_slice().to_vec())
}

/// Density and temperature of `f + τ Δf` for a compliant `f`.
pub fn relaxed_state(f: &MomentCoeffs, df: &[f64], tau: f64) -> (f64, f64) {
    let space = f.space();
    let rho = f.values()[0] + tau * df[0];
    let kinetic: f64 = (0..3).map(|d| (tau * df[space.unit(d)]).powi(2)).sum();
    let trace = tau * ((df[space.double(0)] + df[space.double(1)]) + df[space.double(2)]);
    let theta = f.anchor().theta + (2.0 * trace - kinetic / rho) / (3.0 * rho);
    (rho, theta)
}

/// Smallest positive root of `a τ² + b τ + c` given `c < 0`, or `∞`.
fn first_positive_root(a: f64, b: f64, c: f64) -> f64 {
    if a == 0.0 {
        return if b > 0.0 { -c / b } else { f64::INFINITY };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return f64::INFINITY;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut best = f64::INFINITY;
    for r in [q / a, if q != 0.0 { c / q } else { f64::INFINITY }] {
        if r > 0.0 && r < best {
            best = r;
        }
    }
    best
}

/// Largest step `τ̂` keeping `ρ ≥ ρ̄` and `θ ≥ θ̄` along `f + τΔf`, capped at 1.
pub fn max_relaxation(f: &MomentCoeffs, df: &[f64], rho_floor: f64, theta_floor: f64) -> Result<f64> {
    let space = f.space();
    let f0 = f.values()[0];
    let gap = f.anchor().theta - theta_floor;
    if !(f0 > rho_floor) {
        return Err(Error::Infeasible(format!(
            "density {f0} at or below the floor {rho_floor}"
        )));
    }
    if !(gap > 0.0) {
        return Err(Error::Infeasible(format!(
            "temperature {} at or below the floor {theta_floor}",
            f.anchor().theta
        )));
    }
    let d0 = df[0];
    let tau_rho = if d0 < 0.0 { (rho_floor - f0) / d0 } else { f64::INFINITY };
    let s = (df[space.double(0)] + df[space.double(1)]) + df[space.double(2)];
    let e: f64 = (0..3).map(|d| df[space.unit(d)].powi(2)).sum();
    let a = e - 2.0 * s * d0 - 3.0 * gap * d0 * d0;
    let b = -2.0 * f0 * (s + 3.0 * gap * d0);
    let c = -3.0 * f0 * f0 * gap;
    let tau_theta = first_positive_root(a, b, c);
    Ok(tau_rho.min(tau_theta).min(1.0))
}

/// Regularized, positivity-limited Newton iteration on one cell; `rhs` is the cell's right-hand side, if any.
#[allow(clippy::too_many_arguments)]
pub fn local_newton(
    f: &MomentCoeffs,
    left: Neighbor<'_>,
    right: Neighbor<'_>,
    dx: f64,
    rhs: Option<&MomentCoeffs>,
    spec: &ProblemSpec,
    cfg: &NewtonConfig,
) -> Result<(MomentCoeffs, NewtonOutcome)> {
    let mut current = f.to_compliant()?;
    let n = current.values().len();
    let mut outcome = NewtonOutcome::default();
    let mut rt = vec![0.0; n];
    let mut jac = DMatrix::zeros(n, n);
    let mut initial: Option<f64> = None;
    for step in 0..cfg.max_steps {
        let mut op = LocalOperator::new(spec, *current.anchor(), left, right, dx, rhs)?;
        op.evaluate(current.values(), &mut rt)?;
        let norm = local_norm_values(op.space(), current.anchor().theta, &rt);
        let first = *initial.get_or_insert(norm);
        if norm <= cfg.tol || (cfg.halving_stop && step > 0 && norm <= 0.5 * first) {
            break;
        }
        jacobian_into(&mut op, current.values(), &rt, cfg, &mut jac)?;
        let delta = match regularized_solve(&jac, &rt, cfg.lambda, norm) {
            Ok(d) => d,
            Err(Error::SingularJacobian) => {
                outcome.singular = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let tau = max_relaxation(&current, &delta, cfg.rho_floor, cfg.theta_floor)?;
        if tau < 1.0 {
            outcome.clipped += 1;
        }
        let mut next = current.clone();
        for (v, d) in next.values_mut().iter_mut().zip(&delta) {
            *v += tau * d;
        }
        current = next.to_compliant()?;
        outcome.steps += 1;
    }
    outcome.initial_residual = initial.unwrap_or(0.0);
    Ok((current, outcome))
}
