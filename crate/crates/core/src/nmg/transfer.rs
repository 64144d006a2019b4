//! Grid transfer: conservative restriction of solutions and residuals, and
//! the additive coarse-grid correction.

use crate::basis::{project, BasisAnchor, MomentCoeffs};
use crate::discretization::{Field, Grid1D};
use crate::error::{Error, Result};

fn check_pair(fine: &Grid1D, coarse: &Grid1D) -> Result<()> {
    let n = coarse.n_cells();
    if fine.n_cells() != 2 * n {
        return Err(Error::InvalidGrid(format!(
            "{} fine cells cannot restrict to {n}",
            fine.n_cells()
        )));
    }
    for i in 0..=n {
        if fine.nodes()[2 * i] != coarse.nodes()[i] {
            return Err(Error::InvalidGrid(
                "coarse nodes must coincide with even fine nodes".into(),
            ));
        }
    }
    Ok(())
}

/// Coarse anchor from the mass, momentum and energy of two fine cells.
fn merged_anchor(a: &MomentCoeffs, dxa: f64, b: &MomentCoeffs, dxb: f64) -> Result<BasisAnchor> {
    let dx = dxa + dxb;
    let mut mass = 0.0;
    let mut momentum = [0.0; 3];
    let mut energy = 0.0;
    for (f, w) in [(a, dxa), (b, dxb)] {
        let s = f.conserved();
        mass += w * s.rho;
        let speed2: f64 = s.u.iter().map(|v| v * v).sum();
        for d in 0..3 {
            momentum[d] += w * s.rho * s.u[d];
        }
        energy += w * s.rho * (0.5 * speed2 + 1.5 * s.theta);
    }
    let rho = mass / dx;
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    let u = momentum.map(|p| p / mass);
    let speed2: f64 = u.iter().map(|v| v * v).sum();
    let theta = (2.0 * energy / dx - rho * speed2) / (3.0 * rho);
    if !(theta > 0.0) {
        return Err(Error::NonPositiveTemperature(theta));
    }
    BasisAnchor::new(u, theta, a.order())
}

fn weighted_average(anchor: &BasisAnchor, a: &MomentCoeffs, dxa: f64, b: &MomentCoeffs, dxb: f64) -> MomentCoeffs {
    let dx = dxa + dxb;
    let mut out = MomentCoeffs::zeros(*anchor);
    out.axpy(dxa / dx, &project(a, anchor));
    out.axpy(dxb / dx, &project(b, anchor));
    out
}

/// Δx-weighted average of each pair of fine cells, both projected into the
/// anchor fixed by the pair's conserved quantities.
pub fn restrict_field(fine: &Field, coarse_grid: &Grid1D) -> Result<Field> {
    check_pair(fine.grid(), coarse_grid)?;
    let g = fine.grid();
    let cells = (0..coarse_grid.n_cells())
        .map(|i| {
            let (a, b) = (fine.cell(2 * i), fine.cell(2 * i + 1));
            let (dxa, dxb) = (g.dx(2 * i), g.dx(2 * i + 1));
            let anchor = merged_anchor(a, dxa, b, dxb)?;
            let mut avg = weighted_average(&anchor, a, dxa, b, dxb);
            avg.enforce_compliance();
            Ok(avg)
        })
        .collect::<Result<Vec<_>>>()?;
    Field::new(coarse_grid.clone(), cells)
}

/// Same averaging rule for residuals, into the given coarse anchors.
pub fn restrict_residual(residual: &[MomentCoeffs], fine_grid: &Grid1D, coarse: &Field) -> Result<Vec<MomentCoeffs>> {
    check_pair(fine_grid, coarse.grid())?;
    if residual.len() != fine_grid.n_cells() {
        return Err(Error::InvalidParameter(
            "residual count differs from the fine grid".into(),
        ));
    }
    Ok((0..coarse.n_cells())
        .map(|i| {
            weighted_average(
                coarse.cell(i).anchor(),
                &residual[2 * i],
                fine_grid.dx(2 * i),
                &residual[2 * i + 1],
                fine_grid.dx(2 * i + 1),
            )
        })
        .collect())
}

/// `f̂_h = f̄_h + (f̃_H − f̄_H)` per fine cell, added in the fine cell's
/// anchor and then re-anchored. A coarse change that would break the
/// positivity floors is halved up to ten times, then dropped.
pub fn prolong_correct(
    fine: &Field,
    restricted: &Field,
    solved: &Field,
    rho_floor: f64,
    theta_floor: f64,
) -> Result<Field> {
    check_pair(fine.grid(), restricted.grid())?;
    if restricted.grid() != solved.grid() {
        return Err(Error::InvalidGrid("coarse fields live on different grids".into()));
    }
    let mut out = fine.clone();
    for (j, cell) in out.cells_mut().iter_mut().enumerate() {
        let base = fine.cell(j);
        let anchor = base.anchor();
        let mut change = project(solved.cell(j / 2), anchor);
        change.axpy(-1.0, &project(restricted.cell(j / 2), anchor));
        let mut weight = 1.0;
        let mut accepted = None;
        for _ in 0..=10 {
            let mut trial = base.clone();
            trial.axpy(weight, &change);
            let s = trial.conserved();
            if s.rho >= rho_floor && s.theta >= theta_floor {
                if let Ok(c) = trial.to_compliant() {
                    accepted = Some(c);
                    break;
                }
            }
            weight *= 0.5;
        }
        *cell = accepted.unwrap_or_else(|| base.clone());
    }
    Ok(out)
}
