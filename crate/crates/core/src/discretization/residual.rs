//! Per-cell steady residual, its assembly over a field, and the residual norms.

use super::flux::{hll_combine, wave_speeds};
use super::grid::Grid1D;
use super::wall::{incident_flux, unit_emission, Side, WallSpec};
use crate::basis::{
    conserved_of, macro_from_coeffs, maxwellian, project, stream_into, BasisAnchor, ConservedState, IndexSpace,
    MacroState, MomentCoeffs, Projector,
};
use crate::closure::{es_values, es_values_shifted, force_into, frequency_unchecked, stress, ExternalForce, GasModel};
use crate::error::{Error, Result};

/// Gas, force, walls and moment order of a steady problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemSpec {
    pub gas: GasModel,
    pub force: ExternalForce,
    pub left_wall: WallSpec,
    pub right_wall: WallSpec,
    pub order: usize,
}

impl ProblemSpec {
    pub fn new(
        gas: GasModel,
        force: ExternalForce,
        left_wall: WallSpec,
        right_wall: WallSpec,
        order: usize,
    ) -> Result<Self> {
        BasisAnchor::new([0.0; 3], 1.0, order)?;
        left_wall.validate()?;
        right_wall.validate()?;
        if force.0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("force must be finite".into()));
        }
        Ok(ProblemSpec {
            gas,
            force,
            left_wall,
            right_wall,
            order,
        })
    }

    pub fn wall(&self, side: Side) -> &WallSpec {
        match side {
            Side::Left => &self.left_wall,
            Side::Right => &self.right_wall,
        }
    }
}

/// Compliant per-cell expansions over a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid1D,
    cells: Vec<MomentCoeffs>,
}

impl Field {
    pub fn new(grid: Grid1D, cells: Vec<MomentCoeffs>) -> Result<Self> {
        if cells.len() != grid.n_cells() {
            return Err(Error::InvalidGrid(format!(
                "{} cells for a grid of {}",
                cells.len(),
                grid.n_cells()
            )));
        }
        let order = cells[0].order();
        for c in &cells {
            if c.order() != order {
                return Err(Error::OrderMismatch(c.order(), order));
            }
            if !c.is_compliant() {
                return Err(Error::NotCompliant);
            }
        }
        Ok(Field { grid, cells })
    }

    /// Every cell set to the same Maxwellian.
    pub fn equilibrium(grid: Grid1D, rho: f64, u: [f64; 3], theta: f64, order: usize) -> Result<Self> {
        let cell = maxwellian(rho, u, theta, order)?;
        let cells = vec![cell; grid.n_cells()];
        Ok(Field { grid, cells })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn cells(&self) -> &[MomentCoeffs] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [MomentCoeffs] {
        &mut self.cells
    }

    pub fn cell(&self, i: usize) -> &MomentCoeffs {
        &self.cells[i]
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn order(&self) -> usize {
        self.cells[0].order()
    }

    /// `Σ ρ_i Δx_i`.
    pub fn total_mass(&self) -> f64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| c.density() * self.grid.dx(i))
            .sum()
    }

    pub fn macro_states(&self) -> Result<Vec<MacroState>> {
        self.cells.iter().map(macro_from_coeffs).collect()
    }
}

/// What sits across an interface from the cell being evaluated.
#[derive(Clone, Copy, Debug)]
pub enum Neighbor<'a> {
    Cell(&'a MomentCoeffs),
    Wall(&'a WallSpec),
}

fn checked(state: ConservedState) -> Result<ConservedState> {
    if !(state.rho > 0.0) {
        return Err(Error::NonPositiveDensity(state.rho));
    }
    if !(state.theta > 0.0) {
        return Err(Error::NonPositiveTemperature(state.theta));
    }
    Ok(state)
}

enum Face {
    Cell {
        values: Vec<f64>,
        stream: Vec<f64>,
        speeds: (f64, f64),
    },
    Wall {
        side: Side,
        chi: f64,
        wall_speeds: (f64, f64),
        emission: f64,
        /// Unit-density wall Maxwellian projected into the frozen anchor.
        unit: Vec<f64>,
        /// Mirror anchor (`u₁ → −u₁`) back into the frozen anchor.
        mirror: Projector,
    },
}

/// Residual map of one cell with its anchor and neighbours frozen.
///
/// `evaluate` returns `r − R(f)` for coefficients `f` given in the frozen
/// anchor; boundary ghosts are rebuilt from `f` on every call.
pub(crate) struct LocalOperator<'a> {
    spec: &'a ProblemSpec,
    space: &'static IndexSpace,
    anchor: BasisAnchor,
    inv_dx: f64,
    left: Face,
    right: Face,
    rhs: Option<Vec<f64>>,
    ghost: Vec<f64>,
    ghost_stream: Vec<f64>,
    mirror: Vec<f64>,
    own_stream: Vec<f64>,
    flux: Vec<f64>,
    work: Vec<f64>,
}

impl<'a> LocalOperator<'a> {
    pub(crate) fn new(
        spec: &'a ProblemSpec,
        anchor: BasisAnchor,
        left: Neighbor<'_>,
        right: Neighbor<'_>,
        dx: f64,
        rhs: Option<&MomentCoeffs>,
    ) -> Result<Self> {
        let space = anchor.space();
        let n = space.len();
        let left = Self::face(&anchor, left, Side::Left)?;
        let right = Self::face(&anchor, right, Side::Right)?;
        let rhs = rhs.map(|r| project(r, &anchor).into_values());
        Ok(LocalOperator {
            spec,
            space,
            anchor,
            inv_dx: 1.0 / dx,
            left,
            right,
            rhs,
            ghost: vec![0.0; n],
            ghost_stream: vec![0.0; n],
            mirror: vec![0.0; n],
            own_stream: vec![0.0; n],
            flux: vec![0.0; n],
            work: vec![0.0; n],
        })
    }

    fn face(anchor: &BasisAnchor, nb: Neighbor<'_>, side: Side) -> Result<Face> {
        let space = anchor.space();
        let c = space.max_speed();
        match nb {
            Neighbor::Cell(g) => {
                let state = checked(g.conserved())?;
                let values = project(g, anchor).into_values();
                let mut stream = vec![0.0; values.len()];
                stream_into(space, anchor, &values, &mut stream);
                Ok(Face::Cell {
                    values,
                    stream,
                    speeds: wave_speeds(&state, c),
                })
            }
            Neighbor::Wall(wall) => {
                wall.validate()?;
                let unit = maxwellian(1.0, wall.u, wall.theta, anchor.order)?;
                let unit = project(&unit, anchor).into_values();
                let mut mirrored = *anchor;
                mirrored.u[0] = -anchor.u[0];
                let wall_state = ConservedState {
                    rho: 1.0,
                    u: wall.u,
                    theta: wall.theta,
                };
                Ok(Face::Wall {
                    side,
                    chi: wall.accommodation,
                    wall_speeds: wave_speeds(&wall_state, c),
                    emission: unit_emission(wall),
                    unit,
                    mirror: Projector::new(&mirrored, anchor),
                })
            }
        }
    }

    pub(crate) fn anchor(&self) -> &BasisAnchor {
        &self.anchor
    }

    pub(crate) fn space(&self) -> &'static IndexSpace {
        self.space
    }

    /// Writes `r − R(f)` into `out`.
    pub(crate) fn evaluate(&mut self, f: &[f64], out: &mut [f64]) -> Result<()> {
        let LocalOperator {
            spec,
            space,
            anchor,
            inv_dx,
            left,
            right,
            rhs,
            ghost,
            ghost_stream,
            mirror: mirror_buf,
            own_stream,
            flux,
            work,
        } = self;
        let space: &IndexSpace = space;
        let anchor = *anchor;
        let c = space.max_speed();
        let own = checked(conserved_of(space, &anchor, f))?;
        let own_speeds = wave_speeds(&own, c);
        stream_into(space, &anchor, f, own_stream);

        out.iter_mut().for_each(|v| *v = 0.0);
        for (side, face) in [(Side::Left, &*left), (Side::Right, &*right)] {
            let (values, stream, speeds): (&[f64], &[f64], (f64, f64)) = match face {
                Face::Cell { values, stream, speeds } => (values, stream, *speeds),
                Face::Wall {
                    side,
                    chi,
                    wall_speeds,
                    emission,
                    unit,
                    mirror,
                } => {
                    let chi = *chi;
                    ghost.iter_mut().for_each(|v| *v = 0.0);
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    if chi < 1.0 {
                        for (k, a) in space.indices().iter().enumerate() {
                            work[k] = if a.0[0] % 2 == 1 { -f[k] } else { f[k] };
                        }
                        mirror.apply_into(work, mirror_buf);
                        for k in 0..ghost.len() {
                            ghost[k] = (1.0 - chi) * mirror_buf[k];
                        }
                        lo = lo.min(-own_speeds.1);
                        hi = hi.max(-own_speeds.0);
                    }
                    if chi > 0.0 {
                        let rho_w = incident_flux(space, &anchor, f, *side) / *emission;
                        for k in 0..ghost.len() {
                            ghost[k] += chi * rho_w * unit[k];
                        }
                        lo = lo.min(wall_speeds.0);
                        hi = hi.max(wall_speeds.1);
                    }
                    stream_into(space, &anchor, ghost, ghost_stream);
                    (&ghost[..], &ghost_stream[..], (lo, hi))
                }
            };
            let is_wall = matches!(face, Face::Wall { .. });
            let sign = match side {
                Side::Left => {
                    hll_combine(speeds, own_speeds, values, stream, f, own_stream, flux);
                    -1.0
                }
                Side::Right => {
                    hll_combine(own_speeds, speeds, f, own_stream, values, stream, flux);
                    1.0
                }
            };
            if is_wall {
                flux[0] = 0.0;
            }
            for k in 0..out.len() {
                out[k] += sign * flux[k];
            }
        }
        for v in out.iter_mut() {
            *v *= *inv_dx;
        }

        // collision term, evaluated in f's own compliant anchor
        let gas = &spec.gas;
        let nu = frequency_unchecked(gas, own.rho, own.theta);
        if own.u == anchor.u && own.theta == anchor.theta {
            let sigma = stress(space, f);
            es_values(space, own.rho, &sigma, gas.prandtl, work);
            for k in 0..out.len() {
                out[k] -= nu * (work[k] - f[k]);
            }
        } else {
            // ES Gaussian expanded directly in the frozen anchor; equal to
            // building it in f's own anchor and projecting back
            let mut sigma = [[0.0; 3]; 3];
            let mut shift = [0.0; 3];
            for i in 0..3 {
                shift[i] = own.u[i] - anchor.u[i];
                for j in 0..3 {
                    let pij = if i == j {
                        2.0 * f[space.double(i)] - own.rho * (own.theta - anchor.theta)
                    } else {
                        let mut e = [0; 3];
                        e[i] += 1;
                        e[j] += 1;
                        f[space.offset3(e[0], e[1], e[2])]
                    };
                    sigma[i][j] = pij - f[space.unit(i)] * f[space.unit(j)] / own.rho;
                }
            }
            es_values_shifted(
                space,
                own.rho,
                shift,
                own.theta - anchor.theta,
                &sigma,
                gas.prandtl,
                work,
            );
            for k in 0..out.len() {
                out[k] -= nu * (work[k] - f[k]);
            }
        }

        if spec.force.0.iter().any(|&v| v != 0.0) {
            force_into(space, &spec.force, f, work);
            for k in 0..out.len() {
                out[k] -= work[k];
            }
        }

        match rhs {
            Some(r) => {
                for k in 0..out.len() {
                    out[k] = r[k] - out[k];
                }
            }
            None => out.iter_mut().for_each(|v| *v = -*v),
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { cell: usize::MAX });
        }
        Ok(())
    }
}

/// `R_i = [F(f_i, f_{i+1}) − F(f_{i−1}, f_i)]/Δx_i − G(f_i) − Q(f_i)` in the anchor of `center`.
pub fn cell_residual(
    left: Neighbor<'_>,
    center: &MomentCoeffs,
    right: Neighbor<'_>,
    dx: f64,
    spec: &ProblemSpec,
) -> Result<MomentCoeffs> {
    if !(dx > 0.0) {
        return Err(Error::InvalidGrid(format!("cell width {dx}")));
    }
    if center.order() != spec.order {
        return Err(Error::OrderMismatch(center.order(), spec.order));
    }
    let mut op = LocalOperator::new(spec, *center.anchor(), left, right, dx, None)?;
    let mut out = vec![0.0; center.values().len()];
    op.evaluate(center.values(), &mut out)?;
    out.iter_mut().for_each(|v| *v = -*v);
    MomentCoeffs::from_values(*center.anchor(), out)
}

pub(crate) fn neighbors<'a>(
    cells: &'a [MomentCoeffs],
    i: usize,
    spec: &'a ProblemSpec,
) -> (Neighbor<'a>, Neighbor<'a>) {
    let left = if i == 0 {
        Neighbor::Wall(&spec.left_wall)
    } else {
        Neighbor::Cell(&cells[i - 1])
    };
    let right = if i + 1 == cells.len() {
        Neighbor::Wall(&spec.right_wall)
    } else {
        Neighbor::Cell(&cells[i + 1])
    };
    (left, right)
}

/// `R̃_i = r_i − R_i` for every cell, each in its cell's anchor; `rhs = None` means `r ≡ 0`.
pub fn assemble_residual(field: &Field, spec: &ProblemSpec, rhs: Option<&[MomentCoeffs]>) -> Result<Vec<MomentCoeffs>> {
    if field.order() != spec.order {
        return Err(Error::OrderMismatch(field.order(), spec.order));
    }
    if let Some(r) = rhs {
        if r.len() != field.n_cells() {
            return Err(Error::InvalidParameter("rhs length differs from the field".into()));
        }
    }
    let cells = field.cells();
    let mut out = Vec::with_capacity(cells.len());
    for (i, f) in cells.iter().enumerate() {
        let (left, right) = neighbors(cells, i, spec);
        let mut op = LocalOperator::new(spec, *f.anchor(), left, right, field.grid().dx(i), rhs.map(|r| &r[i]))?;
        let mut values = vec![0.0; f.values().len()];
        op.evaluate(f.values(), &mut values).map_err(|e| with_cell(e, i))?;
        out.push(MomentCoeffs::from_values(*f.anchor(), values)?);
    }
    Ok(out)
}

pub(crate) fn with_cell(e: Error, i: usize) -> Error {
    match e {
        Error::NonFinite { .. } => Error::NonFinite { cell: i },
        other => other,
    }
}

/// `√(Σ_α C_α g_α²)` with `C_α = (2π)^{−3/2} θ^{−|α|−3} α!` for a slice in an anchor of temperature `θ`.
pub(crate) fn local_norm_values(space: &IndexSpace, theta: f64, values: &[f64]) -> f64 {
    let inv = 1.0 / theta;
    let mut scale = (2.0 * std::f64::consts::PI).powf(-1.5) * inv.powi(3);
    let mut acc = 0.0;
    let mut k = 0;
    for deg in 0..=space.order() {
        let mut part = 0.0;
        while k < space.len() && space.degree(k) == deg {
            part += space.factorial(k) * values[k] * values[k];
            k += 1;
        }
        acc += scale * part;
        scale *= inv;
    }
    acc.sqrt()
}

pub fn local_norm(r: &MomentCoeffs) -> f64 {
    local_norm_values(r.space(), r.anchor().theta, r.values())
}

/// `√(Σ_i ‖R_i‖² Δx_i)`.
pub fn global_norm(residuals: &[MomentCoeffs], grid: &Grid1D) -> Result<f64> {
    if residuals.len() != grid.n_cells() {
        return Err(Error::InvalidParameter("residual count differs from the grid".into()));
    }
    Ok(residuals
        .iter()
        .enumerate()
        .map(|(i, r)| local_norm(r).powi(2) * grid.dx(i))
        .sum::<f64>()
        .sqrt())
}

/// Global norm of `r − R(field)`.
pub fn residual_norm(field: &Field, spec: &ProblemSpec, rhs: Option<&[MomentCoeffs]>) -> Result<f64> {
    let r = assemble_residual(field, spec, rhs)?;
    global_norm(&r, field.grid())
}
