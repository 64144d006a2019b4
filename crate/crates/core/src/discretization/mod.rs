//! Finite-volume discretization of the steady moment system in one space dimension.

mod flux;
mod grid;
mod residual;
mod wall;

pub use flux::hll_flux;
pub use grid::{asinh_grid, uniform_grid, Grid1D};
pub use residual::{
    assemble_residual, cell_residual, global_norm, local_norm, residual_norm, Field, Neighbor, ProblemSpec,
};
pub(crate) use residual::{local_norm_values, neighbors, with_cell, LocalOperator};
pub use wall::{
    emitted_mass_flux, ghost_distribution, incident_mass_flux, wall_density, wall_emission, Side, WallSpec,
};
