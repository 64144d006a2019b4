//! Maxwell walls realized through ghost cells.
//!
//! The ghost state is a diffuse–specular mixture: `χ` times a wall Maxwellian
//! plus `1 − χ` times the mirror image of the boundary cell. The mirror image
//! emits exactly what it receives, and the density of the Maxwellian is fixed
//! so that its emitted half-range mass flux equals the half-range flux the
//! boundary cell sends into the wall. Half-range integrals use
//! `∫_{−∞}^{c} He_n(v) e^{−v²/2} dv = −He_{n−1}(c) e^{−c²/2}` for `n ≥ 1`.

use crate::basis::{hermite_value, maxwellian, project, BasisAnchor, IndexSpace, MomentCoeffs};
use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Wall temperature, tangential velocity and accommodation coefficient `χ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WallSpec {
    pub theta: f64,
    pub u: [f64; 3],
    pub accommodation: f64,
}

impl WallSpec {
    pub fn new(theta: f64, u: [f64; 3], accommodation: f64) -> Result<Self> {
        let wall = WallSpec {
            theta,
            u,
            accommodation,
        };
        wall.validate()?;
        Ok(wall)
    }

    /// Fully diffusive wall.
    pub fn diffuse(theta: f64, u: [f64; 3]) -> Result<Self> {
        Self::new(theta, u, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidWall(format!("temperature {}", self.theta)));
        }
        if self.u[0] != 0.0 || self.u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWall("velocity must be finite and tangential".into()));
        }
        if !(0.0..=1.0).contains(&self.accommodation) {
            return Err(Error::InvalidWall(format!("accommodation {}", self.accommodation)));
        }
        Ok(())
    }

    pub fn anchor(&self, order: usize) -> Result<BasisAnchor> {
        BasisAnchor::new(self.u, self.theta, order)
    }
}

/// `∫_{ξ₁<0} φ_n(ξ₁) dξ₁` for `n ≤ top` (one-dimensional factor, anchor `(u₁, θ)`).
fn lower_half_integrals(top: usize, u1: f64, theta: f64) -> Vec<f64> {
    let c = -u1 / theta.sqrt();
    let gauss = (-0.5 * c * c).exp() / SQRT_2PI;
    (0..=top)
        .map(|n| {
            if n == 0 {
                0.5 * libm::erfc(-c / std::f64::consts::SQRT_2)
            } else {
                -theta.powf(-(n as f64) / 2.0) * hermite_value(n - 1, c) * gauss
            }
        })
        .collect()
}

/// Mass flux carried towards the wall on `side`:
/// `∫_{ξ₁<0} |ξ₁| f` at a left wall, `∫_{ξ₁>0} ξ₁ f` at a right wall.
pub(crate) fn incident_flux(space: &IndexSpace, anchor: &BasisAnchor, values: &[f64], side: Side) -> f64 {
    let order = space.order();
    let (u1, theta) = match side {
        Side::Left => (anchor.u[0], anchor.theta),
        Side::Right => (-anchor.u[0], anchor.theta),
    };
    let j = lower_half_integrals(order + 1, u1, theta);
    let mut flux = 0.0;
    for n in 0..=order {
        let mut a = values[space.offset3(n, 0, 0)];
        if side == Side::Right && n % 2 == 1 {
            a = -a;
        }
        let mut moment = theta * j[n + 1] + u1 * j[n];
        if n > 0 {
            moment += n as f64 * j[n - 1];
        }
        flux -= a * moment;
    }
    flux
}

/// Half-range mass flux of `f` towards the wall on `side`.
pub fn incident_mass_flux(f: &MomentCoeffs, side: Side) -> f64 {
    incident_flux(f.space(), f.anchor(), f.values(), side)
}

/// Half-range mass flux of `f` away from the wall on `side`, into the domain.
pub fn emitted_mass_flux(f: &MomentCoeffs, side: Side) -> f64 {
    incident_flux(f.space(), f.anchor(), f.values(), opposite(side))
}

fn opposite(side: Side) -> Side {
    match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

/// `√(θ_W / 2π)`: emitted flux of a unit-density wall Maxwellian.
pub(crate) fn unit_emission(wall: &WallSpec) -> f64 {
    (wall.theta / (2.0 * std::f64::consts::PI)).sqrt()
}

/// Density of the diffuse part: the wall re-emits exactly what `f_b` sends in.
pub fn wall_density(f_b: &MomentCoeffs, wall: &WallSpec, side: Side) -> f64 {
    incident_mass_flux(f_b, side) / unit_emission(wall)
}

/// Ghost state in the wall anchor, before re-anchoring:
/// `χ·M[ρ_w, u^W, θ^W] + (1 − χ)·mirror(f_b)`.
pub fn wall_emission(f_b: &MomentCoeffs, wall: &WallSpec, side: Side) -> Result<MomentCoeffs> {
    wall.validate()?;
    let anchor = wall.anchor(f_b.order())?;
    let chi = wall.accommodation;
    let mut ghost = MomentCoeffs::zeros(anchor);
    if chi < 1.0 {
        ghost.axpy(1.0 - chi, &project(&f_b.mirrored(), &anchor));
    }
    if chi > 0.0 {
        ghost.values_mut()[0] += chi * wall_density(f_b, wall, side);
    }
    Ok(ghost)
}

/// Compliant ghost-cell state encoding the Maxwell wall on `side`.
pub fn ghost_distribution(f_b: &MomentCoeffs, wall: &WallSpec, side: Side) -> Result<MomentCoeffs> {
    wall.validate()?;
    let chi = wall.accommodation;
    if chi == 0.0 {
        let mut g = f_b.mirrored();
        g.set_compliant(f_b.is_compliant());
        return if g.is_compliant() { Ok(g) } else { g.to_compliant() };
    }
    if chi == 1.0 {
        return maxwellian(wall_density(f_b, wall, side), wall.u, wall.theta, f_b.order());
    }
    wall_emission(f_b, wall, side)?.to_compliant()
}
