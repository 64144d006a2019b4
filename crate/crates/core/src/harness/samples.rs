//! Seeded random compliant states for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{maxwellian, MomentCoeffs};
use crate::discretization::{Field, Grid1D};
use crate::error::Result;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ranges of [`random_compliant`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleRanges {
    pub rho: (f64, f64),
    pub theta: (f64, f64),
    /// Bound on `|u|`.
    pub speed: f64,
    /// Bound on `|σ_ij| / (ρθ)`.
    pub stress: f64,
    /// Bound on `|f_α| / (ρ θ^{|α|/2})` for `|α| ≥ 3`.
    pub higher: f64,
}

impl Default for SampleRanges {
    fn default() -> Self {
        SampleRanges {
            rho: (0.5, 2.0),
            theta: (0.5, 2.0),
            speed: 2.0,
            stress: 0.3,
            higher: 0.02,
        }
    }
}

/// A compliant expansion of order `order` with random macroscopic state,
/// stress and higher coefficients.
pub fn random_compliant<R: Rng>(rng: &mut R, order: usize, r: &SampleRanges) -> Result<MomentCoeffs> {
    let rho = rng.gen_range(r.rho.0..=r.rho.1);
    let theta = rng.gen_range(r.theta.0..=r.theta.1);
    let mut u = [0.0; 3];
    loop {
        for v in &mut u {
            *v = rng.gen_range(-r.speed..=r.speed);
        }
        if u.iter().map(|v| v * v).sum::<f64>() <= r.speed * r.speed {
            break;
        }
    }
    let mut f = maxwellian(rho, u, theta, order)?;
    let space = f.space();
    let values = f.values_mut();
    for (k, a) in space.indices().iter().enumerate() {
        let deg = a.degree();
        if deg == 2 {
            // σ_ij = (1 + δ_ij) f_{e_i + e_j}
            let diagonal = a.0.contains(&2);
            let bound = if diagonal { 0.5 } else { 1.0 } * r.stress * rho * theta;
            values[k] = rng.gen_range(-bound..=bound);
        } else if deg >= 3 {
            let bound = r.higher * rho * theta.powf(deg as f64 / 2.0);
            values[k] = rng.gen_range(-bound..=bound);
        }
    }
    // the traceless projection can double the trace component; halve it back into range
    let (i1, i2) = (space.double(0), space.double(1));
    if (values[i1] + values[i2]).abs() > 0.5 * r.stress * rho * theta {
        values[i1] *= 0.5;
        values[i2] *= 0.5;
    }
    f.enforce_compliance();
    f.set_compliant(true);
    Ok(f)
}

/// Random direction with entries scaled like `ρ θ^{|α|/2}`.
pub fn random_direction<R: Rng>(rng: &mut R, f: &MomentCoeffs, scale: f64) -> Vec<f64> {
    let (rho, theta) = (f.density(), f.anchor().theta);
    f.space()
        .indices()
        .iter()
        .map(|a| scale * rho * theta.powf(a.degree() as f64 / 2.0) * rng.gen_range(-1.0..=1.0))
        .collect()
}

pub fn random_field<R: Rng>(rng: &mut R, grid: Grid1D, order: usize, r: &SampleRanges) -> Result<Field> {
    let cells = (0..grid.n_cells())
        .map(|_| random_compliant(rng, order, r))
        .collect::<Result<Vec<_>>>()?;
    Field::new(grid, cells)
}
