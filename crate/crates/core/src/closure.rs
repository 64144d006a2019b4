//! ES-BGK source terms: the Gaussian closure `f^ES`, collision frequency
//! laws, and the collision and external-force coefficient vectors.

use crate::basis::{macro_from_coeffs, IndexSpace, MomentCoeffs, MultiIndex};
use crate::error::{Error, Result};

/// Temperature dependence of the collision frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrequencyLaw {
    /// `ν = √(π/2) (Pr/Kn) ρ θ^{1−w}` (viscosity `∝ θ^w`).
    PowerLaw { w: f64 },
    /// `ν = (16/5) √(θ/2π) (Pr/Kn) ρ`.
    HardSphere,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasModel {
    pub prandtl: f64,
    pub knudsen: f64,
    pub law: FrequencyLaw,
}

impl GasModel {
    pub fn new(prandtl: f64, knudsen: f64, law: FrequencyLaw) -> Result<Self> {
        if !(prandtl > 0.0 && prandtl.is_finite()) {
            return Err(Error::InvalidParameter(format!("Prandtl number {prandtl}")));
        }
        if !(knudsen > 0.0 && knudsen.is_finite()) {
            return Err(Error::InvalidParameter(format!("Knudsen number {knudsen}")));
        }
        Ok(GasModel { prandtl, knudsen, law })
    }

    pub fn frequency(&self, rho: f64, theta: f64) -> Result<f64> {
        collision_frequency(self, rho, theta)
    }
}

/// Constant acceleration acting on the particles.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ExternalForce(pub [f64; 3]);

pub fn collision_frequency(model: &GasModel, rho: f64, theta: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    if !(theta > 0.0) {
        return Err(Error::NonPositiveTemperature(theta));
    }
    Ok(frequency_unchecked(model, rho, theta))
}

#[inline]
pub(crate) fn frequency_unchecked(model: &GasModel, rho: f64, theta: f64) -> f64 {
    let ratio = model.prandtl / model.knudsen;
    match model.law {
        FrequencyLaw::PowerLaw { w } => (std::f64::consts::PI / 2.0).sqrt() * ratio * rho * theta.powf(1.0 - w),
        FrequencyLaw::HardSphere => 16.0 / 5.0 * (theta / (2.0 * std::f64::consts::PI)).sqrt() * ratio * rho,
    }
}

/// Stress `σ_ij = (1+δ_ij) f_{e_i+e_j}` read from a compliant coefficient slice.
pub(crate) fn stress(space: &IndexSpace, values: &[f64]) -> [[f64; 3]; 3] {
    let mut sigma = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let k = space
                .offset(MultiIndex::unit(i).add(MultiIndex::unit(j)))
                .expect("order ≥ 2");
            sigma[i][j] = if i == j { 2.0 } else { 1.0 } * values[k];
        }
    }
    sigma
}

/// Gaussian closure coefficients in the anchor of the source:
/// `f^ES_0 = ρ`, zero at first order, and for `|α| ≥ 2`
/// `f^ES_α = (1 − 1/Pr)/(α_i ρ) Σ_j σ_ij f^ES_{α−e_i−e_j}` with `i = axis(α)`.
pub(crate) fn es_values_with(
    space: &IndexSpace,
    rho: f64,
    sigma: &[[f64; 3]; 3],
    prandtl: f64,
    axis: impl Fn(MultiIndex) -> usize,
    out: &mut [f64],
) {
    out.iter_mut().for_each(|v| *v = 0.0);
    out[0] = rho;
    let factor = 1.0 - 1.0 / prandtl;
    if factor == 0.0 {
        return;
    }
    for k in 0..space.len() {
        if space.degree(k) < 2 {
            continue;
        }
        let a = space.index(k);
        let i = axis(a);
        debug_assert!(a.0[i] > 0);
        let Some(base) = space.lower(i, k) else {
            continue;
        };
        let mut acc = 0.0;
        for (j, s) in sigma[i].iter().enumerate() {
            if let Some(src) = space.lower(j, base) {
                acc += s * out[src];
            }
        }
        out[k] = factor / (a.0[i] as f64 * rho) * acc;
    }
}

/// Coefficients of the ES Gaussian of a state whose mean and temperature
/// differ from the expansion anchor by `shift` and `theta_gap`:
/// `α_i f_α = w_i f_{α−e_i} + Σ_j D_ij f_{α−e_i−e_j}` with `w = shift` and
/// `D = theta_gap I + (1 − 1/Pr) σ/ρ`, `σ` taken about the state's own mean.
pub(crate) fn es_values_shifted(
    space: &IndexSpace,
    rho: f64,
    shift: [f64; 3],
    theta_gap: f64,
    sigma: &[[f64; 3]; 3],
    prandtl: f64,
    out: &mut [f64],
) {
    let factor = 1.0 - 1.0 / prandtl;
    let mut dev = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            dev[i][j] = factor * sigma[i][j] / rho;
        }
        dev[i][i] += theta_gap;
    }
    out[0] = rho;
    for step in space.recursion() {
        let i = step.axis;
        let mut acc = shift[i] * out[step.base];
        for (j, &src) in step.src.iter().enumerate() {
            if src != usize::MAX {
                acc += dev[i][j] * out[src];
            }
        }
        out[step.k] = acc / step.count;
    }
}

/// [`es_values_with`] along the first non-zero direction, from cached tables.
pub(crate) fn es_values(space: &IndexSpace, rho: f64, sigma: &[[f64; 3]; 3], prandtl: f64, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    out[0] = rho;
    let factor = 1.0 - 1.0 / prandtl;
    if factor == 0.0 {
        return;
    }
    for step in space.recursion() {
        if step.src.iter().all(|&s| s == usize::MAX) {
            continue;
        }
        let i = step.axis;
        let mut acc = 0.0;
        for (j, &src) in step.src.iter().enumerate() {
            if src != usize::MAX {
                acc += sigma[i][j] * out[src];
            }
        }
        out[step.k] = factor / (step.count * rho) * acc;
    }
}

pub(crate) fn smallest_axis(a: MultiIndex) -> usize {
    a.0.iter().position(|&n| n > 0).expect("non-zero index")
}

/// `f^ES` expanded in the anchor of the compliant input `f`.
pub fn es_expansion(f: &MomentCoeffs, prandtl: f64) -> Result<MomentCoeffs> {
    es_expansion_with_axis(f, prandtl, smallest_axis)
}

/// As [`es_expansion`], with the recursion axis chosen by `axis(α)`, which
/// must return a direction `i` with `α_i > 0`.
pub fn es_expansion_with_axis(
    f: &MomentCoeffs,
    prandtl: f64,
    axis: impl Fn(MultiIndex) -> usize,
) -> Result<MomentCoeffs> {
    let state = macro_from_coeffs(f)?;
    if !(state.rho > 0.0) {
        return Err(Error::NonPositiveDensity(state.rho));
    }
    let mut out = MomentCoeffs::zeros(*f.anchor());
    es_values_with(f.space(), state.rho, &state.sigma, prandtl, axis, out.values_mut());
    out.set_compliant(true);
    Ok(out)
}

/// `Q_α = ν (f^ES_α − f_α)`.
pub fn collision_coeffs(f: &MomentCoeffs, model: &GasModel) -> Result<MomentCoeffs> {
    let es = es_expansion(f, model.prandtl)?;
    let nu = collision_frequency(model, f.density(), f.anchor().theta)?;
    let values = es.values().iter().zip(f.values()).map(|(e, v)| nu * (e - v)).collect();
    MomentCoeffs::from_values(*f.anchor(), values)
}

/// `G_α = Σ_d F_d f_{α−e_d}` written into `out`.
pub(crate) fn force_into(space: &IndexSpace, force: &ExternalForce, src: &[f64], out: &mut [f64]) {
    for k in 0..space.len() {
        let mut v = 0.0;
        for d in 0..3 {
            if force.0[d] != 0.0 {
                if let Some(j) = space.lower(d, k) {
                    v += force.0[d] * src[j];
                }
            }
        }
        out[k] = v;
    }
}

pub fn force_coeffs(f: &MomentCoeffs, force: &ExternalForce) -> MomentCoeffs {
    let mut out = MomentCoeffs::zeros(*f.anchor());
    force_into(f.space(), force, f.values(), out.values_mut());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::maxwellian;

    #[test]
    fn shifted_gaussian_matches_projection() {
        use crate::basis::{project, BasisAnchor};
        let mut f = maxwellian(1.3, [0.4, -0.2, 0.1], 0.8, 5).unwrap();
        let s = f.space();
        let v = f.values_mut();
        v[s.offset(MultiIndex::new(2, 0, 0)).unwrap()] = 0.08;
        v[s.offset(MultiIndex::new(0, 2, 0)).unwrap()] = -0.03;
        v[s.offset(MultiIndex::new(0, 0, 2)).unwrap()] = -0.05;
        v[s.offset(MultiIndex::new(1, 1, 0)).unwrap()] = 0.07;
        v[s.offset(MultiIndex::new(0, 1, 1)).unwrap()] = -0.02;
        f.set_compliant(true);
        let own = f.anchor();
        let frozen = BasisAnchor::new([0.1, 0.3, -0.2], 1.1, 5).unwrap();
        let expected = project(&es_expansion(&f, 2.0 / 3.0).unwrap(), &frozen);
        let m = macro_from_coeffs(&f).unwrap();
        let mut out = vec![0.0; s.len()];
        let shift = [0, 1, 2].map(|d| own.u[d] - frozen.u[d]);
        es_values_shifted(s, m.rho, shift, own.theta - frozen.theta, &m.sigma, 2.0 / 3.0, &mut out);
        for (a, b) in out.iter().zip(expected.values()) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    fn sheared(sigma11: f64, sigma12: f64) -> MomentCoeffs {
        let mut f = maxwellian(1.0, [0.0; 3], 1.0, 4).unwrap();
        let s = f.space();
        let v = f.values_mut();
        v[s.double(0)] = sigma11 / 2.0;
        v[s.double(1)] = -sigma11 / 2.0;
        v[s.offset(MultiIndex::new(1, 1, 0)).unwrap()] = sigma12;
        v[s.offset(MultiIndex::new(3, 0, 0)).unwrap()] = 0.04;
        f.to_compliant().unwrap()
    }

    #[test]
    fn unit_prandtl_is_bgk() {
        let f = sheared(0.2, 0.1);
        let es = es_expansion(&f, 1.0).unwrap();
        assert_eq!(es.values()[0], 1.0);
        assert!(es.values()[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn one_level_of_the_recursion() {
        let f = sheared(0.2, 0.0);
        let es = es_expansion(&f, 2.0 / 3.0).unwrap();
        let v = es.values()[f.space().double(0)];
        assert!((v + 0.2 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn maxwellian_is_its_own_closure() {
        let f = maxwellian(1.3, [0.2, 0.0, -0.1], 0.8, 5).unwrap();
        assert_eq!(es_expansion(&f, 2.0 / 3.0).unwrap().values(), f.values());
    }

    #[test]
    fn frequency_laws() {
        let pl = GasModel::new(2.0 / 3.0, 0.1199, FrequencyLaw::PowerLaw { w: 0.81 }).unwrap();
        assert!((collision_frequency(&pl, 1.0, 1.0).unwrap() - 6.9687).abs() < 1e-4);
        let hs = GasModel::new(2.0 / 3.0, 0.1, FrequencyLaw::HardSphere).unwrap();
        assert!((collision_frequency(&hs, 1.0, 1.0).unwrap() - 8.5108).abs() < 1e-4);
        let flat = GasModel::new(2.0 / 3.0, 0.1, FrequencyLaw::PowerLaw { w: 1.0 }).unwrap();
        assert_eq!(
            collision_frequency(&flat, 1.0, 0.5).unwrap(),
            collision_frequency(&flat, 1.0, 2.0).unwrap()
        );
        assert!(collision_frequency(&hs, 0.0, 1.0).is_err());
        assert!(collision_frequency(&hs, 1.0, -1.0).is_err());
    }

    #[test]
    fn collision_invariants() {
        let model = GasModel::new(2.0 / 3.0, 0.1, FrequencyLaw::HardSphere).unwrap();
        let f = sheared(0.3, -0.1);
        let q = collision_coeffs(&f, &model).unwrap();
        let s = f.space();
        assert_eq!(q.values()[0], 0.0);
        for d in 0..3 {
            assert_eq!(q.values()[s.unit(d)], 0.0);
        }
        let trace: f64 = (0..3).map(|d| q.values()[s.double(d)]).sum();
        assert!(trace.abs() < 1e-15);
        let nu = collision_frequency(&model, 1.0, 1.0).unwrap();
        let expected = nu * (-0.3 / 4.0 - 0.15);
        assert!((q.values()[s.double(0)] - expected).abs() < 1e-13);
        let eq = maxwellian(1.0, [0.0; 3], 1.0, 4).unwrap();
        assert!(collision_coeffs(&eq, &model)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn force_term() {
        let f = maxwellian(1.5, [0.0; 3], 1.0, 3).unwrap();
        assert!(force_coeffs(&f, &ExternalForce::default())
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let g = force_coeffs(&f, &ExternalForce([0.0, 0.2555, 0.0]));
        assert_eq!(g.values()[0], 0.0);
        assert!((g.values()[f.space().unit(1)] - 0.2555 * 1.5).abs() < 1e-15);
    }
}
