//! HLL flux for the truncated transport operator, evaluated in one anchor.

use crate::basis::{conserved_of, project, stream_into, BasisAnchor, ConservedState, IndexSpace, MomentCoeffs};
use crate::error::{Error, Result};

/// Signal-speed bounds `u₁ ∓ c_M √θ` of a state.
#[inline]
pub(crate) fn wave_speeds(state: &ConservedState, c: f64) -> (f64, f64) {
    let s = c * state.theta.sqrt();
    (state.u[0] - s, state.u[0] + s)
}

/// HLL combination of two interface states already expressed in a common anchor.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn hll_combine(
    speeds_l: (f64, f64),
    speeds_r: (f64, f64),
    f_l: &[f64],
    stream_l: &[f64],
    f_r: &[f64],
    stream_r: &[f64],
    out: &mut [f64],
) {
    let lm = speeds_l.0.min(speeds_r.0);
    let lp = speeds_l.1.max(speeds_r.1);
    if lm >= 0.0 {
        out.copy_from_slice(stream_l);
    } else if lp <= 0.0 {
        out.copy_from_slice(stream_r);
    } else {
        let inv = 1.0 / (lp - lm);
        let prod = lp * lm;
        for k in 0..out.len() {
            out[k] = (lp * stream_l[k] - lm * stream_r[k] + prod * (f_r[k] - f_l[k])) * inv;
        }
    }
}

fn checked_state(space: &IndexSpace, f: &MomentCoeffs) -> Result<ConservedState> {
    let state = conserved_of(space, f.anchor(), f.values());
    if !(state.rho > 0.0) {
        return Err(Error::NonPositiveDensity(state.rho));
    }
    if !(state.theta > 0.0) {
        return Err(Error::NonPositiveTemperature(state.theta));
    }
    Ok(state)
}

/// Numerical flux between `f_l` and `f_r`, with both states projected into
/// `anchor` before the HLL average of their transport terms.
pub fn hll_flux(f_l: &MomentCoeffs, f_r: &MomentCoeffs, anchor: &BasisAnchor) -> Result<MomentCoeffs> {
    if f_l.order() != anchor.order || f_r.order() != anchor.order {
        return Err(Error::OrderMismatch(f_l.order().max(f_r.order()), anchor.order));
    }
    let space = anchor.space();
    let c = space.max_speed();
    let speeds_l = wave_speeds(&checked_state(space, f_l)?, c);
    let speeds_r = wave_speeds(&checked_state(space, f_r)?, c);
    let l = project(f_l, anchor);
    let r = project(f_r, anchor);
    let n = space.len();
    let mut sl = vec![0.0; n];
    let mut sr = vec![0.0; n];
    stream_into(space, anchor, l.values(), &mut sl);
    stream_into(space, anchor, r.values(), &mut sr);
    let mut out = vec![0.0; n];
    hll_combine(speeds_l, speeds_r, l.values(), &sl, r.values(), &sr, &mut out);
    MomentCoeffs::from_values(*anchor, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{maxwellian, stream_coeffs};

    fn perturbed(rho: f64, u: [f64; 3], theta: f64, order: usize, seed: usize) -> MomentCoeffs {
        let mut f = maxwellian(rho, u, theta, order).unwrap();
        for (k, v) in f.values_mut().iter_mut().enumerate().skip(10) {
            *v = 0.02 * (((k + seed) * 7919 % 13) as f64 - 6.0) / 6.0;
        }
        let s = f.space();
        let v = f.values_mut();
        v[s.double(0)] = 0.05;
        v[s.double(1)] = -0.03;
        v[s.double(2)] = -0.02;
        f.set_compliant(true);
        f
    }

    #[test]
    fn consistent_for_equal_states() {
        let f = perturbed(1.2, [0.3, -0.2, 0.1], 0.9, 4, 1);
        let flux = hll_flux(&f, &f, f.anchor()).unwrap();
        let s = stream_coeffs(&f);
        for (a, b) in flux.values().iter().zip(s.values()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn supersonic_states_upwind() {
        assert!((crate::basis::index_space(3).max_speed() - (3.0 + 6f64.sqrt()).sqrt()).abs() < 1e-13);
        let l = perturbed(1.0, [10.0, 0.0, 0.0], 1.0, 3, 2);
        let r = perturbed(0.7, [10.0, 0.5, 0.0], 1.0, 3, 3);
        let flux = hll_flux(&l, &r, l.anchor()).unwrap();
        assert_eq!(flux.values(), stream_coeffs(&l).values());
        let back = hll_flux(&l.mirrored(), &r.mirrored(), r.mirrored().anchor()).unwrap();
        let expected = stream_coeffs(&project(&r.mirrored(), r.mirrored().anchor()));
        assert_eq!(back.values(), expected.values());
    }

    #[test]
    fn mirror_symmetry() {
        for seed in 0..5 {
            let l = perturbed(1.0 + 0.1 * seed as f64, [0.2, 0.1, 0.0], 1.0, 4, seed);
            let r = perturbed(0.9, [-0.1, 0.3, 0.2], 1.3, 4, seed + 11);
            let anchor = BasisAnchor::new([0.05, 0.2, 0.1], 1.1, 4).unwrap();
            let mut mirrored_anchor = anchor;
            mirrored_anchor.u[0] = -anchor.u[0];
            let direct = hll_flux(&l, &r, &anchor).unwrap();
            let swapped = hll_flux(&r.mirrored(), &l.mirrored(), &mirrored_anchor).unwrap();
            let image = swapped.mirrored();
            for (a, b) in direct.values().iter().zip(image.values()) {
                assert!((a + b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_order_mismatch() {
        let l = maxwellian(1.0, [0.0; 3], 1.0, 3).unwrap();
        let r = maxwellian(1.0, [0.0; 3], 1.0, 4).unwrap();
        assert!(hll_flux(&l, &r, l.anchor()).is_err());
    }
}
