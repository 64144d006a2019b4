//! Change of anchor between `F_M(u, θ)` and `F_M(u′, θ′)`.
//!
//! The projected expansion is the unique element of the target space whose
//! polynomial moments of every degree `≤ M` agree with the source. Both the
//! coefficient→moment map and its inverse are lower triangular and factor
//! over the three velocity directions, so the transform is applied as three
//! one-dimensional `(M+1)×(M+1)` triangular matrices. Moments are taken about
//! the target velocity to keep the intermediate values well scaled.

use std::cell::RefCell;

use super::coeffs::{moment_table_into, BasisAnchor, MomentCoeffs};
use super::index::{IndexSpace, MAX_ORDER};

thread_local! {
    static SCRATCH: RefCell<Vec<f64>> = const { RefCell::new(Vec::new()) };
}

/// Precomputed transform between two anchors of the same order.
#[derive(Clone, Debug)]
pub struct Projector {
    from: BasisAnchor,
    to: BasisAnchor,
    side: usize,
    identity: bool,
    /// Three row-major `(M+1)×(M+1)` maps, one per direction.
    maps: Vec<f64>,
}

impl Projector {
    pub fn new(from: &BasisAnchor, to: &BasisAnchor) -> Self {
        assert_eq!(from.order, to.order, "projection between different orders");
        let order = from.order;
        let side = order + 1;
        if from == to {
            return Projector {
                from: *from,
                to: *to,
                side,
                identity: true,
                maps: Vec::new(),
            };
        }
        // Inverse of the target moment map: g_m = Σ_k h_{m,k} θ′^{(m−k)/2} / m! · μ_k.
        let scaled = to.space().hermite_scaled();
        let mut theta_pow = [1.0; MAX_ORDER + 1];
        for p in 1..side {
            theta_pow[p] = theta_pow[p - 1] * to.theta;
        }
        let block = side * side;
        let mut buf = vec![0.0; 5 * block];
        let (maps, rest) = buf.split_at_mut(3 * block);
        let (inverse, forward) = rest.split_at_mut(block);
        for m in 0..=order {
            for k in (m % 2..=m).step_by(2) {
                inverse[m * side + k] = scaled[m * side + k] * theta_pow[(m - k) / 2];
            }
        }
        for d in 0..3 {
            moment_table_into(order, from.u[d] - to.u[d], from.theta, forward);
            let t = &mut maps[d * block..(d + 1) * block];
            for m in 0..=order {
                for n in 0..=m {
                    let mut acc = 0.0;
                    for k in n..=m {
                        acc += inverse[m * side + k] * forward[k * side + n];
                    }
                    t[m * side + n] = acc;
                }
            }
        }
        buf.truncate(3 * block);
        Projector {
            from: *from,
            to: *to,
            side,
            identity: false,
            maps: buf,
        }
    }

    pub fn source(&self) -> &BasisAnchor {
        &self.from
    }

    pub fn target(&self) -> &BasisAnchor {
        &self.to
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Transform a coefficient slice expressed in the source anchor.
    pub fn apply(&self, src: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; src.len()];
        self.apply_into(src, &mut out);
        out
    }

    pub fn apply_into(&self, src: &[f64], out: &mut [f64]) {
        if self.identity {
            out.copy_from_slice(src);
            return;
        }
        SCRATCH.with(|cell| {
            let mut scratch = cell.borrow_mut();
            scratch.resize(src.len(), 0.0);
            let space = self.to.space();
            self.pass(space, 0, src, &mut scratch);
            self.pass(space, 1, &scratch, out);
            scratch.copy_from_slice(out);
            self.pass(space, 2, &scratch, out);
        });
    }

    fn pass(&self, space: &IndexSpace, d: usize, src: &[f64], out: &mut [f64]) {
        let side = self.side;
        let t = &self.maps[d * side * side..(d + 1) * side * side];
        for (k, a) in space.indices().iter().enumerate() {
            let mut idx = a.0;
            let m = idx[d];
            let row = &t[m * side..m * side + m + 1];
            let mut acc = 0.0;
            for (n, &w) in row.iter().enumerate() {
                idx[d] = n;
                acc += w * src[space.offset3(idx[0], idx[1], idx[2])];
            }
            out[k] = acc;
        }
    }

    pub fn apply_coeffs(&self, f: &MomentCoeffs) -> MomentCoeffs {
        debug_assert_eq!(f.anchor(), &self.from);
        if self.identity {
            return f.clone();
        }
        MomentCoeffs::from_parts(self.to, self.apply(f.values()), false)
    }
}

/// Re-expand `f` in `target`, preserving every polynomial moment of degree `≤ M`.
///
/// The result is flagged compliant only when `target` is `f`'s own `(u, θ)`.
pub fn project(f: &MomentCoeffs, target: &BasisAnchor) -> MomentCoeffs {
    if f.anchor() == target {
        return f.clone();
    }
    let mut out = Projector::new(f.anchor(), target).apply_coeffs(f);
    let state = f.conserved();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs()));
    if (0..3).all(|d| close(state.u[d], target.u[d])) && close(state.theta, target.theta) {
        out.enforce_compliance();
    }
    out
}
