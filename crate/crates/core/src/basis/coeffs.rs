//! Coefficient container for the truncated Hermite expansion
//!
//! `f(ξ) ≈ Σ_{|α|≤M} f_α H_{θ,α}((ξ − u)/√θ)` with
//! `H_{θ,α}(v) = (2πθ)^{-3/2} θ^{-|α|/2} Π_d He_{α_d}(v_d) exp(−v_d²/2)`
//! (particle mass fixed to one).

use super::index::{factorial, index_space, IndexSpace, MultiIndex, MAX_ORDER};
use crate::error::{Error, Result};

/// Expansion centre `(u, θ)` and truncation order `M` of a Hermite space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisAnchor {
    pub u: [f64; 3],
    pub theta: f64,
    pub order: usize,
}

impl BasisAnchor {
    pub fn new(u: [f64; 3], theta: f64, order: usize) -> Result<Self> {
        if !(3..=MAX_ORDER).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::NonPositiveTemperature(theta));
        }
        Ok(BasisAnchor { u, theta, order })
    }

    pub fn space(&self) -> &'static IndexSpace {
        index_space(self.order)
    }
}

/// Density, velocity and temperature of a distribution, valid in any anchor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservedState {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
}

/// Macroscopic quantities of a compliant expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MacroState {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub sigma: [[f64; 3]; 3],
    pub q: [f64; 3],
}

/// Hermite coefficients `f_α` in graded storage order together with their anchor.
///
/// A compliant expansion has `f_{e_d} = 0` and `Σ_d f_{2e_d} = 0`, i.e. its
/// anchor is its own mean velocity and temperature. Everything else is raw.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentCoeffs {
    anchor: BasisAnchor,
    values: Vec<f64>,
    compliant: bool,
}

impl MomentCoeffs {
    pub fn zeros(anchor: BasisAnchor) -> Self {
        MomentCoeffs {
            values: vec![0.0; anchor.space().len()],
            anchor,
            compliant: false,
        }
    }

    /// Raw coefficients in `anchor`.
    pub fn from_values(anchor: BasisAnchor, values: Vec<f64>) -> Result<Self> {
        let n = anchor.space().len();
        if values.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected {n} coefficients, got {}",
                values.len()
            )));
        }
        Ok(MomentCoeffs {
            anchor,
            values,
            compliant: false,
        })
    }

    pub(crate) fn from_parts(anchor: BasisAnchor, values: Vec<f64>, compliant: bool) -> Self {
        debug_assert_eq!(values.len(), anchor.space().len());
        MomentCoeffs {
            anchor,
            values,
            compliant,
        }
    }

    pub fn anchor(&self) -> &BasisAnchor {
        &self.anchor
    }

    pub fn order(&self) -> usize {
        self.anchor.order
    }

    pub fn space(&self) -> &'static IndexSpace {
        self.anchor.space()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable access; the result is treated as raw from here on.
    pub fn values_mut(&mut self) -> &mut [f64] {
        self.compliant = false;
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_compliant(&self) -> bool {
        self.compliant
    }

    pub fn get(&self, a: MultiIndex) -> f64 {
        self.space().offset(a).map_or(0.0, |k| self.values[k])
    }

    pub fn density(&self) -> f64 {
        self.values[0]
    }

    /// `(ρ, u, θ)` from the low-order coefficients in any anchor:
    /// `ρ = g_0`, `ρ(u − u′) = g_{e_d}`, `ρ|u − u′|² + 3ρ(θ − θ′) = 2 Σ g_{2e_d}`.
    pub fn conserved(&self) -> ConservedState {
        conserved_of(self.space(), &self.anchor, &self.values)
    }

    /// Re-expand in the anchor given by this distribution's own `(u, θ)`.
    pub fn to_compliant(&self) -> Result<MomentCoeffs> {
        if self.compliant {
            return Ok(self.clone());
        }
        let state = self.conserved();
        if !(state.rho > 0.0) {
            return Err(Error::NonPositiveDensity(state.rho));
        }
        let target = BasisAnchor::new(state.u, state.theta, self.order())?;
        let mut out = super::projection::project(self, &target);
        out.enforce_compliance();
        Ok(out)
    }

    /// Zero `f_{e_d}` and make the trace sum exactly zero. Only meaningful when
    /// the anchor already matches the distribution up to round-off.
    pub(crate) fn enforce_compliance(&mut self) {
        let space = self.space();
        for d in 0..3 {
            self.values[space.unit(d)] = 0.0;
        }
        let (i1, i2, i3) = (space.double(0), space.double(1), space.double(2));
        self.values[i3] = -(self.values[i1] + self.values[i2]);
        self.compliant = true;
    }

    pub(crate) fn set_compliant(&mut self, flag: bool) {
        self.compliant = flag;
    }

    /// Multiply every coefficient by `factor`; compliance is preserved.
    pub fn scale(&mut self, factor: f64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    /// Image under `ξ₁ → −ξ₁`: `f_α → (−1)^{α₁} f_α`, `u₁ → −u₁`.
    pub fn mirrored(&self) -> MomentCoeffs {
        let space = self.space();
        let mut out = self.clone();
        out.anchor.u[0] = -out.anchor.u[0];
        for (k, v) in out.values.iter_mut().enumerate() {
            if space.index(k).0[0] % 2 == 1 {
                *v = -*v;
            }
        }
        out
    }

    /// Coefficient-wise `self + weight·other` for a shared anchor.
    pub fn axpy(&mut self, weight: f64, other: &MomentCoeffs) {
        debug_assert_eq!(self.anchor, other.anchor);
        self.compliant = false;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += weight * b;
        }
    }
}

/// `(ρ, u, θ)` of a coefficient slice expressed in `anchor`.
pub(crate) fn conserved_of(space: &IndexSpace, anchor: &BasisAnchor, values: &[f64]) -> ConservedState {
    let rho = values[0];
    let mut u = anchor.u;
    let mut kinetic = 0.0;
    for (d, ud) in u.iter_mut().enumerate() {
        let g = values[space.unit(d)];
        *ud += g / rho;
        kinetic += g * g;
    }
    let trace = (values[space.double(0)] + values[space.double(1)]) + values[space.double(2)];
    let theta = (2.0 * trace - kinetic / rho) / (3.0 * rho) + anchor.theta;
    ConservedState { rho, u, theta }
}

/// Equilibrium: `f_0 = ρ`, every other coefficient zero.
pub fn maxwellian(rho: f64, u: [f64; 3], theta: f64, order: usize) -> Result<MomentCoeffs> {
    if !(rho > 0.0) {
        return Err(Error::NonPositiveDensity(rho));
    }
    let anchor = BasisAnchor::new(u, theta, order)?;
    let mut f = MomentCoeffs::zeros(anchor);
    f.values[0] = rho;
    f.compliant = true;
    Ok(f)
}

/// `ρ, u, θ, σ_ij = (1+δ_ij) f_{e_i+e_j}, q_i = 2 f_{3e_i} + Σ_d f_{2e_d+e_i}`.
pub fn macro_from_coeffs(f: &MomentCoeffs) -> Result<MacroState> {
    if !f.compliant {
        return Err(Error::NotCompliant);
    }
    let mut sigma = [[0.0; 3]; 3];
    for (i, row) in sigma.iter_mut().enumerate() {
        for (j, s) in row.iter_mut().enumerate() {
            let a = MultiIndex::unit(i).add(MultiIndex::unit(j));
            *s = if i == j { 2.0 } else { 1.0 } * f.get(a);
        }
    }
    let mut q = [0.0; 3];
    for (i, qi) in q.iter_mut().enumerate() {
        let mut three = [0; 3];
        three[i] = 3;
        *qi = 2.0 * f.get(MultiIndex(three));
        for d in 0..3 {
            let mut a = [0; 3];
            a[d] += 2;
            a[i] += 1;
            *qi += f.get(MultiIndex(a));
        }
    }
    Ok(MacroState {
        rho: f.values[0],
        u: f.anchor.u,
        theta: f.anchor.theta,
        sigma,
        q,
    })
}

/// `∫ ξ^k φ_n(ξ) dξ` for the one-dimensional factor
/// `φ_n = (2πθ)^{-1/2} θ^{-n/2} He_n((ξ−s)/√θ) e^{−(ξ−s)²/(2θ)}`.
///
/// Returns the table `μ[k][n]` for `k, n ≤ order`.
pub(crate) fn moment_table(order: usize, shift: f64, theta: f64) -> Vec<f64> {
    let side = order + 1;
    let mut table = vec![0.0; side * side];
    moment_table_into(order, shift, theta, &mut table);
    table
}

pub(crate) fn moment_table_into(order: usize, shift: f64, theta: f64, table: &mut [f64]) {
    const CAP: usize = MAX_ORDER + 1;
    let side = order + 1;
    let mut shift_pow = [1.0; CAP];
    let mut half_theta_pow = [1.0; CAP];
    for p in 1..side {
        shift_pow[p] = shift_pow[p - 1] * shift;
        half_theta_pow[p] = half_theta_pow[p - 1] * 0.5 * theta;
    }
    for k in 0..=order {
        let fk = factorial(k);
        for n in 0..=k {
            let mut acc = 0.0;
            let mut m = 0;
            while n + 2 * m <= k {
                let p = k - n - 2 * m;
                acc += fk / (factorial(p) * factorial(m)) * shift_pow[p] * half_theta_pow[m];
                m += 1;
            }
            table[k * side + n] = acc;
        }
        for n in k + 1..side {
            table[k * side + n] = 0.0;
        }
    }
}

/// Polynomial moment `∫ ξ^β f dξ` for `|β| ≤ M`.
pub fn raw_moment(f: &MomentCoeffs, beta: MultiIndex) -> Result<f64> {
    let order = f.order();
    if beta.degree() > order {
        return Err(Error::DegreeTooHigh {
            degree: beta.degree(),
            order,
        });
    }
    let side = order + 1;
    let tables: Vec<Vec<f64>> = (0..3)
        .map(|d| moment_table(order, f.anchor.u[d], f.anchor.theta))
        .collect();
    let space = f.space();
    let mut acc = 0.0;
    for a1 in 0..=beta.0[0] {
        for a2 in 0..=beta.0[1] {
            for a3 in 0..=beta.0[2] {
                let k = space.offset3(a1, a2, a3);
                acc += f.values[k]
                    * tables[0][beta.0[0] * side + a1]
                    * tables[1][beta.0[1] * side + a2]
                    * tables[2][beta.0[2] * side + a3];
            }
        }
    }
    Ok(acc)
}

/// `(ξ₁ f)_α = θ f_{α−e₁} + u₁ f_α + (1 − δ_{|α|,M})(α₁+1) f_{α+e₁}` written into `out`.
pub(crate) fn stream_into(space: &IndexSpace, anchor: &BasisAnchor, src: &[f64], out: &mut [f64]) {
    let (u1, theta) = (anchor.u[0], anchor.theta);
    for k in 0..space.len() {
        let mut v = u1 * src[k];
        if let Some(j) = space.lower(0, k) {
            v += theta * src[j];
        }
        if let Some(j) = space.upper(0, k) {
            v += (space.index(k).0[0] + 1) as f64 * src[j];
        }
        out[k] = v;
    }
}

/// Transport operator in the `x₁` direction with the regularized closure.
pub fn stream_coeffs(f: &MomentCoeffs) -> MomentCoeffs {
    let mut out = vec![0.0; f.values.len()];
    stream_into(f.space(), &f.anchor, &f.values, &mut out);
    MomentCoeffs::from_parts(f.anchor, out, false)
}
