//! Multi-index bookkeeping for the order-`M` Hermite space.
//!
//! Indices are stored graded by total degree; within a degree they run
//! from the largest first component downwards, so order 1 enumerates
//! `(0,0,0), (1,0,0), (0,1,0), (0,0,1)`.

use std::sync::OnceLock;

use super::hermite;

/// Largest moment order with precomputed index tables.
pub const MAX_ORDER: usize = 20;

const NONE: usize = usize::MAX;

/// A three-dimensional multi-index `α = (α1, α2, α3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [usize; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub fn new(a1: usize, a2: usize, a3: usize) -> Self {
        MultiIndex([a1, a2, a3])
    }

    /// Unit index `e_d` for `d` in `0..3`.
    pub fn unit(d: usize) -> Self {
        let mut a = [0; 3];
        a[d] = 1;
        MultiIndex(a)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }

    /// `self + other`.
    pub fn add(&self, other: MultiIndex) -> MultiIndex {
        MultiIndex([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    /// `self - other`, or `None` if any component would go negative.
    pub fn checked_sub(&self, other: MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }
}

impl From<[usize; 3]> for MultiIndex {
    fn from(a: [usize; 3]) -> Self {
        MultiIndex(a)
    }
}

const FACTORIALS: [f64; 2 * MAX_ORDER + 2] = {
    let mut t = [1.0; 2 * MAX_ORDER + 2];
    let mut k = 1;
    while k < t.len() {
        t[k] = t[k - 1] * k as f64;
        k += 1;
    }
    t
};

pub(crate) fn factorial(n: usize) -> f64 {
    FACTORIALS
        .get(n)
        .copied()
        .unwrap_or_else(|| (1..=n).map(|k| k as f64).product())
}

/// Index tables for a fixed order, shared across the crate.
#[derive(Debug)]
pub struct IndexSpace {
    order: usize,
    indices: Vec<MultiIndex>,
    lookup: Vec<usize>,
    lower: [Vec<usize>; 3],
    upper: [Vec<usize>; 3],
    degree: Vec<usize>,
    factorial: Vec<f64>,
    /// `h_{m,k} / m!` with `He_m(x) = Σ_k h_{m,k} x^k`, row-major `(M+1)²`.
    hermite_scaled: Vec<f64>,
    recursion: Vec<RecursionStep>,
    max_speed: f64,
}

/// One step of a Gaussian coefficient recursion along the first non-zero
/// direction `i` of `α`: `α_i f_α = w_i f_{α−e_i} + Σ_j D_ij f_{α−e_i−e_j}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RecursionStep {
    pub k: usize,
    pub axis: usize,
    pub count: f64,
    pub base: usize,
    /// Offsets of `α − e_i − e_j`, `usize::MAX` where absent.
    pub src: [usize; 3],
}

impl IndexSpace {
    fn build(order: usize) -> Self {
        let mut indices = Vec::with_capacity(dimension(order));
        for deg in 0..=order {
            for a1 in (0..=deg).rev() {
                for a2 in (0..=deg - a1).rev() {
                    indices.push(MultiIndex([a1, a2, deg - a1 - a2]));
                }
            }
        }
        let side = order + 1;
        let mut lookup = vec![NONE; side * side * side];
        for (k, a) in indices.iter().enumerate() {
            lookup[(a.0[0] * side + a.0[1]) * side + a.0[2]] = k;
        }
        let find = |a: [usize; 3]| -> usize {
            if a.iter().sum::<usize>() > order {
                NONE
            } else {
                lookup[(a[0] * side + a[1]) * side + a[2]]
            }
        };
        let mut lower: [Vec<usize>; 3] = Default::default();
        let mut upper: [Vec<usize>; 3] = Default::default();
        for d in 0..3 {
            lower[d] = indices
                .iter()
                .map(|a| {
                    if a.0[d] == 0 {
                        NONE
                    } else {
                        let mut b = a.0;
                        b[d] -= 1;
                        find(b)
                    }
                })
                .collect();
            upper[d] = indices
                .iter()
                .map(|a| {
                    let mut b = a.0;
                    b[d] += 1;
                    find(b)
                })
                .collect();
        }
        let degree = indices.iter().map(|a| a.degree()).collect();
        let factorial = indices.iter().map(|a| a.factorial()).collect();
        let mut hermite_scaled = vec![0.0; side * side];
        for m in 0..side {
            let fm = self::factorial(m);
            for (k, h) in hermite::hermite_coefficients(m).into_iter().enumerate() {
                hermite_scaled[m * side + k] = h / fm;
            }
        }
        let recursion = (1..indices.len())
            .map(|k| {
                let a = indices[k];
                let axis = a.0.iter().position(|&n| n > 0).expect("non-zero index");
                let base = lower[axis][k];
                let src = [0, 1, 2].map(|j| lower[j][base]);
                RecursionStep {
                    k,
                    axis,
                    count: a.0[axis] as f64,
                    base,
                    src,
                }
            })
            .collect();
        IndexSpace {
            order,
            indices,
            lookup,
            lower,
            upper,
            degree,
            factorial,
            hermite_scaled,
            recursion,
            max_speed: hermite::largest_root(order + 1),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index(&self, k: usize) -> MultiIndex {
        self.indices[k]
    }

    /// Position of `a` in the ordering, if `|a| ≤ order`.
    pub fn offset(&self, a: MultiIndex) -> Option<usize> {
        if a.degree() > self.order {
            return None;
        }
        let side = self.order + 1;
        let k = self.lookup[(a.0[0] * side + a.0[1]) * side + a.0[2]];
        (k != NONE).then_some(k)
    }

    pub(crate) fn recursion(&self) -> &[RecursionStep] {
        &self.recursion
    }

    pub(crate) fn hermite_scaled(&self) -> &[f64] {
        &self.hermite_scaled
    }

    /// Offset of `(a1, a2, a3)` without bounds checks beyond the degree.
    #[inline]
    pub(crate) fn offset3(&self, a1: usize, a2: usize, a3: usize) -> usize {
        let side = self.order + 1;
        self.lookup[(a1 * side + a2) * side + a3]
    }

    /// Offset of `α − e_d`, if it exists.
    #[inline]
    pub fn lower(&self, d: usize, k: usize) -> Option<usize> {
        let j = self.lower[d][k];
        (j != NONE).then_some(j)
    }

    /// Offset of `α + e_d`, if `|α| < order`.
    #[inline]
    pub fn upper(&self, d: usize, k: usize) -> Option<usize> {
        let j = self.upper[d][k];
        (j != NONE).then_some(j)
    }

    #[inline]
    pub fn degree(&self, k: usize) -> usize {
        self.degree[k]
    }

    #[inline]
    pub fn factorial(&self, k: usize) -> f64 {
        self.factorial[k]
    }

    /// Largest root of `He_{M+1}`; the characteristic speed bound of the
    /// regularized system in units of `√θ`.
    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }

    pub fn unit(&self, d: usize) -> usize {
        self.offset(MultiIndex::unit(d)).expect("order ≥ 1")
    }

    pub fn double(&self, d: usize) -> usize {
        let mut a = [0; 3];
        a[d] = 2;
        self.offset(MultiIndex(a)).expect("order ≥ 2")
    }
}

/// Number of multi-indices with `|α| ≤ order`, i.e. `C(order+3, 3)`.
pub fn dimension(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

static SPACES: [OnceLock<IndexSpace>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];

/// Shared index tables for `order`.
///
/// Panics if `order > MAX_ORDER`.
pub fn index_space(order: usize) -> &'static IndexSpace {
    assert!(order <= MAX_ORDER, "moment order {order} exceeds {MAX_ORDER}");
    SPACES[order].get_or_init(|| IndexSpace::build(order))
}

/// All multi-indices with `|α| ≤ order` in storage order.
pub fn enumerate_indices(order: usize) -> Vec<MultiIndex> {
    index_space(order).indices.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(enumerate_indices(0), vec![MultiIndex::ZERO]);
        assert_eq!(
            enumerate_indices(1),
            vec![
                MultiIndex::new(0, 0, 0),
                MultiIndex::new(1, 0, 0),
                MultiIndex::new(0, 1, 0),
                MultiIndex::new(0, 0, 1)
            ]
        );
        assert_eq!(enumerate_indices(3).len(), 20);
    }

    #[test]
    fn offsets_are_a_bijection() {
        for m in 0..=10 {
            let space = index_space(m);
            assert_eq!(space.len(), dimension(m));
            for (k, a) in space.indices().iter().enumerate() {
                assert_eq!(space.offset(*a), Some(k));
            }
            assert_eq!(space.offset(MultiIndex::new(m + 1, 0, 0)), None);
        }
    }

    #[test]
    fn graded_order() {
        let space = index_space(6);
        for w in space.indices().windows(2) {
            assert!(w[0].degree() <= w[1].degree());
        }
    }

    #[test]
    fn neighbour_tables() {
        let space = index_space(4);
        let k = space.offset(MultiIndex::new(1, 2, 0)).unwrap();
        assert_eq!(space.lower(0, k), space.offset(MultiIndex::new(0, 2, 0)));
        assert_eq!(space.lower(2, k), None);
        assert_eq!(space.upper(1, k), space.offset(MultiIndex::new(1, 3, 0)));
        let top = space.offset(MultiIndex::new(4, 0, 0)).unwrap();
        assert_eq!(space.upper(0, top), None);
    }
}
