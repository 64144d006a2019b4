//! Hermite velocity-space basis: multi-indices, coefficient storage,
//! macroscopic moments and the change of anchor between spaces.

mod coeffs;
pub mod hermite;
mod index;
mod projection;

pub(crate) use coeffs::{conserved_of, stream_into};
pub use coeffs::{
    macro_from_coeffs, maxwellian, raw_moment, stream_coeffs, BasisAnchor, ConservedState, MacroState, MomentCoeffs,
};
pub use hermite::hermite_value;
pub use index::{dimension, enumerate_indices, index_space, IndexSpace, MultiIndex, MAX_ORDER};
pub use projection::{project, Projector};
