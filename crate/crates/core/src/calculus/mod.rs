//! Separability, rational antiderivatives and logarithmic derivatives in one
//! variable, with the other variables acting as constants.

mod hermite;
mod residue;
pub mod roots;
mod separable;
pub mod upoly;

pub use hermite::{hermite_antiderivative, hermite_reduce, HermiteSplit};
pub use residue::{logderiv_integrate, residue_profile, LogDerivFailure, Residue, ResidueProfile};
pub use separable::{block_content, four_point_identity, independent_of, separable_product};
