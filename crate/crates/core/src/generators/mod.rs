//! Random variate generators.
//!
//! All generators take a specification and a [`BitSource`](crate::entropy::BitSource)
//! and return the generated code with the number of flips consumed. Apply
//! [`FormatSpec::gamma`](crate::formats::FormatSpec::gamma) to obtain the value.

mod bernoulli;
mod cbs;
mod multiword;
mod opt;
mod univ;

pub use bernoulli::{
    bernoulli, bernoulli_u64, binary_expansion, exact_ratio, exact_ratio_dual, BinaryExpansion,
};
pub use cbs::{gen_cbs, gen_cbs_ddf};
pub use multiword::{MultiWordUInt, CAPACITY, LIMBS};
pub use opt::{gen_opt, gen_opt_ddf};
pub use univ::{bits_to_u64, gen_univ, RationalBcd};

use crate::formats::Code;

/// A generated code and the number of fair bits consumed to produce it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenResult {
    pub code: Code,
    pub flips: u64,
}
