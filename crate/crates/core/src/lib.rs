//! Exact, entropy-optimal random variate generation from finite-precision
//! cumulative distribution functions over binary number formats.
//!
//! A distribution is specified by a monotone map from the `n`-bit codes of a
//! [`formats::FormatSpec`] to probabilities in a floating-point format. The
//! generators in [`generators`] consume fair random bits from a
//! [`entropy::BitSource`] and return codes whose probabilities are exactly the
//! increments of the specified function, using the optimal expected number of
//! bits. The [`oracle`] module supplies exact-rational reference machinery for
//! testing those claims.

#![forbid(unsafe_code)]

pub mod bitops;
pub mod dist_spec;
pub mod distlib;
pub mod entropy;
pub mod error;
pub mod formats;
pub mod generators;
pub mod oracle;

pub use error::{Error, Result};
