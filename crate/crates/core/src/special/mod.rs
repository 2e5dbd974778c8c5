//! Scalar special functions backing the Bessel kernels and tail sums.

pub(crate) mod dd;
mod gamma;
mod trigamma;

pub use gamma::{gamma, ln_gamma, recip_gamma};
pub use trigamma::trigamma;
