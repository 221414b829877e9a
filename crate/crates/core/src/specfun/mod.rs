//! Special functions: Airy Ai/Ai', oscillator eigenfunctions, half-oscillator `D_n`.

mod airy;
pub mod dd;
mod dcoef;
mod hermite;

pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub(crate) use airy::airy_pair_unchecked;
pub use dcoef::{d_coefficient, d_continuous, d_value, DCoefficient, EXACT_FLOAT_LIMIT};
pub use dd::{airy_pair_dd, DoubleDouble};
pub use hermite::hermite_weighted;
pub(crate) use hermite::{hermite_unchecked, hermite_with_derivative};
