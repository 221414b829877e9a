//! Sum rules, matrix elements and Stark shifts for the symmetric linear
//! potential, the quantum bouncer and the half harmonic oscillator.
//!
//! Numerical code is generic over the scalar through [`num::Real`]; exact
//! moment coefficients use `BigRational`. The aliases below fix `f64`.

// `!(a <= b)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod matelem;
pub mod num;
pub mod quadrature;
pub mod specfun;
pub mod spectra;
pub mod stark;
pub mod sumrules;

pub use error::{Error, Result};

pub type Real64 = f64;
pub type SpectralPoint64 = spectra::SpectralPoint<f64>;
pub type ZeroTable64 = spectra::ZeroTable<f64>;
pub type SumEngine64 = sumrules::SumEngine<f64>;
pub type SumEvaluation64 = sumrules::SumEvaluation<f64>;
pub type StarkResult64 = stark::StarkResult<f64>;
pub type Fig1Row64 = stark::Fig1Row<f64>;
pub type QuadResult64 = quadrature::QuadResult<f64>;
pub type AiryProductIntegral64 = matelem::AiryProductIntegral<f64>;
