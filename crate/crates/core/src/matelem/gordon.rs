//! Closed forms for `int_0^inf z^p Ai(z - b1) Ai(z - b2) dz`, p <= 2.
//!
//! Every antiderivative is a combination of
//! F1 = A B, F2 = A'B - A B', F3 = A'B + A B', F4 = A'B'
//! with A = Ai(z - b1), B = Ai(z - b2). The upper limit contributes nothing,
//! so each integral is minus the antiderivative at z = 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::Real;
use crate::specfun::airy_pair_unchecked;

/// Relative shift separation below which the distinct-shift formulas are refused.
pub const COINCIDENT_SHIFT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AiryProductIntegral<T = f64> {
    pub p: u32,
    pub shift_a: T,
    pub shift_b: T,
    pub value: T,
    /// F1..F4 at the lower endpoint.
    pub f: [T; 4],
}

fn components<T: Real>(b1: T, b2: T) -> [T; 4] {
    let (a, ap) = airy_pair_unchecked(-b1);
    let (b, bp) = airy_pair_unchecked(-b2);
    [a * b, ap * b - a * bp, ap * b + a * bp, ap * bp]
}

fn check_shift<T: Real>(s: T) -> Result<()> {
    if s.is_finite() && s > T::zero() {
        Ok(())
    } else {
        Err(Error::Domain(format!("shift must be positive and finite, got {s}")))
    }
}

/// `int_0^inf z^p Ai(z - shift_a) Ai(z - shift_b) dz` for p in {0, 1, 2}.
pub fn gordon_integral<T: Real>(p: u32, shift_a: T, shift_b: T) -> Result<AiryProductIntegral<T>> {
    if p > 2 {
        return Err(Error::Argument(format!(
            "closed forms exist for p <= 2 only (got {p}); use the moment recursion"
        )));
    }
    check_shift(shift_a)?;
    check_shift(shift_b)?;
    let f = components(shift_a, shift_b);
    let [f1, f2, f3, f4] = f;
    let value = if shift_a == shift_b {
        let b = shift_a;
        let b2 = b * b;
        match p {
            0 => b * f1 + f4,
            1 => -(T::lit(-2.0 / 3.0) * b2 * f1 + f3 / T::lit(6.0) - T::lit(2.0 / 3.0) * b * f4),
            _ => -((T::lit(-8.0) * b2 * b - T::lit(3.0)) / T::lit(15.0) * f1
                + T::two() * b / T::lit(15.0) * f3
                - T::lit(8.0) * b2 / T::lit(15.0) * f4),
        }
    } else {
        let d = shift_a - shift_b;
        if d.abs() <= T::lit(COINCIDENT_SHIFT_TOL) * shift_a.max(shift_b) {
            return Err(Error::Domain(format!(
                "shifts {shift_a} and {shift_b} are too close for the distinct-shift formula"
            )));
        }
        let s = shift_a + shift_b;
        let d2 = d * d;
        match p {
            0 => f2 / d,
            1 => -(s / d2 * f1 - T::two() / (d2 * d) * f2 + T::two() / d2 * f4),
            _ => {
                let d4 = d2 * d2;
                -(T::lit(12.0) * s / d4 * f1
                    + T::lit(4.0) * (T::lit(-6.0) + s * d2) / (d4 * d) * f2
                    - T::two() / d2 * f3
                    + T::lit(24.0) / d4 * f4)
            }
        }
    };
    Ok(AiryProductIntegral {
        p,
        shift_a,
        shift_b,
        value,
        f,
    })
}

/// `int_0^inf [Ai'(z - shift)]^2 dz`.
pub fn derivative_integral<T: Real>(shift: T) -> Result<T> {
    check_shift(shift)?;
    let (a, ap) = airy_pair_unchecked(-shift);
    let third = T::lit(1.0 / 3.0);
    Ok(third * shift * shift * a * a - T::two() * third * a * ap + third * shift * ap * ap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{airy_zero, ZeroKind};

    #[test]
    fn normalization_of_first_odd_state() {
        let z1: f64 = airy_zero(ZeroKind::AiZero, 1).unwrap();
        let g = gordon_integral(0, z1, z1).unwrap();
        let aip = crate::specfun::airy_ai_prime(-z1).unwrap();
        assert!((g.value - aip * aip).abs() < 1e-15);
        assert!((g.value - 0.49170).abs() < 1e-4);
        assert!(g.f[0].abs() < 1e-15);
    }

    #[test]
    fn distinct_zero_shifts_are_orthogonal() {
        let z1: f64 = airy_zero(ZeroKind::AiZero, 1).unwrap();
        let z2: f64 = airy_zero(ZeroKind::AiZero, 2).unwrap();
        assert!(gordon_integral(0, z1, z2).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn argument_validation() {
        assert!(matches!(gordon_integral(3, 1.0f64, 2.0), Err(Error::Argument(_))));
        assert!(matches!(
            gordon_integral(1, 1.0f64, 1.0 + 1e-12),
            Err(Error::Domain(_))
        ));
        assert!(matches!(gordon_integral(0, -1.0f64, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn kinetic_virial_for_odd_state() {
        let z1: f64 = airy_zero(ZeroKind::AiZero, 1).unwrap();
        let norm = gordon_integral(0, z1, z1).unwrap().value;
        let t = derivative_integral(z1).unwrap() / norm;
        assert!((t - z1 / 3.0).abs() < 1e-13);
    }
}
