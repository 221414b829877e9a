//! Normalized oscillator eigenfunctions `c_n H_n(y) exp(-y^2/2)`.

use crate::error::{Error, Result};
use crate::num::Real;

/// psi_n(y) for the full oscillator, unit-normalized on the real line.
///
/// Runs the orthonormal three-term recurrence on the functions themselves,
/// keeping the Gaussian weight as a separate log scale so neither the
/// polynomial nor the weight can overflow or underflow early.
pub fn hermite_weighted<T: Real>(n: usize, y: T) -> Result<T> {
    if !y.is_finite() {
        return Err(Error::Domain(format!(
            "oscillator argument must be finite, got {y}"
        )));
    }
    Ok(hermite_unchecked(n, y))
}

pub(crate) fn hermite_unchecked<T: Real>(n: usize, y: T) -> T {
    let big = T::max_value().sqrt().sqrt();
    let mut log_scale = -y * y * T::half();
    let mut prev = T::zero();
    let mut cur = T::one() / T::PI().sqrt().sqrt();
    let sqrt2 = T::SQRT_2();
    for k in 0..n {
        let kf = T::from_usize(k);
        let k1 = kf + T::one();
        let next = sqrt2 / k1.sqrt() * y * cur - (kf / k1).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > big {
            cur /= big;
            prev /= big;
            log_scale += big.ln();
        }
    }
    let w = log_scale.exp();
    if w > T::min_positive_value() && w.is_finite() {
        cur * w
    } else if cur == T::zero() {
        T::zero()
    } else {
        cur.signum() * (cur.abs().ln() + log_scale).exp()
    }
}

/// psi_n and dpsi_n/dy together, via psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}.
pub(crate) fn hermite_with_derivative<T: Real>(n: usize, y: T) -> (T, T) {
    let below = if n == 0 {
        T::zero()
    } else {
        hermite_unchecked(n - 1, y)
    };
    let here = hermite_unchecked(n, y);
    let above = hermite_unchecked(n + 1, y);
    let nf = T::from_usize(n);
    let d = (nf * T::half()).sqrt() * below - ((nf + T::one()) * T::half()).sqrt() * above;
    (here, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_value() {
        let v: f64 = hermite_weighted(0, 0.0).unwrap();
        assert!((v - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite_weighted(1, 0.0f64).unwrap(), 0.0);
    }

    #[test]
    fn even_states_at_origin_follow_double_factorial_ratio() {
        // psi_{2m}(0) = pi^{-1/4} (-1)^m sqrt((2m-1)!!/(2m)!!)
        let mut ratio = 1.0f64;
        for m in 0..60usize {
            let exact = (-1.0f64).powi(m as i32) * ratio.sqrt() / std::f64::consts::PI.powf(0.25);
            let got = hermite_weighted(2 * m, 0.0f64).unwrap();
            assert!((got - exact).abs() <= 1e-13 * exact.abs(), "m={m}");
            ratio *= (2 * m + 1) as f64 / (2 * m + 2) as f64;
        }
    }

    #[test]
    fn far_tail_does_not_underflow_prematurely() {
        // psi_200 at y = 25 is ~1e-84: finite and nonzero.
        let v = hermite_weighted(200, 25.0f64).unwrap();
        assert!(v.is_finite() && v != 0.0);
        assert!(hermite_weighted(3, f64::NAN).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-5;
        for n in [0usize, 1, 5, 30] {
            for &y in &[-2.1f64, 0.3, 4.4] {
                let (_, d) = hermite_with_derivative(n, y);
                let fd = (hermite_unchecked(n, y + h) - hermite_unchecked(n, y - h)) / (2.0 * h);
                assert!((d - fd).abs() < 1e-8 * (1.0 + d.abs()), "n={n} y={y}");
            }
        }
    }
}
