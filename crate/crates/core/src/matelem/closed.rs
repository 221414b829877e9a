//! Closed-form matrix elements of the symmetric linear potential and the half oscillator.

use crate::error::{Error, Result};
use crate::num::Real;
use crate::spectra::{airy_zero, half_sho_slope, ZeroKind};
use crate::specfun::d_value;

fn nonzero(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::Index(format!("{what} index starts at 1")))
    } else {
        Ok(())
    }
}

/// `<odd n| z |even k>` = -2 / (sqrt(eta_k) (eta_k - zeta_n)^3).
pub fn dipole_linear<T: Real>(n_odd: usize, k_even: usize) -> Result<T> {
    nonzero(n_odd, "odd-state")?;
    nonzero(k_even, "even-state")?;
    let z: T = airy_zero(ZeroKind::AiZero, n_odd)?;
    let e: T = airy_zero(ZeroKind::AiPrimeZero, k_even)?;
    Ok(dipole_linear_from(z, e))
}

pub fn dipole_linear_from<T: Real>(zeta: T, eta: T) -> T {
    let d = eta - zeta;
    -T::two() / (eta.sqrt() * d * d * d)
}

/// `<even n| z^2 |even k>`; the diagonal is 8 eta^2/15 + 1/(5 eta).
pub fn even_even_z2<T: Real>(n: usize, k: usize) -> Result<T> {
    nonzero(n, "even-state")?;
    nonzero(k, "even-state")?;
    let a: T = airy_zero(ZeroKind::AiPrimeZero, n)?;
    if n == k {
        return Ok(T::lit(8.0 / 15.0) * a * a + (T::lit(5.0) * a).recip());
    }
    let b: T = airy_zero(ZeroKind::AiPrimeZero, k)?;
    Ok(even_even_z2_from(a, b))
}

pub fn even_even_z2_from<T: Real>(a: T, b: T) -> T {
    let d = a - b;
    let d2 = d * d;
    -T::lit(12.0) * (a + b) / ((a * b).sqrt() * d2 * d2)
}

/// `<odd n| z^2 |odd k>`; the diagonal is 8 zeta^2/15.
pub fn odd_odd_z2<T: Real>(n: usize, k: usize) -> Result<T> {
    nonzero(n, "odd-state")?;
    nonzero(k, "odd-state")?;
    let a: T = airy_zero(ZeroKind::AiZero, n)?;
    if n == k {
        return Ok(T::lit(8.0 / 15.0) * a * a);
    }
    let b: T = airy_zero(ZeroKind::AiZero, k)?;
    let d = a - b;
    let d2 = d * d;
    Ok(-T::lit(24.0) / (d2 * d2))
}

/// `<m| y |n>` = -psi_n'(0) psi_m'(0) / (2 [4(n-m)^2 - 1]) for the half oscillator.
pub fn dipole_half_sho<T: Real>(n: usize, m: usize) -> T {
    let d = T::from_usize(n) - T::from_usize(m);
    -half_sho_slope::<T>(n) * half_sho_slope::<T>(m) / (T::two() * (T::lit(4.0) * d * d - T::one()))
}

/// Magnitude form via D: |<m|y|n>|^2 = D_n D_m / (4 pi [4(n-m)^2 - 1]^2).
pub fn dipole_half_sho_squared<T: Real>(n: usize, m: usize) -> T {
    let d = T::from_usize(n) - T::from_usize(m);
    let den = T::lit(4.0) * d * d - T::one();
    d_value::<T>(n) * d_value::<T>(m) / (T::lit(4.0) * T::PI() * den * den)
}

/// `<n| y^2 |k>` for the half oscillator (nearest-neighbour structure).
pub fn half_sho_y2<T: Real>(n: usize, k: usize) -> T {
    let kf = T::from_usize(k);
    if n == k {
        (T::lit(4.0) * kf + T::lit(3.0)) * T::half()
    } else if n + 1 == k {
        ((T::two() * kf + T::one()) * T::two() * kf).sqrt() * T::half()
    } else if n == k + 1 {
        ((T::two() * kf + T::two()) * (T::two() * kf + T::lit(3.0))).sqrt() * T::half()
    } else {
        T::zero()
    }
}

/// `<n| y^3 |k>` = -6(2n+2k+3)/(4(n-k)^2 - 9) <n|y|k>.
pub fn half_sho_y3<T: Real>(n: usize, k: usize) -> T {
    let d = T::from_usize(n) - T::from_usize(k);
    let c = -T::lit(6.0) * T::from_usize(2 * n + 2 * k + 3) / (T::lit(4.0) * d * d - T::lit(9.0));
    c * dipole_half_sho::<T>(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_dipole() {
        let v: f64 = dipole_linear(1, 1).unwrap();
        assert!((v - 0.8628).abs() < 5e-4, "{v}");
        assert!(dipole_linear::<f64>(0, 1).is_err());
    }

    #[test]
    fn dipole_decays_with_separation() {
        // k = 1 sits below zeta_1; the decay starts once eta_k passes it.
        let mut last = f64::INFINITY;
        for k in 2..=10 {
            let v: f64 = dipole_linear(1, k).unwrap();
            assert!(v.abs() < last);
            last = v.abs();
        }
        let k8: f64 = dipole_linear(1, 8).unwrap();
        assert!((k8 + 1.122_234_125_300_439e-3).abs() < 1e-15);
        assert!(dipole_linear::<f64>(1, 9).unwrap().abs() < 1e-3);
    }

    #[test]
    fn half_sho_diagonal_dipole() {
        let v: f64 = dipole_half_sho(0, 0);
        assert!((v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
        let sq: f64 = dipole_half_sho_squared(3, 5);
        let v: f64 = dipole_half_sho(3, 5);
        assert!((sq - v * v).abs() < 1e-15);
    }

    #[test]
    fn y3_at_ground_state() {
        // 2 int_0^inf y^3 psi_1^2 = 4/sqrt(pi)
        let v: f64 = half_sho_y3(0, 0);
        assert!((v - 4.0 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }
}
